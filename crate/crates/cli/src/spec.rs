//! Experiment selection, flag/config merging and per-experiment defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use wigner_weyl::weyl::ScaleExponent;
use wigner_weyl::{snap_hbar, Oscillator, Weight, Window};

/// Smallest `hbar` accepted without `--force`.
pub const HBAR_FLOOR: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid --{field}: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("reading config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
}

fn bad(field: &'static str, reason: impl std::fmt::Display) -> SpecError {
    SpecError::Field {
        field,
        reason: reason.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Eval,
    ScanInterface,
    ScanBulk,
    VerifyNorms,
    VerifyLaws,
    Fig1,
    Fig2,
    ResolveConventions,
    EnvelopeFit,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eval => "eval",
            Self::ScanInterface => "scan-interface",
            Self::ScanBulk => "scan-bulk",
            Self::VerifyNorms => "verify-norms",
            Self::VerifyLaws => "verify-laws",
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::ResolveConventions => "resolve-conventions",
            Self::EnvelopeFit => "envelope-fit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// One eigenspace, `N = --level` or the level at `--energy`.
    Single,
    /// Levels in `[e1, e2)`.
    Bulk,
    /// `n_minus <= N - N(E) < n_plus`.
    SharpAiry,
    /// `f(hbar^-gamma (E - E_N))` weights.
    Smoothed,
}

/// Every flag, also accepted as a key of the TOML config file. Flags win
/// over the file.
#[derive(Args, Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// TOML file with the same keys as the long flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub e1: Option<f64>,
    #[arg(long)]
    pub e2: Option<f64>,
    /// Smoothing exponent: 1, 2/3 or 0.
    #[arg(long)]
    pub gamma: Option<String>,
    /// `gaussian:SIGMA` or `fejer:T`.
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, value_enum)]
    pub window: Option<WindowKind>,
    #[arg(long)]
    pub level: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n_minus: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n_plus: Option<i64>,
    /// Classical energy `H(x, xi)` for `eval` and `envelope-fit`.
    #[arg(long)]
    pub hamiltonian: Option<f64>,
    /// Lower end of the scanned variable (`u`, `H` or `rho` by experiment).
    #[arg(long, allow_hyphen_values = true)]
    pub u_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Pass/fail threshold on the maximum error of a scan.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized validation points.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cases: Option<usize>,
    /// CSV output (the verdict file for `resolve-conventions`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json_report: Option<PathBuf>,
    /// Allow `hbar < 1e-4`.
    #[arg(long)]
    #[serde(default)]
    pub force: bool,
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let err = |reason: String| SpecError::Config {
            path: path.to_path_buf(),
            reason,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        Self::from_toml(&text).map_err(|e| err(e.to_string()))
    }

    /// Reads `--config` if given and fills every unset flag from it.
    pub fn resolve(self) -> Result<Self, SpecError> {
        match &self.config {
            Some(p) => {
                let file = Self::load(p)?;
                Ok(self.or(file))
            }
            None => Ok(self),
        }
    }

    pub fn or(self, file: Self) -> Self {
        Self {
            config: self.config,
            hbar: self.hbar.or(file.hbar),
            dim: self.dim.or(file.dim),
            energy: self.energy.or(file.energy),
            e1: self.e1.or(file.e1),
            e2: self.e2.or(file.e2),
            gamma: self.gamma.or(file.gamma),
            weight: self.weight.or(file.weight),
            window: self.window.or(file.window),
            level: self.level.or(file.level),
            n_minus: self.n_minus.or(file.n_minus),
            n_plus: self.n_plus.or(file.n_plus),
            hamiltonian: self.hamiltonian.or(file.hamiltonian),
            u_min: self.u_min.or(file.u_min),
            u_max: self.u_max.or(file.u_max),
            points: self.points.or(file.points),
            n_min: self.n_min.or(file.n_min),
            n_max: self.n_max.or(file.n_max),
            tol: self.tol.or(file.tol),
            seed: self.seed.or(file.seed),
            cases: self.cases.or(file.cases),
            out: self.out.or(file.out),
            json_report: self.json_report.or(file.json_report),
            force: self.force || file.force,
        }
    }
}

pub fn parse_weight(s: &str) -> Result<Weight, SpecError> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| bad("weight", format!("expected KIND:VALUE, got {s:?}")))?;
    let v: f64 = arg
        .trim()
        .parse()
        .map_err(|_| bad("weight", format!("{arg:?} is not a number")))?;
    match kind.trim() {
        "gaussian" => Weight::gaussian(v),
        "fejer" => Weight::fejer(v),
        other => return Err(bad("weight", format!("unknown weight {other:?}"))),
    }
    .map_err(|e| bad("weight", e))
}

pub fn parse_gamma(s: &str) -> Result<ScaleExponent, SpecError> {
    ScaleExponent::parse(s).ok_or_else(|| bad("gamma", format!("expected 1, 2/3 or 0, got {s:?}")))
}

/// Scanned variable and its uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub variable: &'static str,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub cfg: Oscillator,
    pub hbar_requested: f64,
    pub energy: f64,
    pub window: Option<Window>,
    pub grid: Option<Grid>,
    pub hamiltonian: Option<f64>,
    pub levels: (u64, u64),
    pub tol: Option<f64>,
    pub seed: u64,
    pub cases: usize,
    pub out: Option<PathBuf>,
    pub json_report: Option<PathBuf>,
}

struct Defaults {
    hbar: f64,
    snap: bool,
    window: Option<WindowKind>,
    grid: Option<(&'static str, f64, f64, usize)>,
    hamiltonian: Option<f64>,
    levels: (u64, u64),
}

fn defaults(kind: ExperimentKind, s: &Settings) -> Defaults {
    use ExperimentKind::*;
    let window = s.window;
    let base = Defaults {
        hbar: 1e-2,
        snap: false,
        window: None,
        grid: None,
        hamiltonian: None,
        levels: (0, 0),
    };
    match kind {
        Eval => Defaults {
            snap: matches!(
                window,
                None | Some(WindowKind::Single) | Some(WindowKind::SharpAiry)
            ),
            window: Some(window.unwrap_or(WindowKind::Single)),
            ..base
        },
        ScanInterface => Defaults {
            snap: true,
            window: Some(window.unwrap_or(WindowKind::Single)),
            grid: Some(("u", -4.0, 4.0, 161)),
            ..base
        },
        ScanBulk => Defaults {
            window: Some(window.unwrap_or(WindowKind::Bulk)),
            grid: Some(("H", 0.0, 1.0, 201)),
            ..base
        },
        VerifyNorms => Defaults {
            hbar: 1.0,
            levels: (0, 20),
            ..base
        },
        VerifyLaws => base,
        Fig1 => Defaults {
            snap: true,
            grid: Some(("rho", 0.0, 1.4, 2000)),
            ..base
        },
        Fig2 => Defaults {
            hbar: 2e-2,
            snap: true,
            grid: Some(("u", -6.0, 6.0, 1201)),
            ..base
        },
        ResolveConventions => base,
        EnvelopeFit => Defaults {
            hbar: 0.1,
            hamiltonian: Some(1.0),
            levels: (1000, 10000),
            ..base
        },
    }
}

impl ExperimentSpec {
    pub fn from_settings(kind: ExperimentKind, s: &Settings) -> Result<Self, SpecError> {
        let def = defaults(kind, s);
        let dim = s.dim.unwrap_or(1);
        if !(1..=16).contains(&dim) {
            return Err(bad("dim", format!("must be in 1..=16, got {dim}")));
        }
        let energy = s.energy.unwrap_or(0.5);
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(bad("energy", "must be positive"));
        }
        let requested = s.hbar.unwrap_or(def.hbar);
        if !(requested > 0.0 && requested.is_finite()) {
            return Err(bad("hbar", "must be positive"));
        }
        if requested < HBAR_FLOOR && !s.force {
            return Err(bad(
                "hbar",
                format!("{requested:e} is below {HBAR_FLOOR:e}; pass --force to run anyway"),
            ));
        }
        let hbar = if def.snap {
            snap_hbar(energy, requested, dim).map_err(|e| bad("hbar", e))?
        } else {
            requested
        };
        let cfg = Oscillator::new(hbar, dim).map_err(|e| bad("hbar", e))?;

        let window = match def.window {
            None => None,
            Some(k) => Some(build_window(k, &cfg, energy, s)?),
        };

        let grid = match def.grid {
            None => None,
            Some((variable, lo, hi, count)) => {
                let (lo, hi) = if kind == ExperimentKind::ScanBulk {
                    (lo * energy, 2.0 * hi * energy)
                } else {
                    (lo, hi)
                };
                let g = Grid {
                    variable,
                    min: s.u_min.unwrap_or(lo),
                    max: s.u_max.unwrap_or(hi),
                    count: s.points.unwrap_or(count),
                };
                if g.count < 2 {
                    return Err(bad("points", "grid needs at least 2 points"));
                }
                if !(g.min < g.max) {
                    return Err(bad("u-min", "must be below --u-max"));
                }
                Some(g)
            }
        };

        let hamiltonian = s.hamiltonian.or(def.hamiltonian).or(match kind {
            ExperimentKind::Eval => Some(energy),
            _ => None,
        });
        if let Some(h) = hamiltonian {
            if !(h >= 0.0 && h.is_finite()) {
                return Err(bad("hamiltonian", "must be nonnegative"));
            }
        }
        let levels = (
            s.n_min.unwrap_or(def.levels.0),
            s.n_max.unwrap_or(def.levels.1),
        );
        if kind == ExperimentKind::EnvelopeFit && !(levels.0 >= 10 && levels.0 < levels.1) {
            return Err(bad("n-min", "needs 10 <= n-min < n-max"));
        }

        if let Some(out) = &s.out {
            check_writable(out, "out")?;
        }
        if let Some(p) = &s.json_report {
            check_writable(p, "json-report")?;
        }

        Ok(Self {
            kind,
            cfg,
            hbar_requested: requested,
            energy,
            window,
            grid,
            hamiltonian,
            levels,
            tol: s.tol,
            seed: s.seed.unwrap_or(20_240_601),
            cases: s.cases.unwrap_or(100),
            out: s.out.clone(),
            json_report: s.json_report.clone(),
        })
    }

    /// Parameters echoed into the report.
    pub fn parameters(&self) -> serde_json::Value {
        json!({
            "hbar": self.cfg.hbar(),
            "hbar_requested": self.hbar_requested,
            "dim": self.cfg.dim(),
            "energy": self.energy,
            "window": self.window.as_ref().map(window_json),
            "grid": self.grid,
            "hamiltonian": self.hamiltonian,
            "levels": [self.levels.0, self.levels.1],
            "tol": self.tol,
            "seed": self.seed,
            "cases": self.cases,
        })
    }
}

fn check_writable(path: &Path, field: &'static str) -> Result<(), SpecError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(bad(
            field,
            format!("directory {} does not exist", dir.display()),
        ));
    }
    Ok(())
}

fn build_window(
    kind: WindowKind,
    cfg: &Oscillator,
    energy: f64,
    s: &Settings,
) -> Result<Window, SpecError> {
    Ok(match kind {
        WindowKind::Single => Window::Single(match s.level {
            Some(n) => n,
            None => cfg.level_of(energy).map_err(|e| bad("energy", e))?,
        }),
        WindowKind::Bulk => {
            let e1 = s.e1.unwrap_or(0.0);
            let e2 = s.e2.unwrap_or(energy);
            if !(e1 >= 0.0 && e1 < e2) {
                return Err(bad("e1", "needs 0 <= e1 < e2"));
            }
            Window::SharpBulk { e1, e2 }
        }
        WindowKind::SharpAiry => {
            cfg.level_of(energy).map_err(|e| bad("energy", e))?;
            let n_minus = s.n_minus.unwrap_or(0);
            let n_plus = s
                .n_plus
                .unwrap_or_else(|| cfg.hbar().powf(-1.0 / 3.0).ceil() as i64);
            if n_minus >= n_plus {
                return Err(bad("n-minus", "needs n-minus < n-plus"));
            }
            Window::SharpAiry {
                energy,
                n_minus,
                n_plus,
            }
        }
        WindowKind::Smoothed => {
            let gamma = parse_gamma(s.gamma.as_deref().unwrap_or("2/3"))?;
            let weight = parse_weight(s.weight.as_deref().unwrap_or(match gamma {
                ScaleExponent::Zero => "gaussian:0.25",
                ScaleExponent::One => "gaussian:1",
                ScaleExponent::TwoThirds => "fejer:1",
            }))?;
            Window::Smoothed {
                energy,
                gamma,
                weight,
            }
        }
    })
}

fn window_json(w: &Window) -> serde_json::Value {
    match w {
        Window::Single(n) => json!({"kind": "single", "level": n}),
        Window::SharpBulk { e1, e2 } => json!({"kind": "bulk", "e1": e1, "e2": e2}),
        Window::SharpAiry {
            energy,
            n_minus,
            n_plus,
        } => json!({"kind": "sharp-airy", "energy": energy, "n_minus": n_minus, "n_plus": n_plus}),
        Window::Smoothed {
            energy,
            gamma,
            weight,
        } => json!({"kind": "smoothed", "energy": energy, "gamma": gamma, "weight": weight}),
    }
}
