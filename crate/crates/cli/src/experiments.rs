//! `run(spec)`: one report per experiment kind.

use std::time::Instant;

use anyhow::{bail, Context};
use rayon::prelude::*;

use wigner_weyl::laws::{
    airy_individual_scale, bulk_interface, bulk_leading, sharp_airy_interface,
    smoothed_airy_interface, smoothed_bulk_leading, Conventions,
};
use wigner_weyl::oracle::smoothed_sum_fourier;
use wigner_weyl::weyl::{sum_smoothed_at, sum_window_at, ScaleExponent, SmoothedOptions};
use wigner_weyl::{airy_ai, Offset, Window};

use crate::checks::{self, Outcome};
use crate::conventions::resolve_conventions;
use crate::report::{Check, RunReport, Table};
use crate::spec::{ExperimentKind, ExperimentSpec};

pub fn run(spec: &ExperimentSpec) -> anyhow::Result<RunReport> {
    let start = Instant::now();
    let mut report = match spec.kind {
        ExperimentKind::ResolveConventions => resolve_conventions()?,
        kind => {
            let mut r = RunReport::new(kind.name(), spec.parameters());
            let (outcome, table) = match kind {
                ExperimentKind::Eval => eval(spec)?,
                ExperimentKind::ScanInterface => scan_interface(spec)?,
                ExperimentKind::ScanBulk => scan_bulk(spec)?,
                ExperimentKind::VerifyNorms => verify_norms(spec)?,
                ExperimentKind::VerifyLaws => (verify_laws(spec)?, None),
                ExperimentKind::Fig1 => fig1(spec)?,
                ExperimentKind::Fig2 => fig2(spec)?,
                ExperimentKind::EnvelopeFit => envelope(spec)?,
                ExperimentKind::ResolveConventions => unreachable!(),
            };
            for c in outcome.checks {
                r.push(c);
            }
            r.summary.max_error = outcome.max_error;
            r.summary.fitted_rate = outcome.fitted_rate;
            if let Some(t) = table {
                r.set_table(t);
            }
            r
        }
    };
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

type Produced = (Outcome, Option<Table>);

fn window(spec: &ExperimentSpec) -> &Window {
    spec.window.as_ref().expect("experiment has a window")
}

fn tolerance_check(spec: &ExperimentSpec, out: &mut Outcome) {
    if let (Some(tol), Some(e)) = (spec.tol, out.max_error) {
        out.checks.push(Check::at_most("max error", e, tol));
    }
}

fn window_value(spec: &ExperimentSpec, w: &Window, h: f64) -> anyhow::Result<f64> {
    Ok(match w {
        Window::Smoothed {
            energy,
            gamma,
            weight,
        } => {
            let opts = SmoothedOptions {
                rel_tol: 1e-14,
                max_terms: 20_000_000,
            };
            sum_smoothed_at(&spec.cfg, *energy, *gamma, weight, h, opts)?.value
        }
        w => sum_window_at(&spec.cfg, w, h)?,
    })
}

fn eval(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let h = spec.hamiltonian.expect("eval has a point");
    let v = window_value(spec, window(spec), h)
        .with_context(|| format!("evaluating the window at H={h}"))?;
    let mut t = Table::new(&["H", "value", "scaled"]);
    t.meta("quantity", "window sum at H; scaled = (2 pi hbar)^d value");
    t.meta("hbar", spec.cfg.hbar());
    t.meta("dim", spec.cfg.dim());
    t.rows.push(vec![h, v, v / spec.cfg.phase_cell_density()]);
    Ok((Outcome::default(), Some(t)))
}

fn scan_interface(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let cfg = &spec.cfg;
    let hbar = cfg.hbar();
    let energy = spec.energy;
    let w = window(spec);
    let conv = Conventions::resolved();
    let cell = 1.0 / cfg.phase_cell_density();
    let (scale, note) = match w {
        Window::Single(_) => (
            1.0 / airy_individual_scale(cfg, energy),
            "W_N / (2 (2 pi hbar)^-d (hbar/2E)^(1/3)) vs Ai(u/E)",
        ),
        Window::SharpBulk { .. } => (cell, "(2 pi hbar)^d sharp sum vs int_0^inf Ai(u/E + l) dl"),
        Window::SharpAiry { .. } => (cell, "(2 pi hbar)^d sharp sum vs integrated Airy window"),
        Window::Smoothed { gamma, .. } => {
            if *gamma != ScaleExponent::TwoThirds {
                bail!("invalid --gamma: scan-interface needs gamma = 2/3 for a smoothed window");
            }
            (cell, "(2 pi hbar)^d smoothed sum vs I_0(u)")
        }
    };
    let law = |u: f64| -> anyhow::Result<f64> {
        Ok(match w {
            Window::Single(_) => airy_ai(u / energy),
            Window::SharpBulk { .. } => bulk_interface(u, energy),
            Window::SharpAiry {
                n_minus, n_plus, ..
            } => {
                let l = hbar.cbrt();
                sharp_airy_interface(
                    u,
                    energy,
                    l * *n_minus as f64,
                    l * *n_plus as f64,
                    conv.airy_scale,
                )?
            }
            Window::Smoothed { weight, .. } => {
                smoothed_airy_interface(u, energy, weight, conv.airy_scale)?
            }
        })
    };
    let exact = |h: f64| -> anyhow::Result<f64> {
        match w {
            Window::Smoothed { weight, gamma, .. } if weight.fourier_support().is_some() => {
                Ok(smoothed_sum_fourier(cfg, energy, *gamma, weight, h)?)
            }
            w => window_value(spec, w, h),
        }
    };
    let grid = spec.grid.as_ref().expect("scan has a grid");
    let rows = grid
        .values()
        .par_iter()
        .map(|&u| -> anyhow::Result<Vec<f64>> {
            let h = Offset { energy, u }.hamiltonian(hbar);
            let e = scale * exact(h).with_context(|| format!("exact sum at u={u}"))?;
            let l = law(u)?;
            Ok(vec![u, h, e, l, (e - l).abs()])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut t = Table::new(&["u", "H", "exact_scaled", "law", "abs_error"]);
    t.meta("quantity", note);
    t.meta("hbar", hbar);
    t.meta("dim", cfg.dim());
    t.meta("energy", energy);
    t.meta("H", "E + u (hbar/2E)^(2/3)");
    t.rows = rows;
    let mut out = Outcome {
        max_error: Some(checks::max_abs_error(&t)),
        ..Outcome::default()
    };
    tolerance_check(spec, &mut out);
    Ok((out, Some(t)))
}

fn scan_bulk(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let cfg = &spec.cfg;
    let cell = 1.0 / cfg.phase_cell_density();
    let w = window(spec);
    let conv = Conventions::resolved();
    let leading = |h: f64| -> anyhow::Result<f64> {
        Ok(match w {
            Window::SharpBulk { e1, e2 } => match bulk_leading(cfg, *e1, *e2, h) {
                Ok(b) => b.value,
                Err(_) => f64::NAN,
            },
            Window::Smoothed {
                gamma: ScaleExponent::Zero,
                weight,
                ..
            } => smoothed_bulk_leading(cfg, weight, h, conv.smoothed_bulk_density),
            _ => bail!(
                "invalid --window: scan-bulk needs a bulk window or a smoothed window with gamma 0"
            ),
        })
    };
    let grid = spec.grid.as_ref().expect("scan has a grid");
    let rows = grid
        .values()
        .par_iter()
        .map(|&h| -> anyhow::Result<Vec<f64>> {
            let e = cell * window_value(spec, w, h).with_context(|| format!("sum at H={h}"))?;
            let l = cell * leading(h)?;
            Ok(vec![h, e, l, (e - l).abs()])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut t = Table::new(&["H", "exact_scaled", "leading", "abs_error"]);
    t.meta(
        "quantity",
        "(2 pi hbar)^d window sum vs its bulk leading term",
    );
    t.meta("leading", "NaN on a window boundary");
    t.meta("hbar", cfg.hbar());
    t.meta("dim", cfg.dim());
    t.rows = rows;
    let mut out = Outcome {
        max_error: Some(checks::max_defined_error(&t)),
        ..Outcome::default()
    };
    tolerance_check(spec, &mut out);
    Ok((out, Some(t)))
}

fn verify_norms(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let levels: Vec<u64> = (spec.levels.0..=spec.levels.1).collect();
    let (out, mut t) =
        checks::norm_identities(&[spec.cfg.dim()], &[spec.cfg.hbar()], &levels, false)?;
    t.meta(
        "quantity",
        "phase-space integrals of W_N, W_N^2 and W_N W_N+1",
    );
    Ok((out, Some(t)))
}

fn verify_laws(spec: &ExperimentSpec) -> anyhow::Result<Outcome> {
    let conv = Conventions::resolved();
    let e = spec.energy;
    let coarse = spec.hbar_requested;
    let pair = [coarse, coarse / 10.0];
    let dims = [spec.cfg.dim()];
    let mut out = Outcome::default();
    let mut tag = |label: &str, o: Outcome| {
        for mut c in o.checks {
            c.name = format!("{label}: {}", c.name);
            out.checks.push(c);
        }
    };
    tag(
        "oracle equivalence",
        checks::oracle_equivalence(spec.cases, spec.seed, 1e-8)?,
    );
    tag(
        "individual Airy",
        checks::individual_airy_rate(e, &dims, pair)?,
    );
    tag(
        "bulk interior/exterior",
        checks::bulk_interior_exterior(e, &dims, &[2e-2, 5e-3])?,
    );
    tag(
        "level-localized",
        checks::localized_law(e, &dims, 5e-3, conv.localized_form)?,
    );
    tag(
        "smoothed interface",
        checks::smoothed_interface(e, &dims, pair, conv.airy_scale)?,
    );
    tag(
        "sharp interface",
        checks::sharp_interface(e, &dims, pair, conv.airy_scale)?,
    );
    Ok(out)
}

fn fig1(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let t = checks::fig1_table(&spec.cfg, spec.energy, spec.grid.as_ref().expect("grid"))?;
    let out = checks::fig1_checks(&t, spec.energy);
    Ok((out, Some(t)))
}

fn fig2(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let t = checks::fig2_table(&spec.cfg, spec.energy, spec.grid.as_ref().expect("grid"))?;
    let e = checks::max_abs_error(&t);
    let mut out = Outcome {
        max_error: Some(e),
        ..Outcome::default()
    };
    out.checks.push(Check::at_most(
        "sup |exact - Airy limit|",
        e,
        spec.tol.unwrap_or(0.1),
    ));
    Ok((out, Some(t)))
}

fn envelope(spec: &ExperimentSpec) -> anyhow::Result<Produced> {
    let h = spec.hamiltonian.expect("envelope-fit has a point");
    let (mut out, t) = checks::envelope_fit(&spec.cfg, h, spec.levels)?;
    let abel = checks::abel_mass(&[spec.cfg.dim()], spec.cfg.hbar(), h, 1e-5, false)?;
    out.checks.extend(abel.checks);
    out.max_error = abel.max_error;
    Ok((out, Some(t)))
}
