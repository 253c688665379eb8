//! Verification computations shared by the experiments and the acceptance
//! suite. Each returns its checks with the tolerances that decided them.

use std::f64::consts::PI;

use anyhow::Context;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wigner_weyl::laws::{
    airy_individual_scale, bulk_interface, hbar_localized_sum, sharp_airy_interface,
    smoothed_airy_interface, AiryScale, CellDensity, LocalizedForm,
};
use wigner_weyl::numerics::airy::{airy_ai_asymptotic, airy_ai_series, airy_zero_in, Z_SWITCH};
use wigner_weyl::numerics::fit::rate_exponent;
use wigner_weyl::numerics::quadrature::{integrate, AdaptiveOptions};
use wigner_weyl::numerics::WeightedLaguerre;
use wigner_weyl::oracle::{
    fourier_coefficient_wigner, radial_phase_space_integral, smoothed_sum_fourier,
    stationary_phase_leading,
};
use wigner_weyl::weyl::{
    abel_total, envelope_exponent, local_envelope, sum_sharp_airy_at, sum_sharp_bulk_at,
    sum_smoothed_at, ScaleExponent, SmoothedOptions,
};
use wigner_weyl::{
    airy_ai, airy_tail, eigenspace_dim, snap_hbar, wigner_at_energy, wigner_eigenspace_scaled,
    Contour, DoubleWord, Offset, Oscillator, Weight,
};

use crate::report::{Check, Table};
use crate::spec::Grid;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub max_error: Option<f64>,
    pub fitted_rate: Option<f64>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn error(&mut self, e: f64) {
        self.max_error = Some(self.max_error.map_or(e, |m| m.max(e)));
    }

    pub fn extend(&mut self, o: Outcome) {
        self.checks.extend(o.checks);
        if let Some(e) = o.max_error {
            self.error(e);
        }
        if o.fitted_rate.is_some() {
            self.fitted_rate = o.fitted_rate;
        }
    }
}

fn oscillator(hbar: f64, dim: u32) -> anyhow::Result<Oscillator> {
    Ok(Oscillator::new(hbar, dim)?)
}

/// Oscillator whose level set contains `energy`, with `hbar` nearest `target`.
pub fn snapped(energy: f64, target: f64, dim: u32) -> anyhow::Result<Oscillator> {
    oscillator(snap_hbar(energy, target, dim)?, dim)
}

fn sup(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter()
        .fold(0.0, |a, b| if b.is_nan() { b } else { a.max(b) })
}

// ---------------------------------------------------------------- oracles

/// Laguerre closed form against the contour-integral coefficient on random
/// `(d, hbar, N, H)` with `d <= 3`, `N <= 400`, `H / E_N <= 3`.
pub fn oracle_equivalence(cases: usize, seed: u64, tol: f64) -> anyhow::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(u32, f64, u64, f64)> = (0..cases)
        .map(|_| {
            let d = rng.gen_range(1..=3u32);
            let hbar = 10f64.powf(rng.gen_range(-2.0..0.0));
            let n = rng.gen_range(0..=400u64);
            let ratio = rng.gen_range(0.0..3.0);
            (d, hbar, n, ratio)
        })
        .collect();
    let errs = points
        .par_iter()
        .map(|&(d, hbar, n, ratio)| -> anyhow::Result<f64> {
            let cfg = oscillator(hbar, d)?;
            let h = ratio * hbar * (n as f64 + cfg.half_dim());
            let exact = wigner_eigenspace_scaled(&cfg, n, h);
            let o = fourier_coefficient_wigner(&cfg, n, h, &Contour::default())
                .with_context(|| format!("contour oracle at d={d} hbar={hbar} N={n} H={h}"))?;
            Ok((o.scaled().div(exact).to_float() - 1.0).abs())
        })
        .collect::<anyhow::Result<Vec<f64>>>()?;
    let worst = sup(errs);
    let mut out = Outcome::default();
    out.error(worst);
    out.push(Check::at_most(
        format!("max relative difference over {cases} random cases"),
        worst,
        tol,
    ));
    Ok(out)
}

/// Phase-space integrals of `W_N`, `W_N^2` and `W_N W_{N+1}`.
///
/// `literal` adds the check `int W_N^2 = dim_N` with no cell factor next to
/// the Moyal form `int W_N^2 = (2 pi hbar)^{-d} dim_N`.
pub fn norm_identities(
    dims: &[u32],
    hbars: &[f64],
    levels: &[u64],
    literal: bool,
) -> anyhow::Result<(Outcome, Table)> {
    let mut jobs = Vec::new();
    for &d in dims {
        for &hbar in hbars {
            for &n in levels {
                jobs.push((d, hbar, n));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(d, hbar, n)| -> anyhow::Result<Vec<f64>> {
            let cfg = oscillator(hbar, d)?;
            let integral = |m: Option<u64>| -> anyhow::Result<f64> {
                let top = n.max(m.unwrap_or(0));
                let h_max = 2.0 * hbar * (top as f64 + cfg.half_dim()) + 40.0 * hbar;
                let panels = 8 * top as usize + 16;
                let v = match m {
                    None => radial_phase_space_integral(
                        |h| wigner_at_energy(&cfg, n, h),
                        d,
                        h_max,
                        panels,
                    ),
                    Some(m) => radial_phase_space_integral(
                        |h| wigner_at_energy(&cfg, n, h) * wigner_at_energy(&cfg, m, h),
                        d,
                        h_max,
                        panels,
                    ),
                };
                v.with_context(|| format!("phase-space integral d={d} hbar={hbar} N={n}"))
            };
            Ok(vec![
                d as f64,
                hbar,
                n as f64,
                eigenspace_dim(d, n),
                integral(None)?,
                integral(Some(n))?,
                integral(Some(n + 1))?,
                cfg.phase_cell_density(),
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "dim",
        "hbar",
        "N",
        "dim_N",
        "trace",
        "square",
        "cross_next",
        "cell_density",
    ]);
    let (mut tr, mut sq, mut lit, mut cross) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for r in &rows {
        let (d, n, dim_n, density) = (r[0] as u32, r[2] as u64, r[3], r[7]);
        let dim_m: f64 = eigenspace_dim(d, n + 1);
        tr = tr.max((r[4] - dim_n).abs() / dim_n);
        sq = sq.max((r[5] - density * dim_n).abs() / (density * dim_n));
        lit = lit.max((r[5] - dim_n).abs() / dim_n);
        cross = cross.max(r[6].abs() / (dim_n * dim_m).sqrt());
    }
    table.rows = rows;
    let mut out = Outcome::default();
    out.push(Check::at_most(
        "trace: int W_N = dim_N (relative)",
        tr,
        1e-6,
    ));
    if literal {
        out.push(Check::at_most(
            "square without cell factor: int W_N^2 = dim_N (relative)",
            lit,
            1e-6,
        ));
    }
    out.push(Check::at_most(
        "square: int W_N^2 = (2 pi hbar)^-d dim_N (relative)",
        sq,
        1e-6,
    ));
    out.push(Check::at_most(
        "cross: |int W_N W_N+1| / sqrt(dim_N dim_N+1)",
        cross,
        1e-8,
    ));
    out.error(tr.max(sq));
    Ok((out, table))
}

// ---------------------------------------------------------------- figures

/// `(2 pi hbar)^d (H/E)^{d/2} W_{N(E)}(H)` along `rho = sqrt(2H)`.
pub fn fig1_table(cfg: &Oscillator, energy: f64, grid: &Grid) -> anyhow::Result<Table> {
    let n = cfg.level_of(energy)?;
    let cell = 1.0 / cfg.phase_cell_density();
    let half_d = cfg.half_dim();
    let mut t = Table::new(&["rho", "H", "scaled"]);
    t.meta("figure", "scaled single-level Wigner function along a ray");
    t.meta("quantity", "(2 pi hbar)^d (H/E)^(d/2) W_N(H), H = rho^2/2");
    t.meta("hbar", cfg.hbar());
    t.meta("dim", cfg.dim());
    t.meta("energy", energy);
    t.meta("level", n);
    t.rows = grid
        .values()
        .par_iter()
        .map(|&rho| {
            let h = rho * rho / 2.0;
            let w = wigner_at_energy(cfg, n, h);
            vec![rho, h, cell * (h / energy).powf(half_d) * w]
        })
        .collect();
    Ok(t)
}

pub fn fig1_checks(t: &Table, energy: f64) -> Outcome {
    let rho = t.column("rho").unwrap_or_default();
    let h = t.column("H").unwrap_or_default();
    let s = t.column("scaled").unwrap_or_default();
    let (mut imax, mut peak) = (0, f64::NEG_INFINITY);
    for (i, &v) in s.iter().enumerate() {
        if v > peak {
            peak = v;
            imax = i;
        }
    }
    let env = sup(h
        .iter()
        .zip(&s)
        .filter(|(&h, _)| (0.45..=0.55).contains(&(h / energy)))
        .map(|(_, v)| v.abs()));
    let mut out = Outcome::default();
    out.push(Check::within(
        "peak of the scaled profile",
        peak,
        0.20,
        0.24,
    ));
    out.push(Check::within(
        "radius of the peak",
        rho.get(imax).copied().unwrap_or(f64::NAN),
        (2.0 * energy).sqrt() - 0.1,
        (2.0 * energy).sqrt() + 0.1,
    ));
    out.push(Check::within(
        "bulk envelope on H/E in [0.45, 0.55]",
        env,
        0.08,
        0.12,
    ));
    out
}

/// `(2 pi hbar)^d` times the sharp sum over `[0, E)` against
/// `int_0^inf Ai(u/E + lambda) d lambda`, `H = E + u (hbar/2E)^{2/3}`.
pub fn fig2_table(cfg: &Oscillator, energy: f64, grid: &Grid) -> anyhow::Result<Table> {
    let cell = 1.0 / cfg.phase_cell_density();
    let hbar = cfg.hbar();
    let mut t = Table::new(&["u", "exact_scaled_sum", "airy_limit", "abs_error"]);
    t.meta(
        "figure",
        "scaled sharp bulk Wigner-Weyl sum across the energy surface",
    );
    t.meta(
        "quantity",
        "(2 pi hbar)^d sum_{0 <= E_N < E} W_N(H) vs int_0^inf Ai(u/E + l) dl",
    );
    t.meta("hbar", hbar);
    t.meta("dim", cfg.dim());
    t.meta("energy", energy);
    t.rows = grid
        .values()
        .par_iter()
        .map(|&u| -> anyhow::Result<Vec<f64>> {
            let h = Offset { energy, u }.hamiltonian(hbar);
            let exact = cell * sum_sharp_bulk_at(cfg, 0.0, energy, h)?;
            let law = bulk_interface(u, energy);
            Ok(vec![u, exact, law, (exact - law).abs()])
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(t)
}

pub fn max_abs_error(t: &Table) -> f64 {
    sup(t.column("abs_error").unwrap_or_default())
}

/// As [`max_abs_error`], skipping rows where the law is undefined.
pub fn max_defined_error(t: &Table) -> f64 {
    sup(t
        .column("abs_error")
        .unwrap_or_default()
        .into_iter()
        .filter(|e| !e.is_nan()))
}

/// Sup error at the figure's `hbar` and at `hbar / 8`.
pub fn fig2_refinement(energy: f64, hbar_target: f64, dim: u32) -> anyhow::Result<Outcome> {
    let grid = Grid {
        variable: "u",
        min: -6.0,
        max: 6.0,
        count: 1201,
    };
    let coarse = snapped(energy, hbar_target, dim)?;
    let fine = snapped(energy, coarse.hbar() / 8.0, dim)?;
    let e0 = max_abs_error(&fig2_table(&coarse, energy, &grid)?);
    let e1 = max_abs_error(&fig2_table(&fine, energy, &grid)?);
    let mut out = Outcome::default();
    out.push(Check::at_most(
        format!("sup error at hbar={:.5}", coarse.hbar()),
        e0,
        0.1,
    ));
    out.push(Check::at_least(
        format!("shrink factor to hbar={:.6}", fine.hbar()),
        e0 / e1,
        1.5,
    ));
    out.error(e0);
    out.fitted_rate = Some(rate_exponent(coarse.hbar(), e0, fine.hbar(), e1));
    Ok(out)
}

// ---------------------------------------------------------------- laws

fn rate_check(label: &str, h: [f64; 2], e: [f64; 2], target: f64, band: f64) -> (f64, Check) {
    let r = rate_exponent(h[0], e[0], h[1], e[1]);
    (
        r,
        Check::within(
            format!("{label} rate exponent ({:.3e} -> {:.3e})", e[0], e[1]),
            r,
            target - band,
            target + band,
        ),
    )
}

fn u_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    Grid {
        variable: "u",
        min: lo,
        max: hi,
        count,
    }
    .values()
}

/// `sup_u |W_N / (2 (2 pi hbar)^{-d} (hbar/2E)^{1/3}) - Ai(u/E)|`.
pub fn individual_airy_error(cfg: &Oscillator, energy: f64, us: &[f64]) -> anyhow::Result<f64> {
    let n = cfg.level_of(energy)?;
    let scale = airy_individual_scale(cfg, energy);
    Ok(sup(us.iter().map(|&u| {
        let h = Offset { energy, u }.hamiltonian(cfg.hbar());
        (wigner_at_energy(cfg, n, h) / scale - airy_ai(u / energy)).abs()
    })))
}

pub fn individual_airy_rate(energy: f64, dims: &[u32], hbars: [f64; 2]) -> anyhow::Result<Outcome> {
    let us = u_grid(-4.0, 4.0, 161);
    let mut out = Outcome::default();
    for &d in dims {
        let c0 = snapped(energy, hbars[0], d)?;
        let c1 = snapped(energy, hbars[1], d)?;
        let e = [
            individual_airy_error(&c0, energy, &us)?,
            individual_airy_error(&c1, energy, &us)?,
        ];
        let (r, c) = rate_check(
            &format!("d={d}"),
            [c0.hbar(), c1.hbar()],
            e,
            2.0 / 3.0,
            0.25,
        );
        out.push(c);
        out.error(e[1]);
        out.fitted_rate = Some(r);
    }
    Ok(out)
}

/// Interior `|(2 pi hbar)^d S - 1| <= 3 hbar^{1/2}` at `H = E/2`, exterior
/// `|(2 pi hbar)^d S| <= 1e-6` at `H = 1.5 E`, `S` the sharp sum over `[0, E)`.
pub fn bulk_interior_exterior(energy: f64, dims: &[u32], hbars: &[f64]) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    for &d in dims {
        for &hbar in hbars {
            let cfg = oscillator(hbar, d)?;
            let cell = 1.0 / cfg.phase_cell_density();
            let inner = (cell * sum_sharp_bulk_at(&cfg, 0.0, energy, 0.5 * energy)? - 1.0).abs();
            let outer = (cell * sum_sharp_bulk_at(&cfg, 0.0, energy, 1.5 * energy)?).abs();
            out.push(Check::at_most(
                format!("d={d} hbar={hbar} interior H=E/2"),
                inner,
                3.0 * hbar.sqrt(),
            ));
            out.push(Check::at_most(
                format!("d={d} hbar={hbar} exterior H=1.5E"),
                outer,
                1e-6,
            ));
            out.error(inner.max(outer));
        }
    }
    Ok(out)
}

/// Relative error of the level-localized law against the exact smoothed sum
/// with `delta = hbar`.
pub fn localized_error(
    cfg: &Oscillator,
    energy: f64,
    f: &Weight,
    h: f64,
    form: LocalizedForm,
) -> anyhow::Result<f64> {
    let exact = sum_smoothed_at(
        cfg,
        energy,
        ScaleExponent::One,
        f,
        h,
        SmoothedOptions::default(),
    )?
    .value;
    let law = hbar_localized_sum(cfg, energy, f, h, form)?.value;
    Ok((law - exact).abs() / exact.abs())
}

pub fn localized_law(
    energy: f64,
    dims: &[u32],
    hbar: f64,
    form: LocalizedForm,
) -> anyhow::Result<Outcome> {
    let f = Weight::gaussian(1.0)?;
    let hs = [hbar, hbar / 8.0];
    let mut out = Outcome::default();
    for &d in dims {
        let mut e = [0.0; 2];
        for (k, &hb) in hs.iter().enumerate() {
            let cfg = oscillator(hb, d)?;
            e[k] = localized_error(&cfg, energy, &f, 0.5 * energy, form)?;
            let forb = sum_smoothed_at(
                &cfg,
                energy,
                ScaleExponent::One,
                &f,
                1.2 * energy,
                SmoothedOptions::default(),
            )?
            .value
            .abs()
                / cfg.phase_cell_density();
            out.push(Check::at_most(
                format!("d={d} hbar={hb} forbidden side H=1.2E, scaled |sum|"),
                forb,
                hb.powi(3),
            ));
        }
        out.push(Check::at_most(
            format!("d={d} hbar={hbar} relative error at H=E/2"),
            e[0],
            0.05,
        ));
        let (r, c) = rate_check(&format!("d={d}"), hs, e, 0.9, 0.25);
        out.push(c);
        out.error(e[0]);
        out.fitted_rate = Some(r);
    }
    Ok(out)
}

/// `sup_u |(2 pi hbar)^d sum - I_0(u)|` for a weight with compact transform,
/// `delta = hbar^{2/3}`; the exact sum comes from its Fourier representation.
pub fn smoothed_interface_error(
    cfg: &Oscillator,
    energy: f64,
    f: &Weight,
    us: &[f64],
    scale: AiryScale,
) -> anyhow::Result<f64> {
    let cell = 1.0 / cfg.phase_cell_density();
    let errs = us
        .par_iter()
        .map(|&u| -> anyhow::Result<f64> {
            let h = Offset { energy, u }.hamiltonian(cfg.hbar());
            let exact = cell * smoothed_sum_fourier(cfg, energy, ScaleExponent::TwoThirds, f, h)?;
            Ok((exact - smoothed_airy_interface(u, energy, f, scale)?).abs())
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(sup(errs))
}

pub fn smoothed_interface(
    energy: f64,
    dims: &[u32],
    hbars: [f64; 2],
    scale: AiryScale,
) -> anyhow::Result<Outcome> {
    let f = Weight::fejer(1.0)?;
    let us = [-2.0, 0.0, 2.0];
    let mut out = Outcome::default();
    for &d in dims {
        let c0 = snapped(energy, hbars[0], d)?;
        let c1 = snapped(energy, hbars[1], d)?;
        let e = [
            smoothed_interface_error(&c0, energy, &f, &us, scale)?,
            smoothed_interface_error(&c1, energy, &f, &us, scale)?,
        ];
        let (r, c) = rate_check(
            &format!("d={d}"),
            [c0.hbar(), c1.hbar()],
            e,
            2.0 / 3.0,
            0.25,
        );
        out.push(c);
        out.error(e[1]);
        out.fitted_rate = Some(r);
    }
    Ok(out)
}

/// `sup_u |(2 pi hbar)^d S - sharp law|` over the window
/// `0 <= N - N(E) < ceil(hbar^{-1/3})`.
pub fn sharp_interface_error(
    cfg: &Oscillator,
    energy: f64,
    us: &[f64],
    scale: AiryScale,
) -> anyhow::Result<f64> {
    let hbar = cfg.hbar();
    let n_plus = hbar.powf(-1.0 / 3.0).ceil() as i64;
    let l_plus = hbar.cbrt() * n_plus as f64;
    let cell = 1.0 / cfg.phase_cell_density();
    let mut worst = 0.0f64;
    for &u in us {
        let h = Offset { energy, u }.hamiltonian(hbar);
        let exact = cell * sum_sharp_airy_at(cfg, energy, 0, n_plus, h)?;
        let law = sharp_airy_interface(u, energy, 0.0, l_plus, scale)?;
        worst = worst.max((exact - law).abs());
    }
    Ok(worst)
}

pub fn sharp_interface(
    energy: f64,
    dims: &[u32],
    hbars: [f64; 2],
    scale: AiryScale,
) -> anyhow::Result<Outcome> {
    let us = u_grid(-2.0, 2.0, 41);
    let mut out = Outcome::default();
    for &d in dims {
        let c0 = snapped(energy, hbars[0], d)?;
        let c1 = snapped(energy, hbars[1], d)?;
        let e = [
            sharp_interface_error(&c0, energy, &us, scale)?,
            sharp_interface_error(&c1, energy, &us, scale)?,
        ];
        let r = rate_exponent(c0.hbar(), e[0], c1.hbar(), e[1]);
        out.push(Check::at_least(
            format!("d={d} rate exponent ({:.3e} -> {:.3e})", e[0], e[1]),
            r,
            0.2,
        ));
        out.error(e[1]);
        out.fitted_rate = Some(r);
    }
    Ok(out)
}

/// Relative error of `density * f(H)` against `sum_N f(E_N) W_N(H)` for a
/// centred Gaussian `f`.
pub fn smoothed_bulk_error(
    cfg: &Oscillator,
    f: &Weight,
    h: f64,
    density: CellDensity,
) -> anyhow::Result<f64> {
    let opts = SmoothedOptions {
        rel_tol: 1e-15,
        max_terms: 10_000_000,
    };
    let exact = sum_smoothed_at(cfg, 0.0, ScaleExponent::Zero, f, h, opts)?.value;
    let law = density.value(cfg) * f.eval(h);
    Ok((exact - law).abs() / law.abs())
}

// ---------------------------------------------------------------- measure

/// Abel-regularized total mass at `eps`, scaled by `(2 pi hbar)^d` and, when
/// `literal`, also by `hbar^d` alone.
pub fn abel_mass(
    dims: &[u32],
    hbar: f64,
    h: f64,
    eps: f64,
    literal: bool,
) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    for &d in dims {
        let cfg = oscillator(hbar, d)?;
        let total = abel_total(&cfg, h, eps)?.value;
        if literal {
            let v = hbar.powi(d as i32) * total;
            out.push(Check::at_most(
                format!("d={d} |hbar^d sum - 1| without 2 pi"),
                (v - 1.0).abs(),
                1e-3,
            ));
        }
        let v = total / cfg.phase_cell_density();
        out.push(Check::at_most(
            format!("d={d} |(2 pi hbar)^d sum - 1|"),
            (v - 1.0).abs(),
            1e-3,
        ));
        out.error((v - 1.0).abs());
    }
    Ok(out)
}

/// Log-log slope of the local envelope of `|W_N(H)|`.
pub fn envelope_fit(
    cfg: &Oscillator,
    h: f64,
    levels: (u64, u64),
) -> anyhow::Result<(Outcome, Table)> {
    let env = local_envelope(cfg, h, levels.0, levels.1, 30)?;
    let (x, y): (Vec<f64>, Vec<f64>) = env.iter().copied().unzip();
    let slope = wigner_weyl::numerics::fit::log_log_slope(&x, &y)?;
    let target: f64 = envelope_exponent(cfg.dim());
    let mut t = Table::new(&["N", "envelope"]);
    t.meta(
        "quantity",
        "max |W_n(H)| over |n - N| <= clamp(N/10, 5, 50)",
    );
    t.meta("hbar", cfg.hbar());
    t.meta("dim", cfg.dim());
    t.meta("H", h);
    t.rows = env.into_iter().map(|(n, m)| vec![n, m]).collect();
    let mut out = Outcome::default();
    out.push(Check::within(
        format!("d={} envelope exponent (target {target})", cfg.dim()),
        slope,
        target - 0.1,
        target + 0.1,
    ));
    out.fitted_rate = Some(slope);
    Ok((out, t))
}

// ---------------------------------------------------------------- utilities

pub fn special_functions(seed: u64) -> Outcome {
    let mut out = Outcome::default();

    let step = 1e-3;
    let ode = sup((0..=180).map(|k| {
        let z = -9.0 + 0.1 * k as f64;
        let second = (airy_ai(z + step) - 2.0 * airy_ai(z) + airy_ai(z - step)) / (step * step);
        let scale = airy_ai(z).abs().max(airy_ai(z + 0.5).abs()).max(1e-12) * z.abs().max(1.0);
        (second - z * airy_ai(z)).abs() / scale
    }));
    out.push(Check::at_most(
        "Airy equation residual (relative)",
        ode,
        1e-5,
    ));

    let overlap = sup([Z_SWITCH - 0.5, Z_SWITCH, Z_SWITCH + 0.5]
        .iter()
        .flat_map(|&z| [z, -z])
        .map(|z| {
            let a = airy_ai_series(z);
            let b = airy_ai_asymptotic(z);
            (a - b).abs() / a.abs().max(if z < 0.0 { 0.1 } else { 0.0 })
        }));
    out.push(Check::at_most(
        "series/asymptotic branch overlap",
        overlap,
        1e-9,
    ));

    out.push(Check::at_most(
        "|int_0^inf Ai - 1/3|",
        (airy_tail(0.0f64) - 1.0 / 3.0).abs(),
        1e-9,
    ));
    let z = airy_zero_in(-3.0f64, -2.0).unwrap_or(f64::NAN);
    out.push(Check::at_most(
        "|first zero + 2.3381|",
        (z + 2.3381).abs(),
        1e-4,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..400 {
        let n = rng.gen_range(1..3000u64);
        let a = rng.gen_range(0..=4u32);
        let x = rng.gen_range(0.0..1e4);
        let mut it = WeightedLaguerre::new(a, x);
        it.advance_to(n);
        let lm = it.previous();
        let l0 = it.value();
        it.advance();
        let lp = it.value();
        let big = [lm, l0, lp]
            .into_iter()
            .max_by(|p, q| p.cmp_abs(q))
            .expect("three values");
        let s = |v: wigner_weyl::Scaled| DoubleWord::new(v.div(big).to_float());
        let nf = n as f64;
        let c0 = DoubleWord::new(2.0 * nf + a as f64 + 1.0).sub(DoubleWord::new(x));
        let r = s(lp)
            .mul_scalar(nf + 1.0)
            .sub(s(l0).mul(c0))
            .add(s(lm).mul_scalar(nf + a as f64))
            .value();
        worst = worst.max(r.abs());
    }
    out.push(Check::at_most("Laguerre three-term residual", worst, 1e-12));
    out
}

/// Leading stationary-phase term for `S = cos t` with a Gaussian bump at
/// `t = pi`, against adaptive quadrature of the oscillatory integral.
pub fn stationary_phase_model() -> anyhow::Result<Outcome> {
    let a = |t: f64| (-(t - PI).powi(2) / (2.0 * 0.25)).exp();
    let mut errs = Vec::new();
    for &h in &[0.01, 0.001] {
        let lead = stationary_phase_leading(|t: f64| t.cos(), a, PI, h, None)?;
        let opts = AdaptiveOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 200_000,
            initial_panels: (6.0 / h) as usize,
        };
        let re = integrate(|t| (t.cos() / h).cos() * a(t), PI - 3.0, PI + 3.0, opts)?.value;
        let im = integrate(|t| (t.cos() / h).sin() * a(t), PI - 3.0, PI + 3.0, opts)?.value;
        let direct = Complex::new(re, im) / (2.0 * PI * h).sqrt();
        errs.push((direct - lead).norm() / direct.norm());
    }
    let mut out = Outcome::default();
    out.push(Check::at_most("relative error at h=0.01", errs[0], 0.03));
    out.push(Check::at_least(
        "improvement from h=0.01 to h=0.001",
        errs[0] / errs[1],
        5.0,
    ));
    out.fitted_rate = Some(rate_exponent(0.01, errs[0], 0.001, errs[1]));
    out.error(errs[0]);
    Ok(out)
}
