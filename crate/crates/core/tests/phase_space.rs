use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wigner_weyl::numerics::quadrature::{integrate, AdaptiveOptions};
use wigner_weyl::oracle::radial_phase_space_integral;
use wigner_weyl::{
    eigenspace_dim, mehler_kernel, wigner_at_energy, wigner_eigenspace, Oscillator, Point,
};

/// Normalized Hermite functions `psi_0..psi_{n}` for `-hbar^2/2 d^2 + x^2/2`.
fn hermite_functions(n: usize, hbar: f64, x: f64) -> Vec<f64> {
    let s = x / hbar.sqrt();
    let mut out = Vec::with_capacity(n + 1);
    out.push((PI * hbar).powf(-0.25) * (-s * s / 2.0).exp());
    if n > 0 {
        out.push(2f64.sqrt() * s * out[0]);
    }
    for k in 1..n {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * s * out[k]
            - (k as f64 / (k as f64 + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

#[test]
fn mehler_matches_eigenfunction_expansion() {
    let hbar = 0.7;
    let cfg = Oscillator::new(hbar, 1).unwrap();
    for &t in &[
        Complex::new(0.0, -0.5),
        Complex::new(1.3, -0.4),
        Complex::new(-2.0, -1.0),
    ] {
        for &(x, y) in &[(0.0, 0.0), (0.4, -0.9), (1.5, 1.1)] {
            let px = hermite_functions(120, hbar, x);
            let py = hermite_functions(120, hbar, y);
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..=120 {
                let e = -Complex::new(0.0, 1.0) * t * (k as f64 + 0.5);
                acc += e.exp() * px[k] * py[k];
            }
            let m = mehler_kernel(&cfg, t, &[x], &[y]).unwrap();
            assert!(
                (m - acc).norm() < 1e-10 * acc.norm().max(1e-3),
                "t={t} x={x} y={y}: {m} vs {acc}"
            );
        }
    }
}

#[test]
fn laguerre_form_matches_wigner_transform_of_eigenfunctions() {
    let hbar = 0.5;
    let cfg = Oscillator::new(hbar, 1).unwrap();
    let opts = AdaptiveOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_intervals: 50_000,
        initial_panels: 64,
    };
    for n in 0..=6usize {
        for &(x, xi) in &[(0.0, 0.0), (0.3, 0.5), (-1.0, 0.7), (1.6, -1.2)] {
            let g = |y: f64| {
                let a = hermite_functions(n, hbar, x + y / 2.0)[n];
                let b = hermite_functions(n, hbar, x - y / 2.0)[n];
                a * b * (xi * y / hbar).cos()
            };
            let q = integrate(g, -16.0, 16.0, opts).unwrap().value / (2.0 * PI * hbar);
            let p = Point::new(vec![x], vec![xi]).unwrap();
            let w = wigner_eigenspace(&cfg, n as u64, &p).unwrap();
            assert!((q - w).abs() < 1e-10, "N={n} ({x},{xi}): {q} vs {w}");
        }
    }
}

fn radial(cfg: &Oscillator, n: u64, m: Option<u64>) -> f64 {
    let hbar = cfg.hbar();
    let top = n.max(m.unwrap_or(0));
    let h_max = 2.0 * hbar * (top as f64 + cfg.half_dim()) + 40.0 * hbar;
    let panels = 8 * top as usize + 16;
    match m {
        None => {
            radial_phase_space_integral(|h| wigner_at_energy(cfg, n, h), cfg.dim(), h_max, panels)
        }
        Some(m) => radial_phase_space_integral(
            |h| wigner_at_energy(cfg, n, h) * wigner_at_energy(cfg, m, h),
            cfg.dim(),
            h_max,
            panels,
        ),
    }
    .unwrap()
}

#[test]
fn trace_norm_and_orthogonality() {
    for d in 1..=3u32 {
        for &hbar in &[1.0, 0.1] {
            let cfg = Oscillator::new(hbar, d).unwrap();
            for n in [0u64, 1, 7, 30] {
                let dim_n: f64 = eigenspace_dim(d, n);
                let tr = radial(&cfg, n, None);
                assert!((tr - dim_n).abs() < 1e-8 * dim_n, "trace d={d} N={n}: {tr}");
                let sq = radial(&cfg, n, Some(n));
                let moyal = cfg.phase_cell_density() * dim_n;
                assert!(
                    (sq - moyal).abs() < 1e-8 * moyal,
                    "square d={d} N={n}: {sq}"
                );
                let m = n + 3;
                let dim_m: f64 = eigenspace_dim(d, m);
                let cross = radial(&cfg, n, Some(m));
                assert!(
                    cross.abs() < 1e-8 * cfg.phase_cell_density() * (dim_n * dim_m).sqrt(),
                    "cross d={d}: {cross}"
                );
            }
        }
    }
}

/// Random element of `U(d)` acting on `(x, xi)`: plane rotations mixing
/// `x_j, xi_j`, and simultaneous rotations of `(x_j, x_k)` and `(xi_j, xi_k)`.
fn random_unitary(rng: &mut ChaCha8Rng, x: &mut [f64], xi: &mut [f64]) {
    let d = x.len();
    for _ in 0..6 {
        let j = rng.gen_range(0..d);
        let th: f64 = rng.gen_range(0.0..2.0 * PI);
        let (c, s) = (th.cos(), th.sin());
        let (a, b) = (x[j], xi[j]);
        x[j] = c * a - s * b;
        xi[j] = s * a + c * b;
        if d > 1 {
            let k = (j + 1 + rng.gen_range(0..d - 1)) % d;
            let (a, b) = (x[j], x[k]);
            x[j] = c * a - s * b;
            x[k] = s * a + c * b;
            let (a, b) = (xi[j], xi[k]);
            xi[j] = c * a - s * b;
            xi[k] = s * a + c * b;
        }
    }
}

#[test]
fn radial_under_unitary_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 1..=3u32 {
        let cfg = Oscillator::new(0.05, d).unwrap();
        for _ in 0..20 {
            let mut x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut xi: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = rng.gen_range(0..80);
            let w0 =
                wigner_eigenspace(&cfg, n, &Point::new(x.clone(), xi.clone()).unwrap()).unwrap();
            random_unitary(&mut rng, &mut x, &mut xi);
            let w1 = wigner_eigenspace(&cfg, n, &Point::new(x, xi).unwrap()).unwrap();
            assert!(
                (w0 - w1).abs() <= 1e-9 * w0.abs().max(1e-300),
                "{w0} vs {w1}"
            );
        }
    }
}
