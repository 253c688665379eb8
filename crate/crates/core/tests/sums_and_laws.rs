use proptest::prelude::*;

use wigner_weyl::laws::{
    bulk_cosine, bulk_leading, exterior_bound, sharp_airy_interface, AiryScale, BulkRegion,
    EXTERIOR_C1,
};
use wigner_weyl::weyl::{
    empirical_partial_at, sum_sharp_airy_at, sum_sharp_bulk_at, sum_smoothed_at, sum_window_at,
    ScaleExponent, SmoothedOptions, SpectralWindow,
};
use wigner_weyl::{snap_hbar, wigner_at_energy, Offset, Oscillator, Weight};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sharp_windows_are_additive(a in 0.0f64..0.4, w1 in 0.01f64..0.4, w2 in 0.01f64..0.4, h in 0.0f64..1.5, d in 1u32..4) {
        let cfg = Oscillator::new(0.02, d).unwrap();
        let (b, c) = (a + w1, a + w1 + w2);
        let left = sum_sharp_bulk_at(&cfg, a, b, h).unwrap();
        let right = sum_sharp_bulk_at(&cfg, b, c, h).unwrap();
        let whole = sum_sharp_bulk_at(&cfg, a, c, h).unwrap();
        let scale = cfg.phase_cell_density() * 1e-12;
        prop_assert!((left + right - whole).abs() <= scale.max(1e-12 * whole.abs()));
    }

    #[test]
    fn smoothed_sums_are_linear_in_the_weight(al in -2.0f64..2.0, be in -2.0f64..2.0, h in 0.1f64..0.9) {
        let cfg = Oscillator::new(0.02, 2).unwrap();
        let f = Weight::gaussian(1.0).unwrap().tabulate(-5.0, 0.1, 101).unwrap();
        let g = Weight::gaussian(0.5).unwrap().tabulate(-5.0, 0.1, 101).unwrap();
        let fg = Weight::linear_combination(al, &f, be, &g).unwrap();
        let s = |w: &Weight| {
            sum_smoothed_at(&cfg, 0.5, ScaleExponent::One, w, h, SmoothedOptions::default()).unwrap().value
        };
        let lhs = s(&fg);
        let rhs = al * s(&f) + be * s(&g);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * cfg.phase_cell_density());
    }
}

#[test]
fn window_dispatch_matches_direct_calls() {
    let hbar = snap_hbar(0.5, 0.02, 1).unwrap();
    let cfg = Oscillator::new(hbar, 1).unwrap();
    let h = 0.47;
    assert_eq!(
        sum_window_at(&cfg, &SpectralWindow::Single(7), h).unwrap(),
        wigner_at_energy(&cfg, 7, h)
    );
    assert_eq!(
        sum_window_at(&cfg, &SpectralWindow::SharpBulk { e1: 0.0, e2: 0.5 }, h).unwrap(),
        sum_sharp_bulk_at(&cfg, 0.0, 0.5, h).unwrap()
    );
    let airy = SpectralWindow::SharpAiry {
        energy: 0.5,
        n_minus: -3,
        n_plus: 4,
    };
    assert_eq!(
        sum_window_at(&cfg, &airy, h).unwrap(),
        sum_sharp_airy_at(&cfg, 0.5, -3, 4, h).unwrap()
    );
}

#[test]
fn empirical_partials_are_sharp_sums() {
    let cfg = Oscillator::new(0.05, 2).unwrap();
    for &h in &[0.1, 0.4, 0.9] {
        // tau strictly between levels, so (-inf, tau] and [0, tau) agree
        let tau = 0.6 + 0.01;
        let slice = empirical_partial_at(&cfg, h, tau).unwrap();
        let sharp = sum_sharp_bulk_at(&cfg, 0.0, tau, h).unwrap();
        assert!((slice.signed_mass - sharp).abs() < 1e-12 * cfg.phase_cell_density());
        assert!(slice.absolute_mass >= slice.signed_mass.abs());
    }
}

#[test]
fn bulk_leading_regions_match_exact_sums() {
    let hbar = snap_hbar(0.5, 0.005, 1).unwrap();
    let cfg = Oscillator::new(hbar, 1).unwrap();
    let inside = bulk_leading(&cfg, 0.0, 0.5, 0.25).unwrap();
    assert_eq!(inside.region, BulkRegion::Inside);
    let exact = sum_sharp_bulk_at(&cfg, 0.0, 0.5, 0.25).unwrap();
    assert!((exact - inside.value).abs() < 3.0 * hbar.sqrt() * cfg.phase_cell_density());
    let above = bulk_leading(&cfg, 0.0, 0.5, 0.75).unwrap();
    assert_eq!(above.region, BulkRegion::Above);
    assert!(
        sum_sharp_bulk_at(&cfg, 0.0, 0.5, 0.75).unwrap().abs() < 1e-6 * cfg.phase_cell_density()
    );
}

#[test]
fn bulk_cosine_error_shrinks_with_hbar() {
    let mut errs = Vec::new();
    for &target in &[1e-2, 1e-3] {
        let hbar = snap_hbar(0.5, target, 1).unwrap();
        let cfg = Oscillator::new(hbar, 1).unwrap();
        let n = cfg.level_of(0.5).unwrap();
        let mut worst = 0.0f64;
        for k in 1..40 {
            let h = 0.5 * k as f64 / 50.0 + 0.05;
            let e = (wigner_at_energy(&cfg, n, h) - bulk_cosine(&cfg, 0.5, h).unwrap()).abs();
            worst = worst.max(e * (2.0 * std::f64::consts::PI * hbar));
        }
        errs.push(worst);
    }
    assert!(errs[1] < errs[0] / 5.0, "{errs:?}");
}

/// `C1 = 1` bounds every single-level value on the validation grid, and
/// `C1 = 0.1` does not.
#[test]
fn exterior_constant_calibration() {
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    for d in 1..=3u32 {
        for &target in &[0.02, 0.01, 0.005] {
            let hbar = snap_hbar(0.5, target, d).unwrap();
            let cfg = Oscillator::new(hbar, d).unwrap();
            let n = cfg.level_of(0.5).unwrap();
            for &r in &[1.05, 1.1, 1.2, 1.5, 2.0, 3.0] {
                let h = 0.5 * r;
                let w = wigner_at_energy(&cfg, n, h).abs();
                if w == 0.0 {
                    continue;
                }
                let b = exterior_bound(&cfg, 0.5, h, 1.0).unwrap();
                min_ratio = min_ratio.min(b * EXTERIOR_C1 / w);
                max_ratio = max_ratio.max(w / (0.1 * b));
            }
        }
    }
    assert!(min_ratio >= 1.0, "C1 = 1 fails: {min_ratio}");
    assert!(max_ratio > 1.0, "C1 = 0.1 already suffices: {max_ratio}");
}

#[test]
fn sharp_airy_window_tracks_its_law() {
    let mut errs = Vec::new();
    for &target in &[1e-2, 1e-3] {
        let hbar = snap_hbar(0.5, target, 1).unwrap();
        let cfg = Oscillator::new(hbar, 1).unwrap();
        let np = hbar.powf(-1.0 / 3.0).ceil() as i64;
        let lp = hbar.cbrt() * np as f64;
        let mut worst = 0.0f64;
        for k in 0..=20 {
            let u = -2.0 + 0.2 * k as f64;
            let h = Offset { energy: 0.5, u }.hamiltonian(hbar);
            let exact = sum_sharp_airy_at(&cfg, 0.5, 0, np, h).unwrap() / cfg.phase_cell_density();
            let law = sharp_airy_interface(u, 0.5, 0.0, lp, AiryScale::FourOverE).unwrap();
            worst = worst.max((exact - law).abs());
        }
        errs.push(worst);
    }
    assert!(errs[1] < errs[0], "{errs:?}");
    assert!(errs[1] < 0.1, "{errs:?}");
}
