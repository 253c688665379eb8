use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use wigner_weyl::numerics::airy::{airy_ai_asymptotic, airy_ai_series, airy_zero_in, Z_SWITCH};
use wigner_weyl::numerics::gamma::binomial_exact;
use wigner_weyl::{airy_ai, airy_tail, log_binomial, weighted_laguerre, LaguerreParams};

fn big_binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `L_n^{(a)}(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!` in exact arithmetic.
fn laguerre_exact(n: u64, a: u64, x: u64) -> BigRational {
    let mut acc = BigRational::zero();
    let mut xk_over_fact = BigRational::one();
    for k in 0..=n {
        let c = BigInt::from(big_binomial(n + a, n - k));
        let term = BigRational::from_integer(c) * &xk_over_fact;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        xk_over_fact = xk_over_fact * BigRational::from_integer(BigInt::from(x))
            / BigRational::from_integer(BigInt::from(k + 1));
    }
    acc
}

#[test]
fn laguerre_against_exact_rational_series() {
    for &(n, a, x) in &[
        (200u64, 1u64, 800u64),
        (60, 0, 30),
        (120, 2, 500),
        (200, 1, 1000),
    ] {
        let exact = laguerre_exact(n, a, x);
        let ln_exact = ln_big(exact.numer()) - ln_big(exact.denom()) - x as f64 / 2.0;
        let sign = if exact.is_negative() { -1.0 } else { 1.0 };
        let v = weighted_laguerre(LaguerreParams::new(n, a as u32, x as f64).unwrap());
        assert_eq!(v.signum(), sign, "sign at {:?}", (n, a, x));
        let rel = (v.ln_abs() - ln_exact).abs();
        assert!(rel < 1e-10, "{:?}: ln error {rel:e}", (n, a, x));
    }
}

#[test]
fn binomials_against_big_integers() {
    for &(n, k) in &[(100u64, 50u64), (60, 30), (40, 3), (120, 60)] {
        let b = big_binomial(n, k);
        match binomial_exact(n, k) {
            Some(v) => assert_eq!(BigUint::from(v), b),
            None => assert!(b.bits() > 127),
        }
        let ln_b = ln_big(&BigInt::from(b));
        assert!((log_binomial::<f64>(n, k) - ln_b).abs() < 1e-12 * ln_b.max(1.0));
    }
    let huge = big_binomial(5000, 2500);
    let ln_b = ln_big(&BigInt::from(huge));
    assert!((log_binomial::<f64>(5000, 2500) - ln_b).abs() < 1e-11 * ln_b);
}

#[test]
fn airy_satisfies_its_equation() {
    let h = 1e-3;
    for &z in &[-9.0f64, -6.5, -3.0, -1.0, 0.0, 0.8, 2.5, 6.9, 7.1, 9.0] {
        let second = (airy_ai(z + h) - 2.0 * airy_ai(z) + airy_ai(z - h)) / (h * h);
        let scale = airy_ai(z).abs().max(airy_ai(z + 0.5).abs()).max(1e-12);
        assert!(
            (second - z * airy_ai(z)).abs() < 1e-5 * scale.max(z.abs() * scale),
            "z={z}"
        );
    }
}

#[test]
fn airy_branches_overlap() {
    for &z in &[Z_SWITCH - 0.5, Z_SWITCH, Z_SWITCH + 0.5] {
        for s in [1.0, -1.0] {
            let a = airy_ai_series(s * z);
            let b = airy_ai_asymptotic(s * z);
            assert!(
                (a - b).abs() < 1e-9 * a.abs().max(if s < 0.0 { 0.1 } else { 0.0 }),
                "z={}",
                s * z
            );
        }
    }
}

#[test]
fn airy_integral_and_zero() {
    assert!((airy_tail(0.0f64) - 1.0 / 3.0).abs() < 1e-9);
    assert!(airy_tail(-1e4f64).is_finite());
    let z = airy_zero_in(-3.0f64, -2.0).unwrap();
    assert!((z + 2.338_107_410_459_767).abs() < 1e-12);
    assert!((airy_tail(-40.0f64) - 0.965_302_518_122_412).abs() < 1e-9);
}
