//! Log-gamma and binomial coefficients.

use crate::scalar::{from_u64, lit, Scalar};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    assert!(x > T::zero(), "ln_gamma needs x > 0, got {x:?}");
    if x < lit(0.5) {
        // reflection
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + from_u64(i as u64));
    }
    let t = x + lit(LANCZOS_G + 0.5);
    lit::<T>(0.5) * (T::PI() + T::PI()).ln() + (x + lit(0.5)) * t.ln() - t + acc.ln()
}

/// `ln binom(n, k)`. Panics when `k > n`.
pub fn log_binomial<T: Scalar>(n: u64, k: u64) -> T {
    assert!(k <= n, "log_binomial needs k <= n (n={n}, k={k})");
    let k = k.min(n - k);
    if k <= 64 {
        let mut s = T::zero();
        let base = n - k;
        for i in 1..=k {
            s = s + (from_u64::<T>(base + i) / from_u64::<T>(i)).ln();
        }
        return s;
    }
    let one = T::one();
    ln_gamma(from_u64::<T>(n) + one)
        - ln_gamma(from_u64::<T>(k) + one)
        - ln_gamma(from_u64::<T>(n - k) + one)
}

/// Exact `binom(n, k)` when it fits in `u128`.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n-k+i) / i stays integral at every step
        let num = n as u128 - k as u128 + i;
        let g = gcd(acc, i);
        let (a, d) = (acc / g, i / g);
        acc = a.checked_mul(num / d)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert!((log_binomial::<f64>(4, 1) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial::<f64>(17, 0), 0.0);
        assert_eq!(binomial_exact(12, 2), Some(66));
        assert_eq!(binomial_exact(60, 30), Some(118_264_581_564_861_424));
        assert_eq!(binomial_exact(200, 100), None);
    }

    #[test]
    fn gamma_at_integers() {
        let mut fact = 1f64;
        for n in 1..25u32 {
            fact *= n as f64;
            let lg: f64 = ln_gamma(n as f64 + 1.0);
            assert!((lg - fact.ln()).abs() < 1e-13 * fact.ln().max(1.0), "n={n}");
        }
        let half: f64 = ln_gamma(0.5);
        assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn large_branch_agrees_with_log_sum() {
        for &(n, k) in &[(300u64, 65u64), (1000, 400), (5000, 2500)] {
            let direct: f64 = (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum();
            let lg = log_binomial::<f64>(n, k);
            assert!((lg - direct).abs() < 1e-12 * direct, "({n},{k})");
        }
    }
}
