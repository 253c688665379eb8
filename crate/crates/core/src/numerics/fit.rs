//! Log-log fits used to measure convergence rates and growth exponents.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit<T: Scalar>(x: &[T], y: &[T]) -> Result<(T, T)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::UndefinedFit(format!(
            "need at least two paired samples, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n: T = lit(x.len() as f64);
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        sxx = sxx + (a - mx) * (a - mx);
        sxy = sxy + (a - mx) * (b - my);
    }
    if sxx == T::zero() {
        return Err(Error::UndefinedFit("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of `ln y` against `ln x`; every sample must be positive and finite.
pub fn log_log_slope<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.iter()
        .chain(y)
        .any(|v| !(*v > T::zero()) || !v.is_finite())
    {
        return Err(Error::UndefinedFit(
            "log-log fit needs positive finite samples".into(),
        ));
    }
    let lx: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<T> = y.iter().map(|v| v.ln()).collect();
    Ok(linear_fit(&lx, &ly)?.0)
}

/// Observed order `p` from errors `e1` at step `h1` and `e2` at `h2`,
/// assuming `e ~ C h^p`.
pub fn rate_exponent<T: Scalar>(h1: T, e1: T, h2: T, e2: T) -> T {
    (e1 / e2).ln() / (h1 / h2).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x: Vec<f64> = (1..20).map(|i| i as f64 * 3.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v.powf(-0.75)).collect();
        assert!((log_log_slope(&x, &y).unwrap() + 0.75).abs() < 1e-12);
        assert!(
            (rate_exponent(1e-2, 1e-2f64.powf(0.66), 1e-3, 1e-3f64.powf(0.66)) - 0.66).abs()
                < 1e-12
        );
    }

    #[test]
    fn degenerate_inputs() {
        assert!(log_log_slope(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_err());
        assert!(linear_fit::<f64>(&[1.0], &[0.0]).is_err());
    }
}
