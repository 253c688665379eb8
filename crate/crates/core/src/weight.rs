//! Spectral weights `f` with their Fourier transforms, in the convention
//! `fhat(t) = int f(x) e^{-itx} dx`, `f(x) = (1/2 pi) int fhat(t) e^{itx} dt`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{lit, Scalar};

/// Samples `values[j]` at `start + j*step`, extended by hat functions so the
/// weight is the piecewise-linear interpolant, ramping to zero one step past
/// each end. Its transform is then exact:
/// `fhat(t) = step * sinc^2(t step / 2) * sum_j values[j] e^{-i t x_j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabulatedWeight<T> {
    pub start: T,
    pub step: T,
    pub values: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightFunction<T> {
    /// `f(x) = exp(-x^2 / 2 sigma^2)`.
    Gaussian {
        sigma: T,
    },
    /// `fhat(t) = max(0, 1 - |t|/T)`, `f(x) = (1 - cos Tx) / (pi T x^2)`.
    Fejer {
        t_max: T,
    },
    Tabulated(TabulatedWeight<T>),
}

fn sinc<T: Scalar>(y: T) -> T {
    if y.abs() < lit(1e-4) {
        let y2 = y * y;
        T::one() - y2 / lit(6.0) + y2 * y2 / lit(120.0)
    } else {
        y.sin() / y
    }
}

impl<T: Scalar> WeightFunction<T> {
    pub fn gaussian(sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(invalid("sigma", "must be positive"));
        }
        Ok(Self::Gaussian { sigma })
    }

    pub fn fejer(t_max: T) -> Result<Self> {
        if !(t_max > T::zero()) {
            return Err(invalid("t_max", "must be positive"));
        }
        Ok(Self::Fejer { t_max })
    }

    pub fn tabulated(start: T, step: T, values: Vec<T>) -> Result<Self> {
        if !(step > T::zero()) || values.is_empty() {
            return Err(invalid(
                "tabulated",
                "needs a positive step and at least one sample",
            ));
        }
        Ok(Self::Tabulated(TabulatedWeight {
            start,
            step,
            values,
        }))
    }

    pub fn eval(&self, x: T) -> T {
        match self {
            Self::Gaussian { sigma } => (-(x * x) / (lit::<T>(2.0) * *sigma * *sigma)).exp(),
            Self::Fejer { t_max } => {
                let s = sinc(*t_max * x * lit(0.5));
                *t_max / (lit::<T>(2.0) * T::PI()) * s * s
            }
            Self::Tabulated(tab) => {
                let pos = (x - tab.start) / tab.step;
                let j = pos.floor();
                let frac = pos - j;
                let at = |k: T| -> T {
                    if k < T::zero() {
                        return T::zero();
                    }
                    tab.values
                        .get(k.to_usize().unwrap_or(usize::MAX))
                        .copied()
                        .unwrap_or(T::zero())
                };
                at(j) * (T::one() - frac) + at(j + T::one()) * frac
            }
        }
    }

    pub fn fourier(&self, t: T) -> Complex<T> {
        match self {
            Self::Gaussian { sigma } => {
                let s = *sigma;
                let v = s * (lit::<T>(2.0) * T::PI()).sqrt() * (-(s * s * t * t) * lit(0.5)).exp();
                Complex::new(v, T::zero())
            }
            Self::Fejer { t_max } => {
                Complex::new((T::one() - t.abs() / *t_max).max(T::zero()), T::zero())
            }
            Self::Tabulated(tab) => {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (j, &v) in tab.values.iter().enumerate() {
                    let x = tab.start + tab.step * lit(j as f64);
                    acc = acc + Complex::from_polar(v, -t * x);
                }
                let s = sinc(t * tab.step * lit(0.5));
                acc * (tab.step * s * s)
            }
        }
    }

    /// `sup_{|y| >= |x|} |f(y)|`, an upper envelope used for truncation.
    pub fn tail_bound(&self, x: T) -> T {
        let ax = x.abs();
        match self {
            Self::Gaussian { .. } => self.eval(ax),
            Self::Fejer { t_max } => {
                let peak = *t_max / (lit::<T>(2.0) * T::PI());
                if ax == T::zero() {
                    peak
                } else {
                    peak.min(lit::<T>(2.0) / (T::PI() * *t_max * ax * ax))
                }
            }
            Self::Tabulated(tab) => {
                let mut m = T::zero();
                for (j, &v) in tab.values.iter().enumerate() {
                    let xj = tab.start + tab.step * lit(j as f64);
                    if xj.abs() + tab.step >= ax {
                        m = m.max(v.abs());
                    }
                }
                m
            }
        }
    }

    /// Half-width of the support of `fhat`, or `None` when it is not compact.
    pub fn fourier_support(&self) -> Option<T> {
        match self {
            Self::Fejer { t_max } => Some(*t_max),
            _ => None,
        }
    }

    /// Beyond this `|t|` the transform is below `rel * |fhat|_max` (for
    /// tabulated weights: the sinc^2 envelope bound).
    pub fn fourier_cutoff(&self, rel: T) -> T {
        match self {
            Self::Gaussian { sigma } => (lit::<T>(-2.0) * rel.ln()).sqrt() / *sigma,
            Self::Fejer { t_max } => *t_max,
            Self::Tabulated(tab) => lit::<T>(2.0) / (tab.step * rel.sqrt()),
        }
    }

    /// Whether `f(-x) = f(x)` holds identically.
    pub fn is_even(&self) -> bool {
        match self {
            Self::Gaussian { .. } | Self::Fejer { .. } => true,
            Self::Tabulated(_) => false,
        }
    }

    /// `a f + b g` for two tabulated weights on the same grid.
    pub fn linear_combination(a: T, f: &Self, b: T, g: &Self) -> Result<Self> {
        match (f, g) {
            (Self::Tabulated(p), Self::Tabulated(q))
                if p.start == q.start && p.step == q.step && p.values.len() == q.values.len() =>
            {
                let values = p
                    .values
                    .iter()
                    .zip(&q.values)
                    .map(|(x, y)| a * *x + b * *y)
                    .collect();
                Self::tabulated(p.start, p.step, values)
            }
            _ => Err(invalid(
                "weights",
                "linear combination needs tabulated weights on one grid",
            )),
        }
    }

    /// Samples another weight onto a grid.
    pub fn tabulate(&self, start: T, step: T, count: usize) -> Result<Self> {
        let values = (0..count)
            .map(|j| self.eval(start + step * lit(j as f64)))
            .collect();
        Self::tabulated(start, step, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate, AdaptiveOptions};

    fn numeric_fourier(f: &WeightFunction<f64>, t: f64, half_width: f64) -> f64 {
        let opts = AdaptiveOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 100_000,
            initial_panels: 400,
        };
        integrate(|x| f.eval(x) * (t * x).cos(), -half_width, half_width, opts)
            .unwrap()
            .value
    }

    #[test]
    fn gaussian_pair() {
        let f = WeightFunction::gaussian(0.8).unwrap();
        for t in [0.0, 0.3, 1.1, 2.0, 3.5] {
            let v = numeric_fourier(&f, t, 12.0);
            assert!((v - f.fourier(t).re).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn fejer_pair() {
        // invert the compact transform instead of integrating the slow tail
        let f = WeightFunction::fejer(1.5).unwrap();
        for x in [0.0, 0.4, 1.0, 2.7, 6.0] {
            let q = integrate(
                |t: f64| f.fourier(t).re * (t * x).cos(),
                -1.5,
                1.5,
                AdaptiveOptions::default(),
            )
            .unwrap();
            let v = q.value / (2.0 * std::f64::consts::PI);
            assert!((v - f.eval(x)).abs() < 1e-8, "x={x}");
        }
        assert!(f.tail_bound(3.0) >= f.eval(3.0));
    }

    #[test]
    fn tabulated_pair_is_exact_for_its_interpolant() {
        let g = WeightFunction::gaussian(1.0).unwrap();
        let f = g.tabulate(-4.0, 0.05, 161).unwrap();
        for t in [0.0, 0.5, 1.7, 3.0, 5.0] {
            let num_re = numeric_fourier(&f, t, 4.2);
            let num_im = {
                let opts = AdaptiveOptions {
                    initial_panels: 400,
                    ..AdaptiveOptions::default()
                };
                -integrate(|x| f.eval(x) * (t * x).sin(), -4.2, 4.2, opts)
                    .unwrap()
                    .value
            };
            let ft = f.fourier(t);
            assert!(
                (ft.re - num_re).abs() < 1e-8 && (ft.im - num_im).abs() < 1e-8,
                "t={t}"
            );
            // and close to the continuous Gaussian
            assert!((ft.re - g.fourier(t).re).abs() < 1e-2);
        }
    }
}
