//! Exponentially weighted generalized Laguerre functions
//! `l_n(x) = e^{-x/2} L_n^{(a)}(x)` by forward recurrence.

use crate::error::{invalid, Result};
use crate::numerics::scaled::ScaledReal;
use crate::scalar::{from_u64, lit, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaguerreParams<T> {
    pub degree: u64,
    pub alpha: u32,
    pub x: T,
}

impl<T: Scalar> LaguerreParams<T> {
    pub fn new(degree: u64, alpha: u32, x: T) -> Result<Self> {
        if !(x >= T::zero()) || !x.is_finite() {
            return Err(invalid("x", format!("must be finite and >= 0, got {x:?}")));
        }
        Ok(Self { degree, alpha, x })
    }
}

/// Streams `l_0(x), l_1(x), ...` for fixed `alpha` and `x`.
///
/// Each step is `(n+1) l_{n+1} = (2n+a+1-x) l_n - (n+a) l_{n-1}`, with every
/// value held as a [`ScaledReal`].
#[derive(Clone, Debug)]
pub struct WeightedLaguerre<T> {
    alpha: T,
    x: T,
    n: u64,
    prev: ScaledReal<T>,
    cur: ScaledReal<T>,
}

impl<T: Scalar> WeightedLaguerre<T> {
    pub fn new(alpha: u32, x: T) -> Self {
        let damp = ScaledReal::exp(-x * lit(0.5));
        Self {
            alpha: from_u64(alpha as u64),
            x,
            n: 0,
            prev: ScaledReal::zero(),
            cur: damp,
        }
    }

    /// Degree of the value returned by [`Self::value`].
    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> ScaledReal<T> {
        self.cur
    }

    /// Value at `degree - 1` (zero at degree 0).
    pub fn previous(&self) -> ScaledReal<T> {
        self.prev
    }

    pub fn advance(&mut self) {
        let n: T = from_u64(self.n);
        let one = T::one();
        let next = if self.n == 0 {
            self.cur.mul_float(self.alpha + one - self.x)
        } else {
            let a = self.cur.mul_float(n + n + self.alpha + one - self.x);
            let b = self.prev.mul_float(n + self.alpha);
            a.sub(b).div_float(n + one)
        };
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
    }

    pub fn advance_to(&mut self, degree: u64) {
        while self.n < degree {
            self.advance();
        }
    }
}

impl<T: Scalar> Iterator for WeightedLaguerre<T> {
    type Item = ScaledReal<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let v = self.cur;
        self.advance();
        Some(v)
    }
}

/// `e^{-x/2} L_N^{(a)}(x)` as a [`ScaledReal`].
pub fn weighted_laguerre<T: Scalar>(p: LaguerreParams<T>) -> ScaledReal<T> {
    let mut it = WeightedLaguerre::new(p.alpha, p.x);
    it.advance_to(p.degree);
    it.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleWord;
    use proptest::prelude::*;

    fn wl(n: u64, a: u32, x: f64) -> f64 {
        weighted_laguerre(LaguerreParams::new(n, a, x).unwrap()).to_float()
    }

    #[test]
    fn low_degrees() {
        assert_eq!(wl(0, 0, 0.0), 1.0);
        assert!((wl(1, 0, 2.0) + (-1.0f64).exp()).abs() < 1e-16);
        // L_2^(1)(x) = (x^2 - 6x + 6)/2
        let x = 0.7f64;
        let expect = (x * x - 6.0 * x + 6.0) / 2.0 * (-x / 2.0).exp();
        assert!((wl(2, 1, x) - expect).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_argument() {
        assert!(LaguerreParams::new(3, 0, -1.0f64).is_err());
    }

    #[test]
    fn value_at_origin_is_binomial() {
        let mut it = WeightedLaguerre::<f64>::new(2, 0.0);
        for n in 0..=30u64 {
            let b = ((n + 1) * (n + 2) / 2) as f64;
            assert_eq!(it.next().unwrap().to_float(), b);
        }
    }

    #[test]
    fn deep_regime_stays_finite() {
        // e^{-x/2} alone underflows f64 here
        let v = weighted_laguerre(LaguerreParams::new(100, 0, 4000.0f64).unwrap());
        assert!(!v.is_zero());
        assert!(v.to_float() == 0.0);
        assert!(v.ln_abs() < -1500.0);
    }

    proptest! {
        #[test]
        fn recurrence_residual(n in 1u64..3000, a in 0u32..=4, x in 0.0f64..1e4) {
            let mut it = WeightedLaguerre::new(a, x);
            it.advance_to(n);
            let lm = it.previous();
            let l0 = it.value();
            it.advance();
            let lp = it.value();
            let nf = n as f64;
            let af = a as f64;
            // normalize all three by the largest before forming the residual
            let big = [lm, l0, lp].into_iter().max_by(|p, q| p.cmp_abs(q)).unwrap();
            let s = |v: ScaledReal<f64>| DoubleWord::new(v.div(big).to_float());
            let c0 = DoubleWord::new(2.0 * nf + af + 1.0).sub(DoubleWord::new(x));
            let r = s(lp)
                .mul_scalar(nf + 1.0)
                .sub(s(l0).mul(c0))
                .add(s(lm).mul_scalar(nf + af))
                .value();
            prop_assert!(r.abs() <= 1e-12, "residual {r}");
        }
    }
}
