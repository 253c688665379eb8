//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All of the core math is written against [`Scalar`], which is implemented
//! for `f32` and `f64`. Tolerances inside the algorithms are expressed in
//! terms of `T::epsilon()`, so `f32` instantiations run the same code at
//! reduced accuracy. The acceptance-level numbers in this crate are stated
//! for `f64`.
//!
//! [`DoubleWord`] is an unevaluated sum `hi + lo` of two scalars and gives
//! roughly twice the working precision for the few places that need it
//! (the Airy Maclaurin series and the oscillatory Airy phase).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type accepted by the numerical core.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Number of binary digits in the significand, including the hidden bit.
    const MANTISSA_DIGITS: u32;
}

impl Scalar for f32 {
    const MANTISSA_DIGITS: u32 = f32::MANTISSA_DIGITS;
}

impl Scalar for f64 {
    const MANTISSA_DIGITS: u32 = f64::MANTISSA_DIGITS;
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts an unsigned integer into `T` (rounded for values beyond the
/// significand width).
#[inline]
pub fn from_u64<T: Scalar>(n: u64) -> T {
    T::from_u64(n).expect("integer representable in scalar type")
}

/// Converts a scalar to `f64`.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("scalar convertible to f64")
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleWord<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn fast_two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<T: Scalar> DoubleWord<T> {
    pub fn new(x: T) -> Self {
        Self {
            hi: x,
            lo: T::zero(),
        }
    }

    /// Builds a double-word constant from an `f64` pair `hi + lo`, rounding
    /// the pair into the precision of `T`.
    pub fn from_f64_pair(hi: f64, lo: f64) -> Self {
        let h: T = lit(hi);
        let rest = (hi - to_f64(h)) + lo;
        let (hi, lo) = fast_two_sum(h, lit(rest));
        Self { hi, lo }
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = fast_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn mul_scalar(self, b: T) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = fast_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div_scalar(self, b: T) -> Self {
        let q = self.hi / b;
        let (p, e) = two_prod(q, b);
        let r = ((self.hi - p) - e + self.lo) / b;
        let (hi, lo) = fast_two_sum(q, r);
        Self { hi, lo }
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_scalar(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_scalar(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = fast_two_sum(q1, q2);
        Self { hi, lo }.add(Self::new(q3))
    }

    /// Square root of a non-negative double-word value (one Newton step on
    /// the working-precision root).
    pub fn sqrt(self) -> Self {
        if self.hi <= T::zero() {
            return Self::new(T::zero());
        }
        let r = self.hi.sqrt();
        let (p, e) = two_prod(r, r);
        let resid = ((self.hi - p) - e + self.lo) / (r + r);
        let (hi, lo) = fast_two_sum(r, resid);
        Self { hi, lo }
    }

    /// Floor of the value, as a double-word integer.
    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            let fl = self.lo.floor();
            let (hi, lo) = fast_two_sum(fh, fl);
            Self { hi, lo }
        } else {
            Self::new(fh)
        }
    }
}

/// 2π as a double-word constant.
#[allow(clippy::approx_constant)]
pub fn two_pi_dw<T: Scalar>() -> DoubleWord<T> {
    DoubleWord::from_f64_pair(6.283_185_307_179_586, 2.449_293_598_294_706_4e-16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_word_recovers_lost_bits() {
        // (1 + 2^-60) - 1 is invisible in f64 but exact in double-word.
        let a = DoubleWord::<f64>::new(1.0).add(DoubleWord::new(2f64.powi(-60)));
        let d = a.sub(DoubleWord::new(1.0));
        assert_eq!(d.value(), 2f64.powi(-60));
    }

    #[test]
    fn double_word_division_and_root() {
        let three = DoubleWord::<f64>::new(3.0);
        let third = DoubleWord::new(1.0).div(three);
        let back = third.mul(three).sub(DoubleWord::new(1.0));
        assert!(back.value().abs() < 1e-30);
        let r = DoubleWord::<f64>::new(2.0).sqrt();
        let sq = r.mul(r).sub(DoubleWord::new(2.0));
        assert!(sq.value().abs() < 1e-30);
    }

    #[test]
    fn two_pi_pair_is_consistent() {
        let tp = two_pi_dw::<f64>();
        assert_eq!(tp.hi, std::f64::consts::TAU);
        assert!(tp.lo.abs() < 1e-15);
        let tp32 = two_pi_dw::<f32>();
        assert!((tp32.hi as f64 + tp32.lo as f64 - std::f64::consts::TAU).abs() < 1e-13);
    }
}
