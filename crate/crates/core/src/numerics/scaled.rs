//! Mantissa/exponent reals that never overflow or underflow at desk scale.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::{lit, DoubleWord, Scalar};

/// A real number stored as `mantissa * 2^exponent` with `|mantissa|` in
/// `[1, 2)`, or the canonical zero `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledReal<T> {
    mantissa: T,
    exponent: i64,
}

/// Multiplies `x` by `2^e` without intermediate overflow when the result is
/// representable.
pub fn ldexp<T: Scalar>(x: T, e: i64) -> T {
    if x == T::zero() || e == 0 {
        return x;
    }
    let two = lit::<T>(2.0);
    // 2^60 is finite in every supported scalar type
    let step: i64 = 60;
    let mut out = x;
    let mut rem = e;
    while rem != 0 {
        let k = rem.clamp(-step, step);
        out = out * two.powi(k as i32);
        rem -= k;
        if out == T::zero() || out.is_infinite() {
            break;
        }
    }
    out
}

/// Splits a finite nonzero `x` into `(m, k)` with `x = m * 2^k`,
/// `|m|` in `[1, 2)`. Exact, including subnormal inputs.
fn frexp<T: Scalar>(x: T) -> (T, i64) {
    let (mant, exp, sign) = x.integer_decode();
    let bits = 64 - mant.leading_zeros() as i64;
    let m = lit::<T>(mant as f64) * lit::<T>(2.0).powi(-(bits as i32 - 1));
    let m = if sign < 0 { -m } else { m };
    (m, exp as i64 + bits - 1)
}

impl<T: Scalar> ScaledReal<T> {
    pub fn zero() -> Self {
        Self {
            mantissa: T::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self {
            mantissa: T::one(),
            exponent: 0,
        }
    }

    /// Builds `m * 2^e` and normalizes.
    pub fn from_parts(m: T, e: i64) -> Self {
        assert!(m.is_finite(), "non-finite mantissa {m:?}");
        if m == T::zero() {
            return Self::zero();
        }
        let (mm, k) = frexp(m);
        let exponent = e.checked_add(k).expect("ScaledReal exponent overflow");
        Self {
            mantissa: mm,
            exponent,
        }
    }

    pub fn from_float(x: T) -> Self {
        Self::from_parts(x, 0)
    }

    pub fn mantissa(&self) -> T {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == T::zero()
    }

    pub fn signum(&self) -> T {
        if self.is_zero() {
            T::zero()
        } else {
            self.mantissa.signum()
        }
    }

    /// Collapses to an ordinary float; underflow gives signed zero and
    /// overflow gives a signed infinity.
    pub fn to_float(&self) -> T {
        ldexp(self.mantissa, self.exponent)
    }

    /// `exp(x)` for arbitrary finite `x`, using an extra-precise reduction
    /// `x = n ln 2 + r`.
    pub fn exp(x: T) -> Self {
        let ln2 =
            DoubleWord::<T>::from_f64_pair(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);
        let n = (x / ln2.hi).round();
        let r = DoubleWord::new(x).sub(ln2.mul_scalar(n)).value();
        let n = n.to_i64().expect("exponent of exp out of i64 range");
        Self::from_parts(r.exp(), n)
    }

    /// Natural log of `|self|`; `-inf` for zero.
    pub fn ln_abs(&self) -> T {
        if self.is_zero() {
            return T::neg_infinity();
        }
        self.mantissa.abs().ln() + lit::<T>(self.exponent as f64) * T::LN_2()
    }

    pub fn abs(self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.mantissa * o.mantissa, self.exponent + o.exponent)
    }

    pub fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "ScaledReal division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.mantissa / o.mantissa, self.exponent - o.exponent)
    }

    pub fn mul_float(self, x: T) -> Self {
        if self.is_zero() || x == T::zero() {
            return Self::zero();
        }
        Self::from_parts(self.mantissa * x, self.exponent)
    }

    pub fn div_float(self, x: T) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.mantissa / x, self.exponent)
    }

    pub fn powi(self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn add(self, o: Self) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= o.exponent {
            (self, o)
        } else {
            (o, self)
        };
        let gap = big.exponent - small.exponent;
        if gap > T::MANTISSA_DIGITS as i64 + 2 {
            return big;
        }
        let s = big.mantissa + ldexp(small.mantissa, -gap);
        Self::from_parts(s, big.exponent)
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    /// Compares magnitudes.
    pub fn cmp_abs(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exponent.cmp(&o.exponent).then_with(|| {
                self.mantissa
                    .abs()
                    .partial_cmp(&o.mantissa.abs())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }
}

impl<T: Scalar> fmt::Display for ScaledReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // decimal exponent from the binary one
        let l10 = crate::scalar::to_f64(self.ln_abs()) / std::f64::consts::LN_10;
        let e10 = l10.floor();
        let m10 = 10f64.powf(l10 - e10) * crate::scalar::to_f64(self.signum());
        write!(f, "{m10:.15}e{e10}")
    }
}
