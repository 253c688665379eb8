//! The Airy function Ai on the real line and its tail integral.
//!
//! `|z| <= Z_SWITCH`: Maclaurin series summed in double-word arithmetic,
//! which absorbs the cancellation between the two power series (about
//! `e^{2 zeta}` at the switch point). Beyond the switch: the standard
//! exponential and oscillatory asymptotic expansions, truncated at their
//! smallest term. The leading coefficient is `1/(2 sqrt(pi))`, fixed by the
//! overlap test against the series.

use crate::numerics::quadrature::gk15;
use crate::scalar::{from_u64, lit, two_pi_dw, DoubleWord, Scalar};

pub const Z_SWITCH: f64 = 7.0;

/// Ai(0) and -Ai'(0) as double-word pairs.
const AI0: (f64, f64) = (0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const AIP0: (f64, f64) = (0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);
const FRAC_1_SQRT_PI: (f64, f64) = (0.564_189_583_547_756_3, 7.667_729_806_582_94e-18);
const TWO_THIRDS: (f64, f64) = (0.666_666_666_666_666_6, 3.700_743_415_417_188e-17);
#[allow(clippy::approx_constant)]
const FRAC_PI_4: (f64, f64) = (0.785_398_163_397_448_3, 3.061_616_997_868_383e-17);

/// Upper cut for [`airy_tail`]; the remainder past it is below 1e-20.
pub const TAIL_CUT: f64 = 16.0;

fn dw<T: Scalar>(p: (f64, f64)) -> DoubleWord<T> {
    DoubleWord::from_f64_pair(p.0, p.1)
}

/// Maclaurin series `Ai(z) = Ai(0) f(z) + Ai'(0) g(z)`.
pub fn airy_ai_series<T: Scalar>(z: T) -> T {
    let zd = DoubleWord::new(z);
    let z3 = zd.mul(zd).mul(zd);
    let tiny = T::epsilon() * T::epsilon() * lit(1e-3);
    let mut fa = DoubleWord::new(T::one());
    let mut ga = zd;
    let mut fs = fa;
    let mut gs = ga;
    let mut k: u64 = 0;
    loop {
        let k3 = 3 * k;
        fa = z3.mul(fa).div_scalar(from_u64::<T>((k3 + 2) * (k3 + 3)));
        ga = z3.mul(ga).div_scalar(from_u64::<T>((k3 + 3) * (k3 + 4)));
        fs = fs.add(fa);
        gs = gs.add(ga);
        k += 1;
        let scale = fs.hi.abs().max(gs.hi.abs()).max(T::one());
        if (fa.hi.abs() + ga.hi.abs()) <= tiny * scale || k > 200 {
            break;
        }
    }
    dw::<T>(AI0).mul(fs).sub(dw::<T>(AIP0).mul(gs)).value()
}

/// Coefficients `u_k` of the large-argument expansions.
fn u_coeffs<T: Scalar>(n: usize) -> Vec<T> {
    let mut u = Vec::with_capacity(n);
    u.push(T::one());
    for k in 1..n as u64 {
        let num = ((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) as f64;
        let den = (216 * k * (2 * k - 1)) as f64;
        let prev = u[u.len() - 1];
        u.push(prev * lit(num / den));
    }
    u
}

const N_COEFF: usize = 60;

/// Large-`|z|` expansions; `z > 0` exponential, `z < 0` oscillatory.
pub fn airy_ai_asymptotic<T: Scalar>(z: T) -> T {
    let u = u_coeffs::<T>(N_COEFF);
    let x = z.abs();
    let xd = DoubleWord::new(x);
    let zeta_dw = dw::<T>(TWO_THIRDS).mul(xd.mul(xd.sqrt()));
    let zeta = zeta_dw.value();
    let inv_sqrt_pi = dw::<T>(FRAC_1_SQRT_PI).value();
    if z > T::zero() {
        // alternating series, stop at the smallest term
        let mut sum = T::one();
        let mut last = T::infinity();
        for (k, &uk) in u.iter().enumerate().skip(1) {
            let t = uk / zeta.powi(k as i32);
            if t >= last {
                break;
            }
            last = t;
            sum = if k % 2 == 1 { sum - t } else { sum + t };
            if t <= T::epsilon() * lit(0.1) {
                break;
            }
        }
        return (-zeta).exp() * inv_sqrt_pi * lit(0.5) / x.powf(lit(0.25)) * sum;
    }
    let mut p = T::zero();
    let mut q = T::zero();
    let mut last = T::infinity();
    for (k, &uk) in u.iter().enumerate() {
        let t = uk / zeta.powi(k as i32);
        if t >= last {
            break;
        }
        last = t;
        // (-1)^{floor(k/2)} signs: P takes even k, Q odd k
        let s = if (k / 2) % 2 == 0 { t } else { -t };
        if k % 2 == 0 {
            p = p + s;
        } else {
            q = q + s;
        }
        if t <= T::epsilon() * lit(0.1) {
            break;
        }
    }
    let tp = two_pi_dw::<T>();
    let n = (zeta / tp.hi).floor();
    let theta = zeta_dw
        .sub(tp.mul_scalar(n))
        .add(dw::<T>(FRAC_PI_4))
        .value();
    inv_sqrt_pi / x.powf(lit(0.25)) * (theta.sin() * p - theta.cos() * q)
}

/// Ai(z) for real `z`.
pub fn airy_ai<T: Scalar>(z: T) -> T {
    if z.abs() <= lit(Z_SWITCH) {
        airy_ai_series(z)
    } else {
        airy_ai_asymptotic(z)
    }
}

/// `int_x^inf Ai(t) dt`.
///
/// Gauss-Kronrod panels on `[x, TAIL_CUT]`, narrowed on the negative axis to
/// a fraction of the local wavelength `2 pi / sqrt|t|`, plus the leading
/// asymptotic term for the remainder.
pub fn airy_tail<T: Scalar>(x: T) -> T {
    let cut = lit::<T>(TAIL_CUT);
    if x >= cut {
        return tail_beyond(x);
    }
    let mut f = |t: T| airy_ai(t);
    let mut acc = T::zero();
    // positive part [max(x,0), cut] in unit panels
    let start = x.max(T::zero());
    let panels = ((cut - start).ceil().to_usize().unwrap_or(1)).max(1);
    let w = (cut - start) / lit(panels as f64);
    for i in 0..panels {
        let lo = start + w * lit(i as f64);
        acc = acc + gk15(&mut f, lo, lo + w).0;
    }
    // negative part, walking down from 0
    if x < T::zero() {
        let mut hi = T::zero();
        let mut neg = T::zero();
        while hi > x {
            let width = lit::<T>(0.5).min(lit::<T>(1.5) / hi.abs().sqrt().max(T::one()));
            let lo = (hi - width).max(x);
            neg = neg + gk15(&mut f, lo, hi).0;
            hi = lo;
        }
        acc = acc + neg;
    }
    acc + tail_beyond(cut)
}

fn tail_beyond<T: Scalar>(x: T) -> T {
    let zeta = lit::<T>(2.0 / 3.0) * x * x.sqrt();
    (-zeta).exp() * dw::<T>(FRAC_1_SQRT_PI).value() * lit(0.5) / x.powf(lit(0.75))
}

/// Bisection for a sign change of Ai on `[a, b]`.
pub fn airy_zero_in<T: Scalar>(mut a: T, mut b: T) -> Option<T> {
    let mut fa = airy_ai(a);
    let fb = airy_ai(b);
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = (a + b) * lit(0.5);
        if m <= a || m >= b {
            break;
        }
        let fm = airy_ai(m);
        if fm == T::zero() {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some((a + b) * lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        assert_eq!(airy_ai(0.0f64), 0.355_028_053_887_817_2);
    }

    #[test]
    fn reference_values() {
        // 50-digit reference values
        let cases = [
            (7.0, 7.492_128_863_997_167e-7),
            (-7.0, 0.184_280_835_250_505_64),
            (10.0, 1.104_753_255_289_868_6e-10),
            (-40.0, -0.045_933_923_437_957_25),
        ];
        for (z, v) in cases {
            let a: f64 = airy_ai(z);
            assert!((a - v).abs() <= 1e-12 * v.abs(), "z={z}: {a} vs {v}");
        }
    }

    #[test]
    fn first_zero() {
        let z = airy_zero_in(-2.5f64, -2.0).unwrap();
        assert!((z + 2.338_107_410_459_767).abs() < 1e-13);
    }

    #[test]
    fn tail_values() {
        assert!((airy_tail(0.0f64) - 1.0 / 3.0).abs() < 1e-13);
        assert!(airy_tail(20.0f64) <= 1e-12);
        assert!((airy_tail(-40.0f64) - 0.965_302_518_122_412_1).abs() < 1e-12);
    }

    #[test]
    fn f32_instantiation() {
        let a = airy_ai(1.5f32);
        assert!((a - 0.071_749_497_008_105_6).abs() < 1e-6);
        let t = airy_tail(0.0f32);
        assert!((t - 1.0 / 3.0).abs() < 1e-6);
    }
}
