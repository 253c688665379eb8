//! Gauss-Kronrod quadrature: a single 7/15 rule, fixed composite panels,
//! and a globally adaptive driver.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod estimate on `[a, b]` and its difference from the
/// embedded 7-point Gauss estimate.
pub fn gk15<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = lit::<T>(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut k = fc * lit(WGK[7]);
    let mut g = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = h * lit(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        k = k + s * lit(WGK[j]);
        if j % 2 == 1 {
            g = g + s * lit(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Sum of 15-point Kronrod panels on `[a, b]` split uniformly into `panels`.
pub fn composite<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T, panels: usize) -> T {
    let n = panels.max(1);
    let w = (b - a) / lit(n as f64);
    let mut acc = T::zero();
    for i in 0..n {
        let lo = a + w * lit(i as f64);
        let hi = if i + 1 == n { b } else { lo + w };
        acc = acc + gk15(f, lo, hi).0;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
    /// Uniform panels to start from (helps oscillatory integrands).
    pub initial_panels: usize,
}

impl<T: Scalar> Default for AdaptiveOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit(1e-13),
            rel_tol: lit(1e-11),
            max_intervals: 20_000,
            initial_panels: 1,
        }
    }
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Piece<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: Scalar> Eq for Piece<T> {}
impl<T: Scalar> PartialOrd for Piece<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Scalar> Ord for Piece<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .partial_cmp(&o.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| o.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

/// Globally adaptive Gauss-Kronrod integration; bisects the interval with
/// the largest error estimate until the total estimate meets the tolerance.
pub fn integrate<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    opts: AdaptiveOptions<T>,
) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    let n0 = opts.initial_panels.max(1);
    let w = (b - a) / lit(n0 as f64);
    let mut heap = BinaryHeap::with_capacity(n0 * 2);
    let mut evaluations = 0;
    for i in 0..n0 {
        let lo = a + w * lit(i as f64);
        let hi = if i + 1 == n0 { b } else { lo + w };
        let (value, error) = gk15(&mut f, lo, hi);
        evaluations += 15;
        heap.push(Piece {
            a: lo,
            b: hi,
            value,
            error,
        });
    }
    loop {
        let total: T = heap.iter().map(|p| p.value).sum();
        let err: T = heap.iter().map(|p| p.error).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= tol {
            return Ok(Quadrature {
                value: total,
                error: err,
                evaluations,
            });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature on [{a:?}, {b:?}] stopped at {} intervals with error {err:e}",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.a + worst.b) * lit(0.5);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&mut f, lo, hi);
            evaluations += 15;
            heap.push(Piece {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
    }
}

/// Mean of `f` over `m` equispaced nodes `a + (b-a) j/m`; the trapezoid
/// rule for a periodic integrand.
pub fn periodic_trapezoid<T: Scalar, F: FnMut(T) -> T>(mut f: F, a: T, b: T, m: usize) -> T {
    let h = (b - a) / lit(m as f64);
    let mut acc = T::zero();
    for j in 0..m {
        acc = acc + f(a + h * lit(j as f64));
    }
    acc / lit(m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // GK15 integrates degree 22 exactly
        let (v, _) = gk15(&mut |x: f64| x.powi(22), -1.0, 1.0);
        assert!((v - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_peaked_integrand() {
        let q = integrate(
            |x: f64| 1.0 / (1e-4 + x * x),
            -1.0,
            1.0,
            AdaptiveOptions::default(),
        )
        .unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((q.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = AdaptiveOptions {
            max_intervals: 4,
            ..AdaptiveOptions::default()
        };
        let r = integrate(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, opts);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        // mean of e^{cos t} over a period is I_0(1)
        let i0 = 1.266_065_877_752_008_4;
        let v = periodic_trapezoid(|t: f64| t.cos().exp(), 0.0, std::f64::consts::TAU, 32);
        assert!((v - i0).abs() < 1e-15);
    }

    #[test]
    fn f32_instantiation() {
        let q = integrate(
            |x: f32| x.sin(),
            0.0,
            std::f32::consts::PI,
            AdaptiveOptions {
                abs_tol: 1e-5,
                rel_tol: 1e-5,
                ..AdaptiveOptions::default()
            },
        )
        .unwrap();
        assert!((q.value - 2.0).abs() < 1e-5);
    }
}
