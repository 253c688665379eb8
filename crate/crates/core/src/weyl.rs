//! Weyl sums: eigenspace Wigner functions summed over spectral windows.
//!
//! Every sum walks the levels in increasing `N` with Neumaier-compensated
//! accumulation, so results do not depend on evaluation order or threading.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::fit::log_log_slope;
use crate::oscillator::{OscillatorConfig, PhasePoint, WignerSequence};
use crate::scalar::{from_u64, lit, Scalar};
use crate::weight::WeightFunction;

/// Exponent `gamma` in the smoothing width `delta = hbar^gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScaleExponent {
    /// `delta = hbar`: weights resolve individual levels.
    #[serde(rename = "1")]
    One,
    /// `delta = hbar^{2/3}`: the interface scale.
    #[serde(rename = "2/3")]
    TwoThirds,
    /// No rescaling: the weight is evaluated at `E_N` itself.
    #[serde(rename = "0")]
    Zero,
}

impl ScaleExponent {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Self::One => T::one(),
            Self::TwoThirds => lit(2.0 / 3.0),
            Self::Zero => T::zero(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "1" => Some(Self::One),
            "2/3" => Some(Self::TwoThirds),
            "0" => Some(Self::Zero),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralWindow<T> {
    Single(u64),
    /// Levels with `e1 <= E_N < e2`.
    SharpBulk {
        e1: T,
        e2: T,
    },
    /// Levels `N(E) + n_minus ..= N(E) + n_plus - 1`.
    SharpAiry {
        energy: T,
        n_minus: i64,
        n_plus: i64,
    },
    Smoothed {
        energy: T,
        gamma: ScaleExponent,
        weight: WeightFunction<T>,
    },
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// First level index `N` with `E_N >= energy`, treating indices within
/// `1e-9` of an integer as exact.
pub fn first_level_at_or_above<T: Scalar>(cfg: &OscillatorConfig<T>, energy: T) -> u64 {
    let idx = cfg.level_index(energy);
    let r = idx.round();
    let n = if (idx - r).abs() <= lit(1e-9) {
        r
    } else {
        idx.ceil()
    };
    n.max(T::zero()).to_u64().unwrap_or(u64::MAX)
}

/// `sum_{lo <= N < hi} W_N(H)`.
pub fn sum_levels<T: Scalar>(cfg: &OscillatorConfig<T>, h: T, lo: u64, hi: u64) -> T {
    let mut acc = CompensatedSum::new();
    if hi <= lo {
        return T::zero();
    }
    let mut seq = WignerSequence::new(cfg, h);
    seq.skip_to(lo);
    for _ in lo..hi {
        acc.add(seq.next().expect("infinite").to_float());
    }
    acc.value()
}

fn point_energy<T: Scalar>(cfg: &OscillatorConfig<T>, p: &PhasePoint<T>) -> Result<T> {
    if p.dim() != cfg.dim() as usize {
        return Err(invalid("point", "dimension does not match the oscillator"));
    }
    Ok(p.energy())
}

/// Half-open index range of the levels in `[e1, e2)`.
pub fn bulk_level_range<T: Scalar>(cfg: &OscillatorConfig<T>, e1: T, e2: T) -> Result<(u64, u64)> {
    if !(e1 >= T::zero()) || !(e2 > e1) {
        return Err(invalid(
            "window",
            format!("needs 0 <= e1 < e2, got [{e1:?}, {e2:?})"),
        ));
    }
    Ok((
        first_level_at_or_above(cfg, e1),
        first_level_at_or_above(cfg, e2),
    ))
}

/// Sharp bulk sum over `e1 <= E_N < e2` at classical energy `h`.
pub fn sum_sharp_bulk_at<T: Scalar>(cfg: &OscillatorConfig<T>, e1: T, e2: T, h: T) -> Result<T> {
    let (lo, hi) = bulk_level_range(cfg, e1, e2)?;
    Ok(sum_levels(cfg, h, lo, hi))
}

pub fn sum_sharp_bulk<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    e1: T,
    e2: T,
    p: &PhasePoint<T>,
) -> Result<T> {
    sum_sharp_bulk_at(cfg, e1, e2, point_energy(cfg, p)?)
}

/// Sum over the `hbar^{1/3}`-window `N(E) + n_minus <= N < N(E) + n_plus`.
pub fn sum_sharp_airy_at<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    energy: T,
    n_minus: i64,
    n_plus: i64,
    h: T,
) -> Result<T> {
    if n_minus >= n_plus {
        return Err(invalid(
            "n_minus",
            format!("needs n_minus < n_plus, got {n_minus} >= {n_plus}"),
        ));
    }
    let center = cfg.level_of(energy)? as i64;
    let lo = (center + n_minus).max(0) as u64;
    let hi = (center + n_plus).max(0) as u64;
    Ok(sum_levels(cfg, h, lo, hi))
}

pub fn sum_sharp_airy<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    energy: T,
    n_minus: i64,
    n_plus: i64,
    p: &PhasePoint<T>,
) -> Result<T> {
    sum_sharp_airy_at(cfg, energy, n_minus, n_plus, point_energy(cfg, p)?)
}

#[derive(Clone, Copy, Debug)]
pub struct SmoothedOptions<T> {
    /// Stop once the envelope bound on a term falls below `rel_tol` times
    /// the running magnitude.
    pub rel_tol: T,
    pub max_terms: usize,
}

impl<T: Scalar> Default for SmoothedOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-14),
            max_terms: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothedSum<T> {
    pub value: T,
    /// Number of levels summed (`0..terms`).
    pub terms: u64,
}

/// Growth exponent of the term envelope `|W_N| ~ N^p`, `p = (d-1)/2 - 1/4`.
pub fn envelope_exponent<T: Scalar>(dim: u32) -> T {
    lit::<T>((dim as f64 - 1.0) / 2.0 - 0.25)
}

/// `sum_N f(hbar^{-gamma}(E - E_N)) W_N(H)`; for `gamma = 0` the weight is
/// `f(E_N)`.
///
/// Terms grow like `N^p` (see [`envelope_exponent`]), so truncation uses
/// `sup_{|y|>=|arg|}|f(y)| * G(N)` with `G(N) = 2 C N^p` and `C` the largest
/// ratio `|W_n| / n^p` seen so far.
pub fn sum_smoothed_at<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    energy: T,
    gamma: ScaleExponent,
    f: &WeightFunction<T>,
    h: T,
    opts: SmoothedOptions<T>,
) -> Result<SmoothedSum<T>> {
    let hbar = cfg.hbar();
    let delta = hbar.powf(gamma.value());
    let p = envelope_exponent::<T>(cfg.dim());
    let mut seq = WignerSequence::new(cfg, h);
    let mut acc = CompensatedSum::new();
    let mut c_env = T::zero();
    let mut max_term = T::zero();
    let center = if gamma == ScaleExponent::Zero {
        T::zero()
    } else {
        energy
    };
    for n in 0..opts.max_terms as u64 {
        let e_n = hbar * (from_u64::<T>(n) + cfg.half_dim());
        let arg = if gamma == ScaleExponent::Zero {
            e_n
        } else {
            (energy - e_n) / delta
        };
        let w = seq.next().expect("infinite").to_float();
        let nf = from_u64::<T>(n.max(1));
        c_env = c_env.max(w.abs() / nf.powf(p));
        let term = f.eval(arg) * w;
        acc.add(term);
        max_term = max_term.max(term.abs());
        if e_n > center {
            let bound = f.tail_bound(arg) * lit(2.0) * c_env * nf.powf(p);
            let scale = acc.value().abs().max(max_term);
            if bound <= opts.rel_tol * scale || scale == T::zero() && bound == T::zero() {
                return Ok(SmoothedSum {
                    value: acc.value(),
                    terms: n + 1,
                });
            }
        }
    }
    Err(Error::Divergence {
        max_terms: opts.max_terms,
    })
}

pub fn sum_smoothed<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    energy: T,
    gamma: ScaleExponent,
    f: &WeightFunction<T>,
    p: &PhasePoint<T>,
    opts: SmoothedOptions<T>,
) -> Result<SmoothedSum<T>> {
    sum_smoothed_at(cfg, energy, gamma, f, point_energy(cfg, p)?, opts)
}

/// Any window at classical energy `h`.
pub fn sum_window_at<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    window: &SpectralWindow<T>,
    h: T,
) -> Result<T> {
    match window {
        SpectralWindow::Single(n) => Ok(crate::oscillator::wigner_at_energy(cfg, *n, h)),
        SpectralWindow::SharpBulk { e1, e2 } => sum_sharp_bulk_at(cfg, *e1, *e2, h),
        SpectralWindow::SharpAiry {
            energy,
            n_minus,
            n_plus,
        } => sum_sharp_airy_at(cfg, *energy, *n_minus, *n_plus, h),
        SpectralWindow::Smoothed {
            energy,
            gamma,
            weight,
        } => {
            Ok(sum_smoothed_at(cfg, *energy, *gamma, weight, h, SmoothedOptions::default())?.value)
        }
    }
}

/// Partial masses of the signed measure `sum_N W_N(x, xi) delta_{E_N}` on
/// `(-inf, tau]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmpiricalMeasureSlice<T> {
    pub tau: T,
    pub signed_mass: T,
    pub absolute_mass: T,
    pub terms: u64,
}

pub fn empirical_partial_at<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    h: T,
    tau: T,
) -> Result<EmpiricalMeasureSlice<T>> {
    if !(tau >= T::zero()) {
        return Err(invalid("tau", "must be nonnegative"));
    }
    let idx = cfg.level_index(tau);
    let terms = if idx < T::zero() {
        0
    } else {
        (idx + lit(1e-9)).floor().to_u64().unwrap_or(0) + 1
    };
    let mut signed = CompensatedSum::new();
    let mut absolute = CompensatedSum::new();
    let mut seq = WignerSequence::new(cfg, h);
    for _ in 0..terms {
        let w = seq.next().expect("infinite").to_float();
        signed.add(w);
        absolute.add(w.abs());
    }
    Ok(EmpiricalMeasureSlice {
        tau,
        signed_mass: signed.value(),
        absolute_mass: absolute.value(),
        terms,
    })
}

pub fn empirical_partial<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    p: &PhasePoint<T>,
    tau: T,
) -> Result<EmpiricalMeasureSlice<T>> {
    empirical_partial_at(cfg, point_energy(cfg, p)?, tau)
}

/// Abel-regularized total mass `sum_N W_N(H) e^{-eps (N + d/2)}`, summed
/// until the weight drops below `1e-18` of the first.
pub fn abel_total<T: Scalar>(cfg: &OscillatorConfig<T>, h: T, eps: T) -> Result<SmoothedSum<T>> {
    if !(eps > T::zero()) {
        return Err(invalid("eps", "must be positive"));
    }
    let cut = (lit::<T>(18.0) * lit::<T>(10.0).ln() / eps).ceil();
    let terms = cut.to_u64().ok_or_else(|| invalid("eps", "too small"))?;
    let mut seq = WignerSequence::new(cfg, h);
    let mut acc = CompensatedSum::new();
    for n in 0..terms {
        let w = seq.next().expect("infinite").to_float();
        let damp = (-eps * (from_u64::<T>(n) + cfg.half_dim())).exp();
        acc.add(w * damp);
    }
    Ok(SmoothedSum {
        value: acc.value(),
        terms,
    })
}

/// Samples of the local envelope `max_{|n-N| <= w} |W_n(H)|` at `count`
/// log-spaced levels `N` in `[n_min, n_max]`.
pub fn local_envelope<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    h: T,
    n_min: u64,
    n_max: u64,
    count: usize,
) -> Result<Vec<(T, T)>> {
    if n_min < 10 || n_max <= n_min || count < 2 {
        return Err(invalid(
            "levels",
            "needs 10 <= n_min < n_max and count >= 2",
        ));
    }
    let half = |c: u64| (c / 10).clamp(5, 50);
    let top = n_max + half(n_max);
    let mut vals = Vec::with_capacity(top as usize + 1);
    let mut seq = WignerSequence::new(cfg, h);
    for _ in 0..=top {
        vals.push(seq.next().expect("infinite").to_float().abs());
    }
    let (l0, l1) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let c = (l0 + (l1 - l0) * i as f64 / (count - 1) as f64)
            .exp()
            .round() as u64;
        let w = half(c);
        let m = vals[(c - w) as usize..=(c + w) as usize]
            .iter()
            .fold(T::zero(), |a, &b| a.max(b));
        out.push((from_u64::<T>(c), m));
    }
    Ok(out)
}

/// Log-log slope of the local envelope of `|W_N(H)|` over `[n_min, n_max]`.
pub fn envelope_growth_exponent<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    p: &PhasePoint<T>,
    n_min: u64,
    n_max: u64,
) -> Result<T> {
    let env = local_envelope(cfg, point_energy(cfg, p)?, n_min, n_max, 30)?;
    if env.iter().all(|(_, m)| *m == T::zero()) {
        return Err(Error::UndefinedFit(
            "all terms underflow in the window".into(),
        ));
    }
    let (x, y): (Vec<T>, Vec<T>) = env.into_iter().unzip();
    log_log_slope(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::wigner_at_energy;

    fn cfg(h: f64, d: u32) -> OscillatorConfig<f64> {
        OscillatorConfig::new(h, d).unwrap()
    }

    #[test]
    fn empty_and_single_windows() {
        let c = cfg(0.1, 1);
        assert_eq!(sum_sharp_bulk_at(&c, 0.11, 0.14, 0.3).unwrap(), 0.0);
        let single = sum_sharp_bulk_at(&c, 0.15, 0.16, 0.3).unwrap();
        assert_eq!(single, wigner_at_energy(&c, 1, 0.3));
        assert!(sum_sharp_bulk_at(&c, 0.3, 0.2, 0.3).is_err());
    }

    #[test]
    fn half_open_boundaries() {
        let c = cfg(0.5 / 10.5, 1);
        // E = 0.5 is level 10 and is excluded from [0, 0.5)
        assert_eq!(bulk_level_range(&c, 0.0, 0.5).unwrap(), (0, 10));
        assert_eq!(bulk_level_range(&c, 0.5, 0.6).unwrap(), (10, 13));
    }

    #[test]
    fn airy_window_single_term() {
        let c = cfg(0.5 / 40.5, 1);
        let v = sum_sharp_airy_at(&c, 0.5, 0, 1, 0.47).unwrap();
        assert_eq!(v, wigner_at_energy(&c, 40, 0.47));
        assert!(matches!(
            sum_sharp_airy_at(&cfg(0.0123, 1), 0.5, 0, 3, 0.47),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn empirical_slice_counts() {
        let c = cfg(0.1, 2);
        let s = empirical_partial_at(&c, 0.4, 0.05).unwrap();
        assert_eq!((s.terms, s.signed_mass), (0, 0.0));
        let s = empirical_partial_at(&c, 0.4, 1.0).unwrap();
        assert_eq!(s.terms, 10);
        assert!(s.absolute_mass >= s.signed_mass.abs());
    }

    #[test]
    fn smoothed_sum_concentrates_on_one_level() {
        let c = cfg(0.05, 1);
        let e = 0.05 * 7.5;
        let f = WeightFunction::gaussian(0.05).unwrap();
        let s = sum_smoothed_at(
            &c,
            e,
            ScaleExponent::One,
            &f,
            0.3,
            SmoothedOptions::default(),
        )
        .unwrap();
        assert!((s.value - wigner_at_energy(&c, 7, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let c = cfg(0.01, 1);
        let f = WeightFunction::fejer(1.0).unwrap();
        let opts = SmoothedOptions {
            rel_tol: 1e-14,
            max_terms: 2_000,
        };
        let r = sum_smoothed_at(&c, 0.5, ScaleExponent::TwoThirds, &f, 0.5, opts);
        assert!(matches!(r, Err(Error::Divergence { max_terms: 2_000 })));
    }
}
