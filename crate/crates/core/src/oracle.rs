//! Independent routes to the same quantities: Fourier coefficients of the
//! propagator's Wigner function on a shifted contour, Dirichlet-kernel
//! window sums, radial phase-space integrals and stationary phase.
//!
//! The propagator `U(t) = sum_N W_N e^{-i t E_N / hbar}` is analytic in
//! `Im t < 0`, and `e^{i t E_N/hbar} U(t)` is `2 pi`-periodic there (the sign
//! flips of `cos(t/2)^{-d}` and `e^{itd/2}` cancel). So `W_N` is the mean of
//! that product over any horizontal line `t - i sigma`, and the trapezoid rule
//! on it converges geometrically.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::numerics::gamma::ln_gamma;
use crate::numerics::quadrature::{composite, integrate, AdaptiveOptions};
use crate::numerics::scaled::ScaledReal;
use crate::oscillator::{propagator_wigner_ln, OscillatorConfig};
use crate::scalar::{from_u64, lit, Scalar};
use crate::weight::WeightFunction;
use crate::weyl::{bulk_level_range, CompensatedSum, ScaleExponent};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec<T> {
    /// Shift below the real axis in units of `1/(N + d/2)`, so the
    /// amplification `e^{sigma (N + d/2)}` is `e^{epsilon}`.
    pub epsilon: T,
    /// Trapezoid nodes; `None` picks the smallest power of two at least
    /// `64 (N + d)` and not below 256.
    pub points: Option<usize>,
}

impl<T: Scalar> Default for ContourSpec<T> {
    fn default() -> Self {
        Self {
            epsilon: T::one(),
            points: None,
        }
    }
}

impl<T: Scalar> ContourSpec<T> {
    pub fn new(epsilon: T, points: Option<usize>) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon <= lit(2.0)) {
            return Err(invalid(
                "epsilon",
                format!("must lie in (0, 2], got {epsilon:?}"),
            ));
        }
        if let Some(m) = points {
            if m < 256 || !m.is_power_of_two() {
                return Err(invalid(
                    "points",
                    format!("must be a power of two >= 256, got {m}"),
                ));
            }
        }
        Ok(Self { epsilon, points })
    }

    fn nodes_for(&self, n_top: u64, dim: u32) -> usize {
        self.points.unwrap_or_else(|| {
            ((64 * (n_top + dim as u64)) as usize)
                .next_power_of_two()
                .max(256)
        })
    }
}

/// Contour value `mantissa * e^{ln_scale}` with the imaginary part that the
/// exact answer would not have.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourValue<T> {
    pub mantissa: T,
    pub ln_scale: T,
    pub imag_residue: T,
    pub points: usize,
    pub shift: T,
}

impl<T: Scalar> ContourValue<T> {
    pub fn scaled(&self) -> ScaledReal<T> {
        ScaledReal::from_float(self.mantissa).mul(ScaledReal::exp(self.ln_scale))
    }

    pub fn value(&self) -> T {
        self.scaled().to_float()
    }
}

const MAX_POINTS: usize = 1 << 22;
const AMPLIFICATION_GUARD: f64 = 27.631_021_115_928_547; // ln 1e12

/// Trapezoid mean of `exp(ln_f(t - i sigma))` over `[-pi, pi)`, normalized
/// by the largest real part of `ln_f`. Returns `(mean, ln_scale)`.
fn log_trapezoid<T: Scalar, F>(ln_f: &F, sigma: T, m: usize) -> Result<(Complex<T>, T)>
where
    F: Fn(Complex<T>, T) -> Result<Complex<T>>,
{
    let pi = T::PI();
    let h = (pi + pi) / lit(m as f64);
    let mut logs = Vec::with_capacity(m);
    let mut top = T::neg_infinity();
    for j in 0..m {
        let t = -pi + h * lit(j as f64);
        let l = ln_f(Complex::new(t, -sigma), t)?;
        if l.re > top {
            top = l.re;
        }
        logs.push(l);
    }
    if !top.is_finite() {
        return Ok((Complex::new(T::zero(), T::zero()), T::zero()));
    }
    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    for l in logs {
        let v = Complex::new(l.re - top, l.im).exp();
        re.add(v.re);
        im.add(v.im);
    }
    Ok((
        Complex::new(re.value(), im.value()) / lit::<T>(m as f64),
        top,
    ))
}

/// Evaluates at `m` and `2m` nodes, doubling until the two agree.
fn converged<T: Scalar, F>(ln_f: F, sigma: T, m0: usize) -> Result<ContourValue<T>>
where
    F: Fn(Complex<T>, T) -> Result<Complex<T>>,
{
    let mut m = m0;
    let (mut a, mut sa) = log_trapezoid(&ln_f, sigma, m)?;
    loop {
        let (b, sb) = log_trapezoid(&ln_f, sigma, 2 * m)?;
        // bring a onto b's scale
        let a_on_b = a * (sa - sb).exp();
        let diff = (a_on_b - b).norm();
        // samples are normalized to a largest modulus of one; the floor
        // covers phase rounding in samples near the singular time
        let mag = b.re.abs().max(lit(1e-4));
        if diff <= lit::<T>(1e-10) * mag {
            if b.im.abs() > lit::<T>(1e-9) * mag {
                return Err(Error::NonConvergence(format!(
                    "contour value has imaginary residue {:?} against {:?}",
                    b.im, b.re
                )));
            }
            return Ok(ContourValue {
                mantissa: b.re,
                ln_scale: sb,
                imag_residue: b.im,
                points: 2 * m,
                shift: sigma,
            });
        }
        m *= 2;
        if m > MAX_POINTS {
            return Err(Error::NonConvergence(format!(
                "trapezoid rule still moving by {diff:?} at {m} nodes"
            )));
        }
        a = b;
        sa = sb;
    }
}

/// Shift: `epsilon / (N + d/2)`, pushed down to the saddle
/// `2 acosh sqrt(H/E_N)` when `H > E_N` so the integrand does not cancel.
fn contour_shift<T: Scalar>(cfg: &OscillatorConfig<T>, n: u64, h: T, epsilon: T) -> T {
    let k = from_u64::<T>(n) + cfg.half_dim();
    let mut sigma = epsilon / k;
    let e_n = cfg.hbar() * k;
    if h > e_n {
        sigma = sigma.max(lit::<T>(2.0) * (h / e_n).sqrt().acosh());
    }
    sigma
}

/// `W_N(H)` as the Fourier coefficient
/// `int_{-pi}^{pi} e^{i t E_N / hbar} U(t) dt / 2 pi` on a shifted contour.
pub fn fourier_coefficient_wigner<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    n: u64,
    h: T,
    c: &ContourSpec<T>,
) -> Result<ContourValue<T>> {
    if c.epsilon > lit(AMPLIFICATION_GUARD) {
        return Err(Error::Amplification {
            exponent: crate::scalar::to_f64(c.epsilon),
        });
    }
    let k = from_u64::<T>(n) + cfg.half_dim();
    let sigma = contour_shift(cfg, n, h, c.epsilon);
    let i = Complex::new(T::zero(), T::one());
    let ln_f = |tp: Complex<T>, _t: T| Ok(i * tp * k + propagator_wigner_ln(cfg, tp, h)?);
    converged(ln_f, sigma, c.nodes_for(n, cfg.dim()))
}

/// `sum_{w^j, j < count}` for `|w| <= 1`, as a log, choosing between the
/// closed geometric form and direct summation near `w = 1`.
fn ln_geometric<T: Scalar>(w: Complex<T>, count: u64, t: T) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    if t.abs() < lit(0.1) {
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut p = one;
        for _ in 0..count {
            acc = acc + p;
            p = p * w;
        }
        acc.ln()
    } else {
        let wk = w.powf(lit(count as f64));
        ((one - wk) / (one - w)).ln()
    }
}

/// Optional multiplier `chi(t)` on the integrand. A cutoff is not analytic,
/// so with one the integral is taken on the real axis, and `chi` must vanish
/// near the singular time `t = pi`.
pub type Cutoff<'a, T> = Option<&'a dyn Fn(T) -> T>;

/// Sharp window sum `sum_{E1 <= E_N < E2} W_N(H)` as a single contour
/// integral against the Dirichlet kernel `sum_N e^{i t E_N/hbar}`.
pub fn dirichlet_weyl_oracle<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    e1: T,
    e2: T,
    h: T,
    c: &ContourSpec<T>,
    cutoff: Cutoff<'_, T>,
) -> Result<T> {
    let (n1, n2) = bulk_level_range(cfg, e1, e2)?;
    if n2 <= n1 {
        return Ok(T::zero());
    }
    let count = n2 - n1;
    let top = n2 - 1;
    let k_top = from_u64::<T>(top) + cfg.half_dim();
    let sigma = match cutoff {
        Some(_) => T::zero(),
        None => contour_shift(cfg, top, h, c.epsilon),
    };
    let i = Complex::new(T::zero(), T::one());
    let ln_f = |tp: Complex<T>, t: T| -> Result<Complex<T>> {
        let mut l = Complex::new(T::zero(), T::zero());
        if let Some(chi) = cutoff {
            let v = chi(t);
            if !(v > T::zero()) {
                return Ok(Complex::new(T::neg_infinity(), T::zero()));
            }
            l.re = v.ln();
        }
        // factor out the top term: z^{top} sum_j z^{-j}
        let w = (-(i * tp)).exp();
        Ok(l + i * tp * k_top + propagator_wigner_ln(cfg, tp, h)? + ln_geometric(w, count, t))
    };
    Ok(converged(ln_f, sigma, c.nodes_for(top, cfg.dim()))?.value())
}

/// `int_{T*R^d} g(H(x, xi)) dx dxi = (2 pi)^d / Gamma(d) int_0^{H_max} g(H) H^{d-1} dH`
/// for radial integrands negligible beyond `h_max`.
pub fn radial_phase_space_integral<T: Scalar, G: Fn(T) -> T>(
    g: G,
    dim: u32,
    h_max: T,
    panels: usize,
) -> Result<T> {
    if dim == 0 || !(h_max > T::zero()) {
        return Err(invalid("radial", "needs dim >= 1 and h_max > 0"));
    }
    let d = dim as i32;
    let integrand = |x: T| g(x) * x.powi(d - 1);
    // absolute floor from the L1 norm, so cancelling integrands can stop
    let l1 = composite(
        &mut |x: T| integrand(x).abs(),
        T::zero(),
        h_max,
        4 * panels.max(1),
    );
    let opts = AdaptiveOptions {
        abs_tol: lit::<T>(1e-13) * l1,
        rel_tol: lit(1e-11),
        max_intervals: 400_000,
        initial_panels: panels.max(1),
    };
    let q = integrate(integrand, T::zero(), h_max, opts)?;
    let df: T = lit(d as f64);
    Ok(q.value * (lit::<T>(2.0) * T::PI()).powi(d) / ln_gamma(df).exp())
}

/// Leading stationary-phase term of `(2 pi h)^{-1/2} int e^{i S(t)/h} a(t) dt`
/// at a nondegenerate critical point `t0`:
/// `e^{i S(t0)/h} e^{i pi/4 sgn S''} |S''(t0)|^{-1/2} a(t0)`.
/// `S''` is taken by central differences when not supplied.
pub fn stationary_phase_leading<T: Scalar, S: Fn(T) -> T, A: Fn(T) -> T>(
    s: S,
    a: A,
    t0: T,
    h: T,
    s2: Option<T>,
) -> Result<Complex<T>> {
    if !(h > T::zero()) {
        return Err(invalid("h", "must be positive"));
    }
    let s2 = s2.unwrap_or_else(|| {
        let step = lit::<T>(1e-4) * t0.abs().max(T::one());
        (s(t0 + step) - lit::<T>(2.0) * s(t0) + s(t0 - step)) / (step * step)
    });
    if s2.abs() < lit(1e-6) {
        return Err(Error::Singular(format!("degenerate Hessian S'' = {s2:?}")));
    }
    let phase = s(t0) / h + T::FRAC_PI_4() * s2.signum();
    Ok(Complex::from_polar(a(t0) / s2.abs().sqrt(), phase))
}

/// Exact smoothed sum for a weight with compactly supported transform,
/// `int fhat(t) e^{itE/delta} U(t hbar/delta) dt / 2 pi`, valid while the
/// support stays inside `|t hbar/delta| < pi`.
pub fn smoothed_sum_fourier<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    energy: T,
    gamma: ScaleExponent,
    f: &WeightFunction<T>,
    h: T,
) -> Result<T> {
    let t_max = f
        .fourier_support()
        .ok_or_else(|| invalid("weight", "needs a compactly supported transform"))?;
    if gamma == ScaleExponent::Zero {
        return Err(invalid("gamma", "the Fourier route needs gamma > 0"));
    }
    let hbar = cfg.hbar();
    let delta = hbar.powf(gamma.value());
    let ratio = hbar / delta;
    if !(t_max * ratio < T::PI()) {
        return Err(Error::Singular(format!(
            "support reaches the propagator singularity: {:?} >= pi",
            t_max * ratio
        )));
    }
    let i = Complex::new(T::zero(), T::one());
    let g = |t: T| -> T {
        let tau = Complex::new(t * ratio, T::zero());
        let l = propagator_wigner_ln(cfg, tau, h).expect("support avoids the singularity");
        let v = f.fourier(t) * (i * (t * energy / delta) + l).exp();
        v.re
    };
    let freq = ((energy - h).abs() / delta + energy * ratio + T::one()) * t_max;
    let panels = (freq / T::PI()).to_usize().unwrap_or(1).max(8);
    let opts = AdaptiveOptions {
        abs_tol: T::min_positive_value(),
        rel_tol: lit(1e-12),
        max_intervals: 200_000,
        initial_panels: panels,
    };
    let left = integrate(g, -t_max, T::zero(), opts)?;
    let right = integrate(g, T::zero(), t_max, opts)?;
    Ok((left.value + right.value) / (lit::<T>(2.0) * T::PI()))
}

/// Closed form of the Abel sum `sum_N W_N(H) e^{-eps (N + d/2)} = U(-i eps)`:
/// `(2 pi hbar cosh(eps/2))^{-d} exp(-2 H tanh(eps/2) / hbar)`.
pub fn abel_closed_form<T: Scalar>(cfg: &OscillatorConfig<T>, h: T, eps: T) -> T {
    let half = eps * lit(0.5);
    let hbar = cfg.hbar();
    (lit::<T>(2.0) * T::PI() * hbar * half.cosh()).powi(-(cfg.dim() as i32))
        * (-(lit::<T>(2.0) * h * half.tanh()) / hbar).exp()
}
