//! Spectrum of the isotropic oscillator `(-hbar^2 Laplacian + |x|^2)/2` on
//! `R^d`, and exact phase-space (Wigner) functions built from it.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::numerics::gamma::{binomial_exact, log_binomial};
use crate::numerics::laguerre::WeightedLaguerre;
use crate::numerics::scaled::ScaledReal;
use crate::scalar::{from_u64, lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorConfig<T> {
    hbar: T,
    dim: u32,
}

impl<T: Scalar> OscillatorConfig<T> {
    pub fn new(hbar: T, dim: u32) -> Result<Self> {
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(invalid(
                "hbar",
                format!("must be positive and finite, got {hbar:?}"),
            ));
        }
        if dim == 0 {
            return Err(invalid("dim", "must be at least 1"));
        }
        Ok(Self { hbar, dim })
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn half_dim(&self) -> T {
        lit::<T>(self.dim as f64) * lit(0.5)
    }

    /// `(2 pi hbar)^{-d}`, the semiclassical density of states per unit
    /// phase-space volume.
    pub fn phase_cell_density(&self) -> T {
        (T::PI() * lit(2.0) * self.hbar).powi(-(self.dim as i32))
    }

    /// Real level index `E/hbar - d/2` of an energy.
    pub fn level_index(&self, energy: T) -> T {
        energy / self.hbar - self.half_dim()
    }

    /// Level `N` with `E_N = E` when `E/hbar - d/2` is within `1e-9` of a
    /// nonnegative integer.
    pub fn level_of(&self, energy: T) -> Result<u64> {
        let idx = self.level_index(energy);
        let n = idx.round();
        if (idx - n).abs() > lit(1e-9) || n < T::zero() {
            let nearest = snap_hbar(energy, self.hbar, self.dim)?;
            return Err(Error::NotAnEigenvalue {
                energy: to_f64(energy),
                hbar: to_f64(self.hbar),
                index: to_f64(idx),
                nearest_hbar: to_f64(nearest),
            });
        }
        Ok(n.to_u64().expect("level index fits u64"))
    }
}

/// Nearest `hbar'` to `hbar` for which `energy` is an eigenvalue,
/// i.e. `hbar' = E/(m + d/2)` with `m` a nonnegative integer.
pub fn snap_hbar<T: Scalar>(energy: T, hbar: T, dim: u32) -> Result<T> {
    if !(energy > T::zero()) {
        return Err(invalid("energy", "must be positive"));
    }
    let half = lit::<T>(dim as f64) * lit(0.5);
    let m = (energy / hbar - half).round().max(T::zero());
    Ok(energy / (m + half))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyLevel<T> {
    pub n: u64,
    pub value: T,
}

pub fn energy_level<T: Scalar>(cfg: &OscillatorConfig<T>, n: u64) -> EnergyLevel<T> {
    EnergyLevel {
        n,
        value: cfg.hbar * (from_u64::<T>(n) + cfg.half_dim()),
    }
}

/// Multiplicity `binom(N+d-1, d-1)` of level `N`; exact whenever it fits in
/// `u128`, otherwise from the log-binomial.
pub fn eigenspace_dim<T: Scalar>(dim: u32, n: u64) -> T {
    let top = n + dim as u64 - 1;
    let k = dim as u64 - 1;
    match binomial_exact(top, k) {
        Some(b) => T::from_u128(b).unwrap_or_else(|| log_binomial::<T>(top, k).exp()),
        None => log_binomial::<T>(top, k).exp(),
    }
}

/// A point `(x, xi)` of phase space `T*R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint<T> {
    pub x: Vec<T>,
    pub xi: Vec<T>,
}

impl<T: Scalar> PhasePoint<T> {
    pub fn new(x: Vec<T>, xi: Vec<T>) -> Result<Self> {
        if x.len() != xi.len() || x.is_empty() {
            return Err(invalid(
                "point",
                format!(
                    "x and xi need equal nonzero length, got {} and {}",
                    x.len(),
                    xi.len()
                ),
            ));
        }
        Ok(Self { x, xi })
    }

    /// The point `(sqrt(2H), 0, ..., 0; 0, ..., 0)`.
    pub fn on_axis(dim: u32, energy: T) -> Self {
        let mut x = vec![T::zero(); dim as usize];
        x[0] = (lit::<T>(2.0) * energy.max(T::zero())).sqrt();
        Self {
            x,
            xi: vec![T::zero(); dim as usize],
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Classical energy `(|x|^2 + |xi|^2)/2`.
    pub fn energy(&self) -> T {
        let s: T = self.x.iter().chain(&self.xi).map(|v| *v * *v).sum();
        s * lit(0.5)
    }
}

/// Point near the energy surface in the interface coordinate `u`:
/// `H = E + u (hbar / 2E)^{2/3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledOffset<T> {
    pub energy: T,
    pub u: T,
}

impl<T: Scalar> ScaledOffset<T> {
    pub fn hamiltonian(&self, hbar: T) -> T {
        self.energy + self.u * (hbar / (lit::<T>(2.0) * self.energy)).powf(lit(2.0 / 3.0))
    }

    /// Inverse map from `H` back to `u`.
    pub fn from_hamiltonian(energy: T, h: T, hbar: T) -> Self {
        let scale = (hbar / (lit::<T>(2.0) * energy)).powf(lit(2.0 / 3.0));
        Self {
            energy,
            u: (h - energy) / scale,
        }
    }
}

fn check_point<T: Scalar>(cfg: &OscillatorConfig<T>, p: &PhasePoint<T>) -> Result<()> {
    if p.dim() != cfg.dim as usize {
        return Err(invalid(
            "point",
            format!(
                "dimension {} does not match oscillator dimension {}",
                p.dim(),
                cfg.dim
            ),
        ));
    }
    Ok(())
}

/// Streams the eigenspace Wigner functions `W_0(H), W_1(H), ...` at a fixed
/// classical energy `H`, as scaled reals.
#[derive(Clone, Debug)]
pub struct WignerSequence<T> {
    lag: WeightedLaguerre<T>,
    prefactor: ScaledReal<T>,
}

impl<T: Scalar> WignerSequence<T> {
    pub fn new(cfg: &OscillatorConfig<T>, h: T) -> Self {
        let x = lit::<T>(4.0) * h.max(T::zero()) / cfg.hbar;
        let pref = ScaledReal::from_float(T::PI() * cfg.hbar).powi(cfg.dim);
        Self {
            lag: WeightedLaguerre::new(cfg.dim - 1, x),
            prefactor: ScaledReal::one().div(pref),
        }
    }

    /// Level of the next value yielded.
    pub fn level(&self) -> u64 {
        self.lag.degree()
    }

    pub fn skip_to(&mut self, n: u64) {
        self.lag.advance_to(n);
    }
}

impl<T: Scalar> Iterator for WignerSequence<T> {
    type Item = ScaledReal<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.lag.degree();
        let v = self.lag.next()?.mul(self.prefactor);
        Some(if n % 2 == 1 { v.neg() } else { v })
    }
}

/// `W_N(H) = (-1)^N (pi hbar)^{-d} e^{-2H/hbar} L_N^{(d-1)}(4H/hbar)` in
/// scaled form.
pub fn wigner_eigenspace_scaled<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    n: u64,
    h: T,
) -> ScaledReal<T> {
    let mut seq = WignerSequence::new(cfg, h);
    seq.skip_to(n);
    seq.next().expect("sequence is infinite")
}

/// Wigner function of the projection onto the `N`-th eigenspace, as a
/// function of the classical energy `H`. Underflow collapses to zero.
pub fn wigner_at_energy<T: Scalar>(cfg: &OscillatorConfig<T>, n: u64, h: T) -> T {
    wigner_eigenspace_scaled(cfg, n, h).to_float()
}

pub fn wigner_eigenspace<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    n: u64,
    p: &PhasePoint<T>,
) -> Result<T> {
    check_point(cfg, p)?;
    Ok(wigner_at_energy(cfg, n, p.energy()))
}

/// Guard distance from the real singular times `pi + 2 pi Z`.
const SINGULAR_GUARD: f64 = 1e-9;

/// `ln` of the propagator's Wigner function
/// `(2 pi hbar cos(t/2))^{-d} exp(-2i H tan(t/2) / hbar)`,
/// defined up to multiples of `2 pi i d`, which exponentiate away.
pub fn propagator_wigner_ln<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    t: Complex<T>,
    h: T,
) -> Result<Complex<T>> {
    if t.im > T::zero() {
        return Err(invalid("t", format!("needs Im t <= 0, got {:?}", t.im)));
    }
    let two = lit::<T>(2.0);
    let pi = T::PI();
    if t.im.abs() < lit(SINGULAR_GUARD) {
        let r = ((t.re - pi) / (two * pi)).round();
        if (t.re - pi - r * two * pi).abs() < lit(SINGULAR_GUARD) {
            return Err(Error::Singular(format!(
                "real time {:?} is within {SINGULAR_GUARD:e} of pi mod 2 pi",
                t.re
            )));
        }
    }
    let half = t * lit::<T>(0.5);
    let c = half.cos() * (two * pi * cfg.hbar);
    let d: T = lit(cfg.dim as f64);
    let i = Complex::new(T::zero(), T::one());
    Ok(-(c.ln() * d) - i * half.tan() * (two * h / cfg.hbar))
}

pub fn propagator_wigner<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    t: Complex<T>,
    p: &PhasePoint<T>,
) -> Result<Complex<T>> {
    check_point(cfg, p)?;
    Ok(propagator_wigner_ln(cfg, t, p.energy())?.exp())
}

/// Position-space kernel of `exp(-i t H_hbar / hbar)` (Mehler's formula) for
/// `Im t < 0`.
///
/// The half-integer power uses `(i sin t)^{1/2} = e^{it/2} sqrt((1 - e^{-2it})/2)`
/// with the principal root, which is `sqrt(sinh tau)` at `t = -i tau`.
pub fn mehler_kernel<T: Scalar>(
    cfg: &OscillatorConfig<T>,
    t: Complex<T>,
    x: &[T],
    y: &[T],
) -> Result<Complex<T>> {
    if x.len() != cfg.dim as usize || y.len() != cfg.dim as usize {
        return Err(invalid(
            "x, y",
            "length must equal the oscillator dimension",
        ));
    }
    if !(t.im < T::zero()) {
        return Err(invalid("t", format!("needs Im t < 0, got {:?}", t.im)));
    }
    let s = t.sin();
    if s.norm() < lit(1e-12) {
        return Err(Error::Singular(format!("sin t vanishes at t = {t:?}")));
    }
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let two = lit::<T>(2.0);
    let root = (i * t * lit::<T>(0.5)).exp() * ((one - (-(i * t) * two).exp()) / two).sqrt();
    let d = cfg.dim as i32;
    let amp = root.powi(-d) * (two * T::PI() * cfg.hbar).powf(-lit::<T>(d as f64) * lit(0.5));
    let r2: T = x.iter().chain(y).map(|v| *v * *v).sum();
    let xy: T = x.iter().zip(y).map(|(a, b)| *a * *b).sum();
    let phase = i * (t.cos() * (r2 * lit(0.5)) - xy) / (s * cfg.hbar);
    Ok(amp * phase.exp())
}
