//! Exact Wigner distributions of isotropic harmonic oscillator eigenspace
//! projections, their Weyl sums over spectral windows, the asymptotic laws
//! those sums obey near and away from the energy surface, and independent
//! quadrature oracles for all of it.
//!
//! Everything numerical is generic over [`Scalar`] (`f32`, `f64`); the
//! aliases below fix `f64`.

pub mod error;
pub mod laws;
pub mod numerics;
pub mod oracle;
pub mod oscillator;
pub mod scalar;
pub mod weight;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::{DoubleWord, Scalar};

pub use numerics::{airy_ai, airy_tail, log_binomial, weighted_laguerre, LaguerreParams};
pub use oscillator::{
    eigenspace_dim, energy_level, mehler_kernel, propagator_wigner, snap_hbar, wigner_at_energy,
    wigner_eigenspace, wigner_eigenspace_scaled, EnergyLevel, OscillatorConfig, PhasePoint,
    ScaledOffset, WignerSequence,
};
pub use weight::WeightFunction;

pub type Oscillator = oscillator::OscillatorConfig<f64>;
pub type Point = oscillator::PhasePoint<f64>;
pub type Offset = oscillator::ScaledOffset<f64>;
pub type Scaled = numerics::ScaledReal<f64>;
pub type Weight = weight::WeightFunction<f64>;
pub type Window = weyl::SpectralWindow<f64>;
pub type Contour = oracle::ContourSpec<f64>;
