//! Overflow-safe arithmetic and special functions.

pub mod airy;
pub mod fit;
pub mod gamma;
pub mod laguerre;
pub mod quadrature;
pub mod scaled;

pub use airy::{airy_ai, airy_tail};
pub use gamma::{binomial_exact, ln_gamma, log_binomial};
pub use laguerre::{weighted_laguerre, LaguerreParams, WeightedLaguerre};
pub use scaled::ScaledReal;
