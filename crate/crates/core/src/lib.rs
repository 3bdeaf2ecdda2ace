//! Link-performance analysis for single optical wireless links under
//! exponentiated-Weibull turbulence, pointing error and Beer–Lambert path loss.
//!
//! * [`special_math`]: Γ, Γ(a, t), ψ, erf, adaptive quadrature, series summation.
//! * [`channels`]: fading densities, distribution functions and samplers.
//! * [`analysis`]: average SNR and ergodic rate by quadrature, series and
//!   closed-form approximations.
//! * [`simulate`]: deterministic parallel Monte Carlo, including the
//!   Gamma-Gamma comparison arm.

pub mod analysis;
pub mod channels;
mod error;
pub mod simulate;
pub mod special_math;

pub use error::{Error, Result};
