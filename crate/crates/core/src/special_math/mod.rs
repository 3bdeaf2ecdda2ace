//! Special functions, quadrature and series summation shared by the
//! channel models and the analytical expressions.

mod digamma;
mod gamma;
mod incomplete_gamma;
pub mod quadrature;
pub mod series;

pub use digamma::digamma;
pub use gamma::{gamma_fn, gamma_signed, ln_gamma, ln_gamma_signed, GAMMA_MAX_ARG};
pub use incomplete_gamma::{erf, upper_incomplete_gamma};
pub use quadrature::{integrate, Domain, Integral, QuadratureSpec};
pub use series::{sum_series, Continuation, SeriesControl, SeriesSum};
