//! Self-contained special functions and one adaptive semi-infinite
//! quadrature routine. Every other module builds on these.
//!
//! All operations are pure and re-entrant. Domain violations return
//! [`Error`](crate::Error) values naming the offending argument.

mod erf;
mod gamma;
mod quad;

pub use erf::{erf, erfc};
pub use gamma::{digamma, gamma, ln_gamma, upper_incomplete_gamma};
pub use quad::{integrate_semi_infinite, QuadratureResult, DEFAULT_QUAD_TOL};

pub(crate) use erf::erfc_raw;
pub(crate) use gamma::{digamma_raw, ln_gamma_raw, ln_upper_inc_gamma_raw};
pub(crate) use quad::integrate_semi_infinite_rel;

#[cfg(test)]
pub(crate) const PI: f64 = std::f64::consts::PI;
