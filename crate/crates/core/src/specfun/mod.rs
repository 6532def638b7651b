//! Special functions: Γ, both incomplete gammas (any real order for the upper
//! one), the incomplete beta function with arbitrary real second parameter,
//! Gauss ₂F₁ for real arguments below one, and the generalized exponential
//! integral E_p.

mod beta;
mod expint;
mod gamma;
mod hyper;
mod incgamma;

pub use beta::{complete_beta, inc_beta, inc_beta_complement};
pub use expint::{exp_integral_e, exp_integral_e_scaled};
pub use gamma::{gamma, gamma1pm1_over, ln_gamma, pochhammer, reciprocal_gamma, EULER_GAMMA};
pub use hyper::{gauss_2f1, hyp2f1, HypergeometricArgs};
pub use incgamma::{lower_inc_gamma, lower_inc_gamma_over_power, upper_inc_gamma, upper_inc_gamma_scaled};

use thiserror::Error;

use crate::numerics::QuadError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("series did not converge after {terms} terms (partial sum {partial:e})")]
    NonConvergence { terms: usize, partial: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError::Domain(msg.into()))
}

/// True for 0, -1, -2, ...
pub(crate) fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}
