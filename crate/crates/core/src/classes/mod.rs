//! Generalized Bernstein, Stieltjes and Thorin-Bernstein functions built from
//! measures, with alternative evaluation paths, membership probes and the
//! approximation constructions.

mod approximation;
mod bernstein;
mod lomax;
mod probes;
mod thorin;

pub use approximation::{build_approximation, build_sigma_n, h_k, sup_h_k, sup_h_k_at, Approximation, ApproximationState};
pub use bernstein::{GeneralizedBernsteinFn, StieltjesFn};
pub use lomax::{lomax_cdf, lomax_cdf_quadrature};
pub use probes::{
    cm_membership_probe, counterexample_transform, counterexample_transform_closed, infinite_divisibility_probe,
    log_cm_necessary_probe, pick_grid, stieltjes_violation_probe, CmReport, CmStatus, PickReport,
};
pub use thorin::{CharacterizationReport, CharacterizationRow, LaplaceDecomposition, Representation, ThorinBernsteinFn};

use thiserror::Error;

use crate::measures::{Decay, MeasureError};
use crate::numerics::{QuadError, QuadratureSpec};
use crate::specfun::SpecError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Special(#[from] SpecError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Relative tolerance for single quadratures in this module.
pub const CLASS_REL_TOL: f64 = 1e-11;

pub(crate) fn class_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(CLASS_REL_TOL).with_abs_tol(1e-300)
}

/// Quadrature spec for a semi-infinite integrand with the given origin
/// exponent and decay; errors when the integral diverges.
pub(crate) fn semi_infinite_spec(origin: f64, decay: Decay, what: &str) -> Result<QuadratureSpec, ClassError> {
    if origin <= -1.0 {
        return Err(ClassError::Invalid(format!("{what} behaves like t^{origin} at 0 and diverges")));
    }
    let mut spec = class_spec().with_left_exponent_opt(Some(origin));
    match decay {
        Decay::Power(q) if q <= 1.0 => {
            return Err(ClassError::Invalid(format!("{what} decays like t^-{q} and diverges")));
        }
        Decay::Power(q) => spec = spec.with_right_exponent(q),
        _ => {}
    }
    Ok(spec)
}

pub(crate) fn check_x(x: f64) -> Result<(), ClassError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ClassError::Domain(format!("evaluation point must be positive and finite, got {x}")))
    }
}
