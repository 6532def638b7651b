use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{semi_infinite_spec, ClassError};
use crate::measures::Decay;
use crate::numerics::{
    alternating_differences, central_derivative, integrate_finite_complex, integrate_semi_infinite, log_space,
    violation_threshold, DifferenceProbe, DifferenceSign, QuadratureSpec,
};

/// Outcome of a sign probe. A pass is evidence only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CmStatus {
    Consistent,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmReport {
    pub status: CmStatus,
    /// Number of (point, order) pairs examined, order 0 included.
    pub checked: usize,
    /// Violating rows sorted by point then order.
    pub violations: Vec<CmRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmRow {
    pub x: f64,
    pub order: usize,
    pub value: f64,
}

impl From<DifferenceSign> for CmRow {
    fn from(d: DifferenceSign) -> Self {
        CmRow { x: d.x, order: d.order, value: d.value }
    }
}

impl CmReport {
    pub fn is_consistent(&self) -> bool {
        self.status == CmStatus::Consistent
    }
}

/// Checks f ≥ 0 and (-1)^n Δ_h^n f ≥ 0 for n ≤ N over the probe grid.
pub fn cm_membership_probe<F: Fn(f64) -> f64>(f: F, probe: &DifferenceProbe) -> CmReport {
    let mut violations = Vec::new();
    let mut checked = 0;
    for &x in &probe.grid {
        let v = f(x);
        checked += 1;
        if !v.is_finite() || v < violation_threshold(v) {
            violations.push(CmRow { x, order: 0, value: v });
        }
    }
    for d in alternating_differences(&f, probe) {
        checked += 1;
        if d.violation {
            violations.push(d.into());
        }
    }
    violations.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.order.cmp(&b.order)));
    let status = if violations.is_empty() { CmStatus::Consistent } else { CmStatus::Violated };
    CmReport { status, checked, violations }
}

/// CM probe on -(log f)', the derivative taken by a five-point stencil with
/// relative step 1e-4. f must be positive wherever it is sampled.
pub fn log_cm_necessary_probe<F: Fn(f64) -> f64>(f: F, probe: &DifferenceProbe) -> Result<CmReport, ClassError> {
    let bad = Cell::new(None);
    let log_f = |y: f64| {
        let v = f(y);
        if !(v > 0.0) && bad.get().is_none() {
            bad.set(Some((y, v)));
        }
        v.ln()
    };
    let psi = |x: f64| -central_derivative(&log_f, x, 1e-4);
    let report = cm_membership_probe(psi, probe);
    match bad.get() {
        Some((y, v)) => Err(ClassError::Domain(format!("log-CM probe needs f > 0, but f({y}) = {v}"))),
        None => Ok(report),
    }
}

/// Log-CM probe on the Laplace transform L(f) of a non-negative function f
/// behaving like t^{origin} at 0. Uses -L'(x)/L(x) = ∫ t e^{-xt} f / ∫ e^{-xt} f.
pub fn infinite_divisibility_probe<F: Fn(f64) -> f64>(
    f: F,
    origin: f64,
    probe: &DifferenceProbe,
) -> Result<CmReport, ClassError> {
    let spec0 = semi_infinite_spec(origin, Decay::Exponential, "Laplace integrand")?.with_rel_tol(1e-14);
    let spec1 = semi_infinite_spec(origin + 1.0, Decay::Exponential, "Laplace integrand")?.with_rel_tol(1e-14);
    let failed = Cell::new(None);
    let psi = |x: f64| {
        let l0 = integrate_semi_infinite(|t| (-x * t).exp() * f(t), 0.0, &spec0);
        let l1 = integrate_semi_infinite(|t| t * (-x * t).exp() * f(t), 0.0, &spec1);
        match (l0, l1) {
            (Ok(a), Ok(b)) if a.value > 0.0 => b.value / a.value,
            (Err(e), _) | (_, Err(e)) => {
                failed.set(Some(ClassError::from(e)));
                f64::NAN
            }
            _ => {
                failed.set(Some(ClassError::Domain(format!("L(f)({x}) is not positive"))));
                f64::NAN
            }
        }
    };
    let report = cm_membership_probe(psi, probe);
    match failed.into_inner() {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PickReport {
    /// max Im g over the points; positive certifies g is not Stieltjes.
    pub max_im: f64,
    pub witness: Complex64,
    pub points: usize,
}

/// Largest imaginary part of g over upper-half-plane points. Points where
/// g is not finite are ignored.
pub fn stieltjes_violation_probe<G: Fn(Complex64) -> Complex64>(g: G, points: &[Complex64]) -> PickReport {
    let mut best = PickReport { max_im: f64::NEG_INFINITY, witness: Complex64::new(f64::NAN, f64::NAN), points: 0 };
    for &z in points {
        let w = g(z);
        if !w.im.is_finite() {
            continue;
        }
        best.points += 1;
        if w.im > best.max_im {
            best.max_im = w.im;
            best.witness = z;
        }
    }
    best
}

/// Points r e^{iθ} with r log-spaced on [r_lo, r_hi] and θ at the midpoints
/// of nθ equal slices of (0, π).
pub fn pick_grid(r_lo: f64, r_hi: f64, n_r: usize, n_theta: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_r * n_theta);
    for r in log_space(r_lo, r_hi, n_r) {
        for j in 0..n_theta {
            let theta = PI * (j as f64 + 0.5) / n_theta as f64;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

fn counterexample_order(n: usize) -> Result<(), ClassError> {
    if (2..=12).contains(&n) {
        Ok(())
    } else {
        Err(ClassError::Invalid(format!("counterexample order must lie in 2..=12, got {n}")))
    }
}

/// ∫_0^1 e^{-zt} (n-1)(1-t)^{n-2} dt by complex quadrature.
pub fn counterexample_transform(n: usize, z: Complex64) -> Result<Complex64, ClassError> {
    counterexample_order(n)?;
    let m = (n - 2) as i32;
    let spec = QuadratureSpec::default().with_rel_tol(1e-13).with_abs_tol(1e-300);
    let v = integrate_finite_complex(|t| (-z * t).exp() * (n - 1) as f64 * (1.0 - t).powi(m), 0.0, 1.0, &spec)?;
    Ok(v)
}

/// The same transform from the antiderivative: (n-1) e^{-z} I_{n-2} with
/// I_m = ∫_0^1 e^{zu} u^m du = e^z/z - (m/z) I_{m-1}.
pub fn counterexample_transform_closed(n: usize, z: Complex64) -> Result<Complex64, ClassError> {
    counterexample_order(n)?;
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ez = z.exp();
    let mut i = (ez - 1.0) / z;
    for m in 1..=(n - 2) {
        i = ez / z - m as f64 / z * i;
    }
    Ok((n - 1) as f64 * (-z).exp() * i)
}
