use serde::Serialize;

use super::{class_spec, ClassError};
use crate::measures::{Kernel, Measure};
use crate::numerics::{integrate_finite, maximize_unimodal, ErrorSlot};
use crate::specfun::pochhammer;

/// h_k(s) = (1 + s/k)^{-k} - e^{-s}.
pub fn h_k(k: u32, s: f64) -> f64 {
    let k = f64::from(k);
    (-k * (s / k).ln_1p()).exp() - (-s).exp()
}

/// (argmax, max) of h_k over s ≥ 0.
pub fn sup_h_k_at(k: u32) -> (f64, f64) {
    maximize_unimodal(|s| h_k(k, s), 0.0, 50.0, 1e-12)
}

pub fn sup_h_k(k: u32) -> f64 {
    sup_h_k_at(k).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproximationState {
    pub n: u32,
    /// σ([0, n]).
    pub truncated_mass: f64,
    /// ⌈e n σ([0, n])⌉.
    pub k_n: u32,
    pub lambda: f64,
}

/// The n-th approximant F_n(x) = ∫_0^x t^{λ-1} g_n(t) dt with
/// g_n(x) = ∫_0^n (1 + tx/k_n)^{-k_n} dσ(t).
#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    pub state: ApproximationState,
    pub sigma: Measure,
}

/// None when σ([0, n]) = 0.
pub fn build_approximation(lambda: f64, sigma: &Measure, n: u32) -> Result<Option<Approximation>, ClassError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ClassError::Invalid(format!("λ must be positive, got {lambda}")));
    }
    if n == 0 {
        return Err(ClassError::Invalid("n must be at least 1".into()));
    }
    let mass = sigma.mass_up_to(f64::from(n))?;
    if mass <= 0.0 {
        return Ok(None);
    }
    let k = (std::f64::consts::E * f64::from(n) * mass).ceil();
    if k > f64::from(u32::MAX) {
        return Err(ClassError::Invalid(format!("k_n = {k} is too large")));
    }
    let state = ApproximationState { n, truncated_mass: mass, k_n: k as u32, lambda };
    Ok(Some(Approximation { state, sigma: sigma.clone() }))
}

impl Approximation {
    fn upper(&self) -> f64 {
        f64::from(self.state.n)
    }

    pub fn g_n(&self, x: f64) -> Result<f64, ClassError> {
        let k = f64::from(self.state.k_n);
        let kernel = Kernel::new(|t: f64| (-k * (t * x / k).ln_1p()).exp());
        Ok(self.sigma.integrate_up_to(&kernel, self.upper())?)
    }

    /// f_n(x) = ∫_0^n e^{-tx} dσ(t).
    pub fn f_n(&self, x: f64) -> Result<f64, ClassError> {
        let kernel = Kernel::new(|t: f64| (-t * x).exp());
        Ok(self.sigma.integrate_up_to(&kernel, self.upper())?)
    }

    pub fn big_f(&self, x: f64) -> Result<f64, ClassError> {
        if x == 0.0 {
            return Ok(0.0);
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(ClassError::Domain(format!("F_n needs x > 0, got {x}")));
        }
        let l = self.state.lambda;
        let spec = class_spec().with_left_exponent_opt(Some(l - 1.0));
        let slot = ErrorSlot::<ClassError>::new();
        let r = integrate_finite(|t| t.powf(l - 1.0) * slot.value(self.g_n(t)), 0.0, x, &spec);
        Ok(slot.finish(r)?.value)
    }

    /// max |f_n - g_n| over the grid.
    pub fn uniform_gap(&self, grid: &[f64]) -> Result<f64, ClassError> {
        let mut worst: f64 = 0.0;
        for &x in grid {
            worst = worst.max((self.f_n(x)? - self.g_n(x)?).abs());
        }
        Ok(worst)
    }
}

/// σ_n = s^{n-1} σ + Σ_{k=1}^{n-1} C(n-1, k) (α)_k m_k ∗ (s^{n-1-k} σ), so that
/// (-1)^{n-1} φ^{(n-1)}(t) = t^{-α} L(σ_n)(t) for φ(t) = t^{-α} L(σ)(t).
pub fn build_sigma_n(sigma: &Measure, alpha: f64, n: u32) -> Result<Measure, ClassError> {
    if n == 0 {
        return Err(ClassError::Invalid("n must be at least 1".into()));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(ClassError::Invalid(format!("α must be non-negative, got {alpha}")));
    }
    let top = n - 1;
    let mut out = sigma.weighted_by_power(top)?;
    let mut binom = 1.0;
    for k in 1..=top {
        binom = binom * f64::from(top - k + 1) / f64::from(k);
        let coeff = binom * pochhammer(alpha, k as usize);
        if coeff == 0.0 {
            continue;
        }
        let term = Measure::m_r(f64::from(k))?.convolve(&sigma.weighted_by_power(top - k)?)?;
        out = out.plus(&term.scaled(coeff)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::lower_inc_gamma;

    #[test]
    fn h_k_basics() {
        assert_eq!(h_k(5, 0.0), 0.0);
        for s in [0.1, 1.0, 7.0] {
            assert!((h_k(1, s) - (1.0 / (1.0 + s) - (-s).exp())).abs() < 1e-16);
            assert!(h_k(3, s) >= 0.0);
        }
        // e^s = (1+s)^2 at the maximum of h_1
        let (s1, v1) = sup_h_k_at(1);
        assert!((s1 - 2.512862417252339353965475233218432653833).abs() < 1e-6);
        assert!((v1 - 0.2036321887945368750696464305261116239175).abs() < 1e-14);
        let (s100, v100) = sup_h_k_at(100);
        assert!((s100 - 2.006644547607816580327629360695602062726).abs() < 1e-6);
        assert!((v100 - 0.002697713313357252478523853999662642756282).abs() < 1e-15);
        assert!(v100 <= std::f64::consts::E / 100.0);
    }

    #[test]
    fn approximation_of_point_mass() {
        let sigma = Measure::dirac(1.0).unwrap();
        let ap = build_approximation(2.0, &sigma, 4).unwrap().unwrap();
        assert_eq!(ap.state.k_n, 11);
        let x = 0.7;
        assert!((ap.g_n(x).unwrap() - (1.0 + x / 11.0).powi(-11)).abs() < 1e-15);
        let big = ap.big_f(1.0).unwrap();
        assert!((big - lower_inc_gamma(2.0, 1.0).unwrap()).abs() < 0.05);
        assert!(ap.uniform_gap(&[0.1, 1.0, 10.0]).unwrap() <= 0.25);
        let far = Measure::dirac(3.5).unwrap();
        assert!(build_approximation(2.0, &far, 2).unwrap().is_none());
        assert!(build_approximation(2.0, &far, 4).unwrap().is_some());
    }

    #[test]
    fn sigma_n_small_cases() {
        let sigma = Measure::dirac(1.0).unwrap();
        assert_eq!(build_sigma_n(&sigma, 0.5, 1).unwrap(), sigma);
        let c = 2.0;
        let s2 = build_sigma_n(&Measure::dirac(c).unwrap(), 0.5, 2).unwrap();
        for t in [0.3, 1.0, 4.0] {
            let want = (-c * t).exp() * (c + 0.5 / t);
            let got = s2.laplace_real(t).unwrap();
            assert!((got - want).abs() < 1e-14 * want, "t={t}");
        }
    }
}
