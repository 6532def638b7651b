use num_complex::Complex64;

use super::{check_x, semi_infinite_spec, ClassError};
use crate::measures::{integrate_piece, Decay, Family, Kernel, Measure};
use crate::numerics::{integrate_semi_infinite, ErrorSlot};
use crate::specfun::{gamma, inc_beta, lower_inc_gamma_over_power};

/// f(x) = a x^λ + b + ∫ γ(λ, xt) dμ(t)/t^λ.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedBernsteinFn {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub mu: Measure,
}

impl GeneralizedBernsteinFn {
    pub fn new(lambda: f64, a: f64, b: f64, mu: Measure) -> Result<Self, ClassError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ClassError::Invalid(format!("λ must be positive, got {lambda}")));
        }
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(ClassError::Invalid(format!("a, b must be non-negative (got {a}, {b})")));
        }
        mu.bernstein_condition(lambda)?;
        Ok(GeneralizedBernsteinFn { lambda, a, b, mu })
    }

    pub fn eval(&self, x: f64) -> Result<f64, ClassError> {
        self.eval_with(x, false)
    }

    /// Same value with every density piece integrated numerically.
    pub fn eval_quadrature(&self, x: f64) -> Result<f64, ClassError> {
        self.eval_with(x, true)
    }

    fn eval_with(&self, x: f64, force_quadrature: bool) -> Result<f64, ClassError> {
        if x == 0.0 {
            return Ok(self.b);
        }
        check_x(x)?;
        let l = self.lambda;
        let mut total = self.a * x.powf(l) + self.b;
        let xl = x.powf(l);
        for atom in self.mu.atoms() {
            // γ(λ, xt)/t^λ = x^λ γ*(λ, xt), which tends to x^λ/λ at t = 0
            total += atom.mass * xl * lower_inc_gamma_over_power(l, x * atom.loc)?;
        }
        for p in self.mu.pieces() {
            let closed = match p.family {
                Family::PowerExp { r, c } if p.shift == 0.0 && !force_quadrature => {
                    if c > 0.0 {
                        Some(c.powf(l - r) * inc_beta(l, r - l, x / (x + c))?)
                    } else if r < l {
                        Some(x.powf(l - r) / (l - r))
                    } else {
                        None
                    }
                }
                _ => None,
            };
            total += match closed {
                Some(v) => p.weight * v,
                None => {
                    let slot = ErrorSlot::<ClassError>::new();
                    let kernel = Kernel::new(|t: f64| xl * slot.value(lower_inc_gamma_over_power(l, x * t).map_err(ClassError::from)))
                        .decay(Decay::Power(l));
                    let r = integrate_piece(p, &kernel, f64::INFINITY);
                    drop(kernel);
                    slot.finish(r)?
                }
            };
        }
        Ok(total)
    }

    /// Φ(f)(x) = x L(f)(x), by quadrature of the Laplace integral.
    pub fn phi_map(&self, x: f64) -> Result<f64, ClassError> {
        check_x(x)?;
        let slot = ErrorSlot::new();
        let spec = semi_infinite_spec(0.0, Decay::Exponential, "Laplace integrand")?;
        let r = integrate_semi_infinite(|t| (-x * t).exp() * slot.value(self.eval(t)), 0.0, &spec);
        Ok(x * slot.finish(r)?.value)
    }

    /// The Stieltjes function Φ(f): ν = Γ(λ)μ + aΓ(λ+1)ε_0, c = b.
    pub fn phi_image(&self) -> Result<StieltjesFn, ClassError> {
        let l = self.lambda;
        let mut nu = self.mu.scaled(gamma(l))?;
        if self.a > 0.0 {
            nu = nu.plus(&Measure::atom(0.0, self.a * gamma(l + 1.0))?);
        }
        StieltjesFn::new(l, nu, self.b)
    }
}

/// g(x) = ∫ dν(t)/(x+t)^λ + c.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesFn {
    pub lambda: f64,
    pub nu: Measure,
    pub c: f64,
}

impl StieltjesFn {
    pub fn new(lambda: f64, nu: Measure, c: f64) -> Result<Self, ClassError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ClassError::Invalid(format!("λ must be positive, got {lambda}")));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(ClassError::Invalid(format!("c must be non-negative, got {c}")));
        }
        nu.stieltjes_real(lambda, 1.0)?;
        Ok(StieltjesFn { lambda, nu, c })
    }

    pub fn eval(&self, x: f64) -> Result<f64, ClassError> {
        check_x(x)?;
        Ok(self.nu.stieltjes_real(self.lambda, x)? + self.c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64, ClassError> {
        Ok(self.nu.stieltjes_transform(self.lambda, z)? + self.c)
    }

    /// (1/Γ(λ)) ∫ e^{-xt} t^{λ-1} L(ν)(t) dt + c.
    pub fn eval_laplace_form(&self, x: f64) -> Result<f64, ClassError> {
        check_x(x)?;
        let l = self.lambda;
        let profile = self.nu.laplace_profile();
        let spec = semi_infinite_spec(l - 1.0 - profile.origin_order, Decay::Exponential, "Stieltjes Laplace form")?;
        let slot = ErrorSlot::<ClassError>::new();
        let r = integrate_semi_infinite(
            |t| (-x * t + (l - 1.0) * t.ln()).exp() * slot.value(self.nu.laplace_real(t).map_err(ClassError::from)),
            0.0,
            &spec,
        );
        Ok(slot.finish(r)?.value / gamma(l) + self.c)
    }
}
