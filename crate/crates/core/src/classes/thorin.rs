use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{check_x, semi_infinite_spec, ClassError, StieltjesFn};
use crate::measures::{integrate_piece, Decay, DensityPiece, Family, Kernel, Measure};
use crate::numerics::{central_derivative, integrate_semi_infinite, ErrorSlot, QuadratureSpec};
use crate::specfun::{gamma, hyp2f1, inc_beta, inc_beta_complement, lower_inc_gamma};

/// Evaluation path for a Thorin-Bernstein function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// ∫ γ(λ, xt) φ(t) dt by quadrature.
    Defining,
    /// Γ(λ+1-α) ∫ B(λ, 1-α; x/(x+s)) s^{α-1} dσ(s).
    #[default]
    BetaForm,
    /// The same integral with the incomplete beta written through ₂F₁(α, 1; λ+1; -x/s).
    HyperForm,
}

impl Representation {
    pub const ALL: [Representation; 3] = [Representation::Defining, Representation::BetaForm, Representation::HyperForm];

    pub fn name(self) -> &'static str {
        match self {
            Representation::Defining => "defining",
            Representation::BetaForm => "beta_form",
            Representation::HyperForm => "hyper_form",
        }
    }
}

impl FromStr for Representation {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Representation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| ClassError::Invalid(format!("unknown representation '{s}'")))
    }
}

/// f(x) = a x^λ + b + ∫ γ(λ, xt) φ(t) dt with φ(t) = t^{-α} L(σ)(t).
#[derive(Debug, Clone, PartialEq)]
pub struct ThorinBernsteinFn {
    pub lambda: f64,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: Measure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterizationRow {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizationReport {
    pub rows: Vec<CharacterizationRow>,
    pub max_rel_err: f64,
}

/// L(f)(x) together with both sides of the Stieltjes decomposition of
/// x^α L(f)(x) - b x^{α-1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceDecomposition {
    pub laplace: f64,
    pub decomposed: f64,
    pub double_integral: f64,
}

impl ThorinBernsteinFn {
    pub fn new(lambda: f64, alpha: f64, a: f64, b: f64, sigma: Measure) -> Result<Self, ClassError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ClassError::Invalid(format!("λ must be positive, got {lambda}")));
        }
        if !(alpha < lambda + 1.0 && alpha.is_finite()) {
            return Err(ClassError::Invalid(format!("α must be below λ+1 = {}, got {alpha}", lambda + 1.0)));
        }
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(ClassError::Invalid(format!("a, b must be non-negative (got {a}, {b})")));
        }
        let f = ThorinBernsteinFn { lambda, alpha, a, b, sigma };
        f.defining_spec()?;
        Ok(f)
    }

    /// Γ(λ+1-α).
    fn kappa(&self) -> f64 {
        gamma(self.lambda + 1.0 - self.alpha)
    }

    fn defining_spec(&self) -> Result<QuadratureSpec, ClassError> {
        let profile = self.sigma.laplace_profile();
        semi_infinite_spec(
            self.lambda - self.alpha - profile.origin_order,
            Decay::Power(self.alpha).times(profile.tail),
            "γ(λ, xt) φ(t)",
        )
    }

    /// φ(t) = t^{-α} L(σ)(t).
    pub fn phi(&self, t: f64) -> Result<f64, ClassError> {
        check_x(t)?;
        Ok(t.powf(-self.alpha) * self.sigma.laplace_real(t)?)
    }

    pub fn eval(&self, x: f64) -> Result<f64, ClassError> {
        self.eval_with(x, Representation::default())
    }

    pub fn eval_with(&self, x: f64, repr: Representation) -> Result<f64, ClassError> {
        if x == 0.0 {
            return Ok(self.b);
        }
        check_x(x)?;
        let base = self.a * x.powf(self.lambda) + self.b;
        let integral = match repr {
            Representation::Defining => self.defining_integral(x)?,
            Representation::BetaForm | Representation::HyperForm => self.per_mass_integral(x, repr)?,
        };
        Ok(base + integral)
    }

    fn defining_integral(&self, x: f64) -> Result<f64, ClassError> {
        if self.sigma.is_zero() {
            return Ok(0.0);
        }
        let (l, al) = (self.lambda, self.alpha);
        let spec = self.defining_spec()?;
        let slot = ErrorSlot::<ClassError>::new();
        let r = integrate_semi_infinite(
            |t| {
                let g = slot.value(lower_inc_gamma(l, x * t).map_err(ClassError::from));
                let lt = slot.value(self.sigma.laplace_real(t).map_err(ClassError::from));
                g * t.powf(-al) * lt
            },
            0.0,
            &spec,
        );
        Ok(slot.finish(r)?.value)
    }

    /// Contribution of a unit mass at s > 0.
    fn mass_term(&self, x: f64, s: f64, repr: Representation) -> Result<f64, ClassError> {
        let (l, al) = (self.lambda, self.alpha);
        let k = self.kappa();
        Ok(match repr {
            Representation::HyperForm => {
                k / l * x.powf(l) * (x + s).powf(al - l) / s * hyp2f1(al, 1.0, l + 1.0, -x / s)?
            }
            _ => {
                let u = x / (x + s);
                let b = if u <= 0.5 { inc_beta(l, 1.0 - al, u)? } else { inc_beta_complement(l, 1.0 - al, s / (x + s))? };
                k * s.powf(al - 1.0) * b
            }
        })
    }

    fn per_mass_integral(&self, x: f64, repr: Representation) -> Result<f64, ClassError> {
        let (l, al) = (self.lambda, self.alpha);
        let mut total = 0.0;
        for atom in self.sigma.atoms() {
            total += atom.mass
                * if atom.loc == 0.0 {
                    self.kappa() * x.powf(al - 1.0) / (al - 1.0)
                } else {
                    self.mass_term(x, atom.loc, repr)?
                };
        }
        for p in self.sigma.pieces() {
            let slot = ErrorSlot::<ClassError>::new();
            let kernel = Kernel::new(|s: f64| slot.value(self.mass_term(x, s, repr)))
                .origin(if al < 1.0 { al - 1.0 } else { 0.0 })
                .decay(Decay::Power(l + 1.0 - al));
            let r = integrate_piece(p, &kernel, f64::INFINITY);
            drop(kernel);
            total += slot.finish(r)?;
        }
        Ok(total)
    }

    /// f'(x) = λ a x^{λ-1} + Γ(λ+1-α) x^{λ-1} ∫ dσ(s)/(x+s)^{λ+1-α}.
    pub fn thorin_derivative(&self, x: f64) -> Result<f64, ClassError> {
        check_x(x)?;
        let l = self.lambda;
        let xl = x.powf(l - 1.0);
        let st = if self.sigma.is_zero() {
            0.0
        } else {
            self.sigma.stieltjes_real(l + 1.0 - self.alpha, x)?
        };
        Ok(l * self.a * xl + self.kappa() * xl * st)
    }

    /// The Stieltjes function of order λ+1-α equal to x^{1-λ} f'(x).
    pub fn derivative_stieltjes(&self) -> Result<StieltjesFn, ClassError> {
        let nu = self.sigma.scaled(self.kappa())?;
        StieltjesFn::new(self.lambda + 1.0 - self.alpha, nu, self.lambda * self.a)
    }

    /// Compares x^{1-λ} f'(x), with f' a central difference of the default
    /// representation, against the Stieltjes evaluation.
    pub fn characterization_check(&self, grid: &[f64]) -> Result<CharacterizationReport, ClassError> {
        let g = self.derivative_stieltjes()?;
        let mut rows = Vec::with_capacity(grid.len());
        for &x in grid {
            check_x(x)?;
            let slot = ErrorSlot::<ClassError>::new();
            let d = central_derivative(&|y: f64| slot.value(self.eval(y)), x, 1e-4);
            let d = slot.finish::<f64, ClassError>(Ok(d))?;
            let lhs = x.powf(1.0 - self.lambda) * d;
            let rhs = g.eval(x)?;
            rows.push(CharacterizationRow { x, lhs, rhs, rel_err: rel_gap(lhs, rhs) });
        }
        let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
        Ok(CharacterizationReport { rows, max_rel_err })
    }

    /// L(f)(x) = ∫ e^{-xt} f(t) dt.
    pub fn laplace_transform(&self, x: f64) -> Result<f64, ClassError> {
        check_x(x)?;
        let spec = semi_infinite_spec(0.0, Decay::Exponential, "e^{-xt} f(t)")?;
        let slot = ErrorSlot::<ClassError>::new();
        let r = integrate_semi_infinite(|t| (-x * t).exp() * slot.value(self.eval(t)), 0.0, &spec);
        Ok(slot.finish(r)?.value)
    }

    /// ∫ s^{α-1} e^{-vs} dσ(s).
    fn weighted_laplace(&self, v: f64) -> Result<f64, ClassError> {
        let al = self.alpha;
        let mut total = 0.0;
        for atom in self.sigma.atoms() {
            if atom.loc == 0.0 {
                return Err(ClassError::Invalid("decomposition needs σ({0}) = 0".into()));
            }
            total += atom.mass * atom.loc.powf(al - 1.0) * (-v * atom.loc).exp();
        }
        for p in self.sigma.pieces() {
            total += match p.family {
                Family::PowerExp { r, c } if p.shift == 0.0 => {
                    p.weight * gamma(al + r - 1.0) / gamma(r) * (v + c).powf(1.0 - al - r)
                }
                _ => {
                    let kernel = Kernel::new(|s: f64| s.powf(al - 1.0) * (-v * s).exp())
                        .origin(al - 1.0)
                        .decay(Decay::Exponential);
                    integrate_piece(p, &kernel, f64::INFINITY)?
                }
            };
        }
        Ok(total)
    }

    /// L(f)(x), x^α L(f)(x) - b x^{α-1}, and the double-integral form of the latter.
    pub fn laplace_of_thorin(&self, x: f64) -> Result<LaplaceDecomposition, ClassError> {
        check_x(x)?;
        let (l, al) = (self.lambda, self.alpha);
        let laplace = self.laplace_transform(x)?;
        let decomposed = x.powf(al) * laplace - self.b * x.powf(al - 1.0);
        let mut double_integral = self.a * gamma(l + 1.0) * x.powf(al - l - 1.0);
        if !self.sigma.is_zero() {
            let profile = self.sigma.laplace_profile_weighted(al - 1.0);
            let spec = semi_infinite_spec(
                l - 1.0 - profile.origin_order,
                profile.tail.times(Decay::Power(2.0 - al)),
                "Stieltjes double integral",
            )?;
            let slot = ErrorSlot::<ClassError>::new();
            let r = integrate_semi_infinite(
                |v| slot.value(self.weighted_laplace(v)) * v.powf(l - 1.0) * (x + v).powf(al - l - 1.0),
                0.0,
                &spec,
            );
            double_integral += self.kappa() * slot.finish(r)?.value;
        }
        Ok(LaplaceDecomposition { laplace, decomposed, double_integral })
    }

    /// The same function written with order α₁ < α: each mass m ε_s becomes
    /// m times m_{α-α₁} shifted to s. Only for σ made of atoms away from 0.
    pub fn with_lower_order(&self, alpha1: f64) -> Result<ThorinBernsteinFn, ClassError> {
        if !(alpha1 < self.alpha) {
            return Err(ClassError::Invalid(format!("new order {alpha1} must be below {}", self.alpha)));
        }
        if !self.sigma.pieces().is_empty() || self.sigma.atoms().iter().any(|a| a.loc <= 0.0) {
            return Err(ClassError::Invalid("re-expression needs σ made of atoms on (0, ∞)".into()));
        }
        let r = self.alpha - alpha1;
        let pieces = self
            .sigma
            .atoms()
            .iter()
            .map(|a| DensityPiece::new(Family::PowerExp { r, c: 0.0 }).weighted(a.mass).shifted(a.loc))
            .collect();
        let sigma = Measure::from_parts(Vec::new(), pieces)?;
        ThorinBernsteinFn::new(self.lambda, alpha1, self.a, self.b, sigma)
    }
}

pub(crate) fn rel_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}
