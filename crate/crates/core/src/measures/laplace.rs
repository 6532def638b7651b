use num_complex::Complex64;

use super::family::Family;
use super::{integrate_piece, measure_spec, Decay, DensityPiece, EvaluablePoint, Kernel, Measure, MeasureError};
use crate::numerics::{integrate, ErrorSlot};
use crate::specfun::gamma;

fn piece_complex<G: Fn(f64) -> Complex64>(
    piece: &DensityPiece,
    g: G,
    origin: f64,
    decay: Decay,
    imaginary: bool,
) -> Result<Complex64, MeasureError> {
    let re = integrate_piece(piece, &Kernel::new(|s| g(s).re).origin(origin).decay(decay), f64::INFINITY)?;
    let im = if imaginary {
        integrate_piece(piece, &Kernel::new(|s| g(s).im).origin(origin).decay(decay), f64::INFINITY)?
    } else {
        0.0
    };
    Ok(Complex64::new(re, im))
}

impl Measure {
    /// L(μ)(z) = ∫ e^{-zs} dμ(s), closed forms where available.
    pub fn laplace(&self, z: EvaluablePoint) -> Result<Complex64, MeasureError> {
        self.laplace_with(z, false)
    }

    /// L(μ)(z) with every density piece integrated numerically.
    pub fn laplace_quadrature(&self, z: EvaluablePoint) -> Result<Complex64, MeasureError> {
        self.laplace_with(z, true)
    }

    /// L(μ)(t) for real t > 0.
    pub fn laplace_real(&self, t: f64) -> Result<f64, MeasureError> {
        Ok(self.laplace(EvaluablePoint::real(t)?)?.re)
    }

    fn laplace_with(&self, z: EvaluablePoint, force_quadrature: bool) -> Result<Complex64, MeasureError> {
        let z = z.value();
        let real = z.im == 0.0;
        let mut total = Complex64::new(0.0, 0.0);
        for a in self.atoms() {
            total += a.mass * if real { Complex64::new((-z.re * a.loc).exp(), 0.0) } else { (-z * a.loc).exp() };
        }
        for p in self.pieces() {
            let closed = if force_quadrature { None } else { p.family.laplace_closed(z) };
            total += match closed {
                Some(v) => {
                    let shift = if real { Complex64::new((-z.re * p.shift).exp(), 0.0) } else { (-z * p.shift).exp() };
                    p.weight * shift * v
                }
                None => piece_complex(p, |s| (-z * s).exp(), 0.0, Decay::Exponential, !real)?,
            };
        }
        Ok(total)
    }

    /// ∫ dμ(t)/(z+t)^λ for z off (-∞, 0].
    pub fn stieltjes_transform(&self, lambda: f64, z: Complex64) -> Result<Complex64, MeasureError> {
        if z.im == 0.0 && !(z.re > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(MeasureError::BadArgument(z));
        }
        if !(lambda > 0.0) {
            return Err(MeasureError::Invalid(format!("Stieltjes order must be positive, got {lambda}")));
        }
        let real = z.im == 0.0;
        let pow = |w: Complex64, e: f64| if real { Complex64::new(w.re.powf(e), 0.0) } else { w.powf(e) };
        let mut total = Complex64::new(0.0, 0.0);
        for a in self.atoms() {
            total += a.mass * pow(z + a.loc, -lambda);
        }
        for p in self.pieces() {
            let zs = z + p.shift;
            total += match p.family {
                Family::PowerExp { r, c } if c == 0.0 && r < lambda => {
                    p.weight * pow(zs, r - lambda) * (gamma(lambda - r) / gamma(lambda))
                }
                Family::TruncatedUnit { a, b } if lambda == 1.0 => p.weight * ((zs + b).ln() - (zs + a).ln()),
                Family::TruncatedUnit { a, b } if lambda != 1.0 => {
                    p.weight * (pow(zs + b, 1.0 - lambda) - pow(zs + a, 1.0 - lambda)) / (1.0 - lambda)
                }
                _ => piece_complex(p, |s| pow(z + s, -lambda), 0.0, Decay::Power(lambda), !real)?,
            };
        }
        Ok(total)
    }

    /// ∫ dμ(t)/(x+t)^λ for real x > 0.
    pub fn stieltjes_real(&self, lambda: f64, x: f64) -> Result<f64, MeasureError> {
        Ok(self.stieltjes_transform(lambda, Complex64::new(x, 0.0))?.re)
    }
}

/// Both sides of ∫ g(t) L(μ)(t) dt = ∫ L(g)(s) dμ(s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FubiniCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
}

/// Evaluates both sides of the Fubini exchange by independent quadratures.
/// The kernel hints describe g near 0 and at infinity.
pub fn fubini_check<F: Fn(f64) -> f64>(g: &Kernel<F>, mu: &Measure) -> Result<FubiniCheck, MeasureError> {
    let profile = mu.laplace_profile();
    let left = g.origin_exponent - profile.origin_order;
    if left <= -1.0 {
        return Err(MeasureError::Divergent(format!("g·L(μ) behaves like t^{left} at 0")));
    }
    let mut spec = measure_spec().with_left_exponent_opt(Some(left));
    match g.decay.times(profile.tail) {
        Decay::Power(q) if q <= 1.0 => {
            return Err(MeasureError::Divergent(format!("g·L(μ) decays only like t^-{q}")));
        }
        Decay::Power(q) => spec = spec.with_right_exponent(q),
        _ => {}
    }
    let slot = ErrorSlot::new();
    let r = integrate(|t| (g.f)(t) * slot.value(mu.laplace_real(t)), 0.0, f64::INFINITY, &spec);
    let lhs = slot.finish(r)?.value;

    let laplace_g = |s: f64| -> Result<f64, MeasureError> {
        let decay = if s > 0.0 { Decay::Exponential } else { g.decay };
        let mut spec = measure_spec().with_left_exponent_opt(Some(g.origin_exponent));
        match decay {
            Decay::Power(q) if q <= 1.0 => {
                return Err(MeasureError::Divergent(format!("L(g)({s}) diverges")));
            }
            Decay::Power(q) => spec = spec.with_right_exponent(q),
            _ => {}
        }
        Ok(integrate(|t| (-s * t).exp() * (g.f)(t), 0.0, f64::INFINITY, &spec)?.value)
    };
    let slot = ErrorSlot::new();
    let r = mu.integrate(&Kernel::new(|s| slot.value(laplace_g(s))).decay(Decay::Power(g.origin_exponent + 1.0)));
    let rhs = slot.finish(r)?;
    let rel_gap = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(FubiniCheck { lhs, rhs, rel_gap })
}
