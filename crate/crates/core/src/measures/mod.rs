//! Positive measures on [0, ∞) built from point masses and named density
//! families, with Laplace and Stieltjes transforms, convolution, moment
//! weighting and fractional integrals.

mod convolution;
mod family;
mod laplace;
mod literal;

pub use convolution::FractionalIntegral;
pub use family::{Decay, Family};
pub use laplace::{fubini_check, FubiniCheck};
pub use literal::{parse_measure_literal, parse_measure_literals};

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{gauss_kronrod_21, integrate, QuadError, QuadratureSpec};
use crate::specfun::SpecError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("invalid measure: {0}")]
    Invalid(String),
    #[error("argument {0} is not in the right half-plane")]
    BadArgument(Complex64),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("cannot parse measure literal `{literal}`: {reason}")]
    Literal { literal: String, reason: String },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Special(#[from] SpecError),
}

/// Relative tolerance for the quadratures performed on measure pieces.
pub const MEASURE_REL_TOL: f64 = 1e-12;

pub(crate) fn measure_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(MEASURE_REL_TOL).with_abs_tol(1e-300)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub loc: f64,
    pub mass: f64,
}

/// weight · density(s - shift) for s > shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece {
    #[serde(default = "one")]
    pub weight: f64,
    #[serde(default)]
    pub shift: f64,
    #[serde(flatten)]
    pub family: Family,
}

fn one() -> f64 {
    1.0
}

impl DensityPiece {
    pub fn new(family: Family) -> Self {
        DensityPiece { weight: 1.0, shift: 0.0, family }
    }

    pub fn weighted(mut self, w: f64) -> Self {
        self.weight *= w;
        self
    }

    pub fn shifted(mut self, d: f64) -> Self {
        self.shift += d;
        self
    }

    pub fn density(&self, s: f64) -> f64 {
        self.weight * self.family.density(s - self.shift)
    }

    /// Absolute support [lo, hi].
    pub fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.family.support();
        (lo + self.shift, hi + self.shift)
    }
}

/// Complex argument with positive real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluablePoint(Complex64);

impl EvaluablePoint {
    pub fn new(z: Complex64) -> Result<Self, MeasureError> {
        if z.re > 0.0 && z.re.is_finite() && z.im.is_finite() {
            Ok(EvaluablePoint(z))
        } else {
            Err(MeasureError::BadArgument(z))
        }
    }

    pub fn real(x: f64) -> Result<Self, MeasureError> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Function to be paired with a measure, with hints for the quadrature.
pub struct Kernel<F> {
    pub f: F,
    /// g(s) ~ s^e as s → 0+.
    pub origin_exponent: f64,
    pub decay: Decay,
}

impl<F: Fn(f64) -> f64> Kernel<F> {
    pub fn new(f: F) -> Self {
        Kernel { f, origin_exponent: 0.0, decay: Decay::Power(0.0) }
    }

    pub fn origin(mut self, e: f64) -> Self {
        self.origin_exponent = e;
        self
    }

    pub fn decay(mut self, d: Decay) -> Self {
        self.decay = d;
        self
    }
}

/// Behaviour of t ↦ L(μ)(t) at both ends of (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceProfile {
    /// L(μ)(t) = O(t^{-origin_order}) as t → 0+.
    pub origin_order: f64,
    pub tail: Decay,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct Measure {
    atoms: Vec<Atom>,
    pieces: Vec<DensityPiece>,
    mass_cache: Mutex<HashMap<u64, f64>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct MeasureRepr {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    pieces: Vec<DensityPiece>,
}

impl TryFrom<MeasureRepr> for Measure {
    type Error = MeasureError;
    fn try_from(r: MeasureRepr) -> Result<Self, MeasureError> {
        Measure::from_parts(r.atoms, r.pieces)
    }
}

impl From<Measure> for MeasureRepr {
    fn from(m: Measure) -> Self {
        MeasureRepr { atoms: m.atoms, pieces: m.pieces }
    }
}

impl Clone for Measure {
    fn clone(&self) -> Self {
        Measure { atoms: self.atoms.clone(), pieces: self.pieces.clone(), mass_cache: Mutex::default() }
    }
}

impl PartialEq for Measure {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms && self.pieces == other.pieces
    }
}

impl Measure {
    pub fn from_parts(atoms: Vec<Atom>, pieces: Vec<DensityPiece>) -> Result<Self, MeasureError> {
        let m = Measure { atoms, pieces, mass_cache: Mutex::default() };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), MeasureError> {
        for a in &self.atoms {
            if !(a.loc >= 0.0 && a.loc.is_finite() && a.mass > 0.0 && a.mass.is_finite()) {
                return Err(MeasureError::Invalid(format!(
                    "atom needs location ≥ 0 and mass > 0 (got loc={}, mass={})",
                    a.loc, a.mass
                )));
            }
        }
        for p in &self.pieces {
            if !(p.weight > 0.0 && p.weight.is_finite() && p.shift >= 0.0 && p.shift.is_finite()) {
                return Err(MeasureError::Invalid(format!(
                    "density piece needs weight > 0 and shift ≥ 0 (got w={}, shift={})",
                    p.weight, p.shift
                )));
            }
            p.family.validate()?;
        }
        Ok(())
    }

    pub fn zero() -> Self {
        Measure::default()
    }

    /// mass · ε_loc.
    pub fn atom(loc: f64, mass: f64) -> Result<Self, MeasureError> {
        Self::from_parts(vec![Atom { loc, mass }], vec![])
    }

    pub fn dirac(loc: f64) -> Result<Self, MeasureError> {
        Self::atom(loc, 1.0)
    }

    pub fn piece(piece: DensityPiece) -> Result<Self, MeasureError> {
        Self::from_parts(vec![], vec![piece])
    }

    pub fn family(family: Family) -> Result<Self, MeasureError> {
        Self::piece(DensityPiece::new(family))
    }

    /// m_r, density s^{r-1}/Γ(r).
    pub fn m_r(r: f64) -> Result<Self, MeasureError> {
        Self::family(Family::PowerExp { r, c: 0.0 })
    }

    pub fn power_exp(r: f64, c: f64) -> Result<Self, MeasureError> {
        Self::family(Family::PowerExp { r, c })
    }

    /// (s-c)^{k-1}/Γ(k) 𝟙_{s>c}.
    pub fn shifted_power(c: f64, k: f64) -> Result<Self, MeasureError> {
        if !(k >= 1.0) {
            return Err(MeasureError::Invalid(format!("shifted power needs k ≥ 1, got {k}")));
        }
        Self::piece(DensityPiece::new(Family::PowerExp { r: k, c: 0.0 }).shifted(c))
    }

    /// Lebesgue measure on (0, ∞).
    pub fn lebesgue() -> Self {
        Self::m_r(1.0).expect("m_1 is valid")
    }

    pub fn rational_square() -> Self {
        Self::family(Family::RationalSquare).expect("valid family")
    }

    pub fn ep_kernel(p: f64) -> Result<Self, MeasureError> {
        Self::family(Family::EpKernel { p })
    }

    pub fn truncated_unit(a: f64, b: f64) -> Result<Self, MeasureError> {
        Self::family(Family::TruncatedUnit { a, b })
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, MeasureError> {
        Self::family(Family::Tabulated { grid, values })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[DensityPiece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    /// μ + ν.
    pub fn plus(&self, other: &Measure) -> Measure {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut pieces = self.pieces.clone();
        pieces.extend_from_slice(&other.pieces);
        Measure { atoms, pieces, mass_cache: Mutex::default() }
    }

    /// w · μ for w ≥ 0.
    pub fn scaled(&self, w: f64) -> Result<Measure, MeasureError> {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(MeasureError::Invalid(format!("scale factor {w} must be finite and ≥ 0")));
        }
        if w == 0.0 {
            return Ok(Measure::zero());
        }
        let atoms = self.atoms.iter().map(|a| Atom { loc: a.loc, mass: a.mass * w }).collect();
        let pieces = self.pieces.iter().map(|p| p.clone().weighted(w)).collect();
        Ok(Measure { atoms, pieces, mass_cache: Mutex::default() })
    }

    /// Density of the absolutely continuous part at s.
    pub fn density(&self, s: f64) -> f64 {
        self.pieces.iter().map(|p| p.density(s)).sum()
    }

    pub fn laplace_profile(&self) -> LaplaceProfile {
        self.laplace_profile_weighted(0.0)
    }

    /// Profile of t ↦ ∫ e^{-ts} s^β dμ(s).
    pub fn laplace_profile_weighted(&self, beta: f64) -> LaplaceProfile {
        let mut origin_order: f64 = 0.0;
        let mut tail = Decay::Compact;
        let mut note = |d: Decay| {
            tail = match (tail, d) {
                (Decay::Power(p), Decay::Power(q)) => Decay::Power(p.min(q)),
                (Decay::Power(p), _) | (_, Decay::Power(p)) => Decay::Power(p),
                _ => Decay::Exponential,
            }
        };
        for a in &self.atoms {
            if a.loc == 0.0 && beta == 0.0 {
                note(Decay::Power(0.0));
            } else if a.loc > 0.0 {
                note(Decay::Exponential);
            }
        }
        for p in &self.pieces {
            // density ~ s^{-q} at infinity gives L ~ t^{q-1-β} at the origin
            if let Decay::Power(q) = p.family.decay() {
                origin_order = origin_order.max(1.0 - q + beta);
            }
            if p.support().0 == 0.0 {
                note(Decay::Power(p.family.start_exponent() + beta + 1.0));
            } else {
                note(Decay::Exponential);
            }
        }
        LaplaceProfile { origin_order, tail }
    }

    /// ∫ g dμ over [0, upper] (upper may be infinite).
    pub fn integrate_up_to<F: Fn(f64) -> f64>(&self, kernel: &Kernel<F>, upper: f64) -> Result<f64, MeasureError> {
        let mut total = 0.0;
        for a in &self.atoms {
            if a.loc <= upper {
                let v = (kernel.f)(a.loc);
                if !v.is_finite() {
                    return Err(MeasureError::Divergent(format!("kernel is not finite at the atom {}", a.loc)));
                }
                total += a.mass * v;
            }
        }
        for p in &self.pieces {
            total += integrate_piece(p, kernel, upper)?;
        }
        Ok(total)
    }

    /// ∫ g dμ.
    pub fn integrate<F: Fn(f64) -> f64>(&self, kernel: &Kernel<F>) -> Result<f64, MeasureError> {
        self.integrate_up_to(kernel, f64::INFINITY)
    }

    /// μ([0, n]), cached per n.
    pub fn mass_up_to(&self, n: f64) -> Result<f64, MeasureError> {
        if let Some(v) = self.mass_cache.lock().expect("mass cache").get(&n.to_bits()) {
            return Ok(*v);
        }
        let mut total: f64 = self.atoms.iter().filter(|a| a.loc <= n).map(|a| a.mass).sum();
        for p in &self.pieces {
            let u = n - p.shift;
            total += match p.family.cumulative(u) {
                Some(v) => p.weight * v,
                None => integrate_piece(p, &Kernel::new(|_| 1.0), n)?,
            };
        }
        self.mass_cache.lock().expect("mass cache").insert(n.to_bits(), total);
        Ok(total)
    }

    /// ∫ dμ(t)/(t+1)^λ; an error when it diverges.
    pub fn bernstein_condition(&self, lambda: f64) -> Result<f64, MeasureError> {
        self.integrate(&Kernel::new(|t| (1.0 + t).powf(-lambda)).decay(Decay::Power(lambda)))
    }
}

/// ∫ g(s) weight·density(s - shift) ds over the piece's support ∩ [0, upper],
/// integrated in the local coordinate u = s - shift.
pub(crate) fn integrate_piece<F: Fn(f64) -> f64>(
    piece: &DensityPiece,
    kernel: &Kernel<F>,
    upper: f64,
) -> Result<f64, MeasureError> {
    let (lo, hi) = piece.family.support();
    let shift = piece.shift;
    let b = hi.min(upper - shift);
    if b <= lo {
        return Ok(0.0);
    }
    let w = piece.weight;
    let family = &piece.family;
    let h = |u: f64| {
        let d = family.density(u);
        if d == 0.0 {
            0.0
        } else {
            w * d * (kernel.f)(u + shift)
        }
    };
    if let Family::Tabulated { grid, .. } = family {
        let mut acc = 0.0;
        for win in grid.windows(2) {
            if win[0] >= b {
                break;
            }
            acc += gauss_kronrod_21(&h, win[0], win[1].min(b))?.0;
        }
        return Ok(acc);
    }
    let mut left = family.start_exponent();
    if lo + shift == 0.0 {
        left += kernel.origin_exponent;
    }
    if left <= -1.0 {
        return Err(MeasureError::Divergent(format!("integrand behaves like s^{left} at {}", lo + shift)));
    }
    let mut spec = measure_spec().with_left_exponent_opt(Some(left));
    if b.is_infinite() {
        match family.decay().times(kernel.decay) {
            Decay::Power(q) if q <= 1.0 => {
                return Err(MeasureError::Divergent(format!("integrand decays only like s^-{q}")));
            }
            Decay::Power(q) => spec = spec.with_right_exponent(q),
            _ => {}
        }
    }
    Ok(integrate(h, lo, b, &spec)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(Measure::atom(-1.0, 1.0).is_err());
        assert!(Measure::atom(1.0, 0.0).is_err());
        assert!(Measure::m_r(0.0).is_err());
        assert!(Measure::truncated_unit(2.0, 1.0).is_err());
        assert!(Measure::shifted_power(1.0, 0.5).is_err());
        assert!(Measure::tabulated(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Measure::ep_kernel(1.5).is_ok());
    }

    #[test]
    fn mass_queries() {
        let mu = Measure::atom(1.0, 2.0).unwrap().plus(&Measure::lebesgue());
        assert_eq!(mu.mass_up_to(0.5).unwrap(), 0.5);
        assert_eq!(mu.mass_up_to(3.0).unwrap(), 5.0);
        assert_eq!(mu.mass_up_to(3.0).unwrap(), 5.0);
        let rs = Measure::rational_square();
        assert!((rs.mass_up_to(1.0).unwrap() - 0.5).abs() < 1e-15);
        // E_p kernel with p = 1: ∫_1^n ds/s = ln n
        let h = Measure::ep_kernel(1.0).unwrap();
        assert!((h.mass_up_to(5.0).unwrap() - 5f64.ln()).abs() < 1e-12);
        let sh = Measure::shifted_power(1.0, 2.0).unwrap();
        assert!((sh.mass_up_to(3.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bernstein_condition_detects_divergence() {
        assert!(Measure::m_r(0.5).unwrap().bernstein_condition(1.0).is_ok());
        assert!(matches!(Measure::m_r(1.0).unwrap().bernstein_condition(1.0), Err(MeasureError::Divergent(_))));
    }

    #[test]
    fn profile_of_mixtures() {
        let p = Measure::m_r(1.5).unwrap().plus(&Measure::dirac(2.0).unwrap()).laplace_profile();
        assert_eq!(p.origin_order, 1.5);
        assert_eq!(p.tail, Decay::Power(1.5));
        let q = Measure::dirac(0.0).unwrap().laplace_profile();
        assert_eq!(q.tail, Decay::Power(0.0));
        let r = Measure::dirac(1.0).unwrap().laplace_profile();
        assert_eq!(r.tail, Decay::Exponential);
    }

    #[test]
    fn serde_round_trip() {
        let mu = Measure::atom(1.0, 2.0).unwrap().plus(&Measure::ep_kernel(0.5).unwrap());
        let json = serde_json::to_string(&mu).unwrap();
        let back: Measure = serde_json::from_str(&json).unwrap();
        assert_eq!(mu, back);
        let parsed: Measure =
            serde_json::from_str(r#"{"atoms":[{"loc":0.5,"mass":1}],"pieces":[{"family":"power_exp","r":1,"c":0}]}"#)
                .unwrap();
        assert_eq!(parsed.pieces()[0].weight, 1.0);
        assert!(serde_json::from_str::<Measure>(r#"{"atoms":[{"loc":-1,"mass":1}]}"#).is_err());
    }
}
