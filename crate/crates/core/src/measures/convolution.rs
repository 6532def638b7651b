use super::family::Family;
use super::{integrate_piece, measure_spec, Atom, DensityPiece, Kernel, Measure, MeasureError};
use crate::numerics::{binomial, integrate_finite, log_space};
use crate::specfun::{gamma, pochhammer};

/// Nodes of a tabulated convolution density.
pub const TABULATION_POINTS: usize = 512;
/// Relative mass neglected beyond the end of a tabulated convolution.
const TAIL_MASS: f64 = 1e-9;
const MAX_TABULATION_END: f64 = 1e12;

impl Measure {
    /// μ ∗ ν.
    pub fn convolve(&self, other: &Measure) -> Result<Measure, MeasureError> {
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        for a in self.atoms() {
            for b in other.atoms() {
                atoms.push(Atom { loc: a.loc + b.loc, mass: a.mass * b.mass });
            }
            for q in other.pieces() {
                pieces.push(q.clone().weighted(a.mass).shifted(a.loc));
            }
        }
        for p in self.pieces() {
            for b in other.atoms() {
                pieces.push(p.clone().weighted(b.mass).shifted(b.loc));
            }
            for q in other.pieces() {
                pieces.push(convolve_pieces(p, q)?);
            }
        }
        Measure::from_parts(atoms, pieces)
    }

    /// s^j dμ(s).
    pub fn weighted_by_power(&self, j: u32) -> Result<Measure, MeasureError> {
        if j == 0 {
            return Ok(self.clone());
        }
        let atoms = self
            .atoms()
            .iter()
            .filter(|a| a.loc > 0.0)
            .map(|a| Atom { loc: a.loc, mass: a.mass * a.loc.powi(j as i32) })
            .collect();
        let mut pieces = Vec::new();
        for p in self.pieces() {
            let Family::PowerExp { r, c } = p.family else {
                return Err(MeasureError::Unsupported(format!(
                    "s^{j} times a {:?} density has no closed representation",
                    p.family
                )));
            };
            // s^j = Σ_i C(j,i) d^{j-i} (s-d)^i around the shift d
            let d = p.shift;
            for i in 0..=j {
                if d == 0.0 && i < j {
                    continue;
                }
                let coef = binomial(j as usize, i as usize) * d.powi((j - i) as i32) * pochhammer(r, i as usize);
                let fam = Family::PowerExp { r: r + i as f64, c };
                pieces.push(DensityPiece { weight: p.weight * coef, shift: d, family: fam });
            }
        }
        Measure::from_parts(atoms, pieces)
    }

    /// t ↦ ξ_n(t) = (1/(n-1)!) ∫_0^t (t-u)^{n-1} dμ(u).
    pub fn fractional_integral(&self, n: usize) -> Result<FractionalIntegral, MeasureError> {
        if n == 0 {
            return Err(MeasureError::Invalid("fractional integral order must be ≥ 1".into()));
        }
        Ok(FractionalIntegral { measure: self.clone(), n })
    }
}

fn convolve_pieces(p: &DensityPiece, q: &DensityPiece) -> Result<DensityPiece, MeasureError> {
    let weight = p.weight * q.weight;
    let shift = p.shift + q.shift;
    if let (Family::PowerExp { r: r1, c: c1 }, Family::PowerExp { r: r2, c: c2 }) = (&p.family, &q.family) {
        if c1 == c2 {
            return Ok(DensityPiece { weight, shift, family: Family::PowerExp { r: r1 + r2, c: *c1 } });
        }
    }
    if !p.family.has_finite_mass() || !q.family.has_finite_mass() {
        return Err(MeasureError::Unsupported(format!(
            "convolution of {:?} with {:?} (infinite mass factor)",
            p.family, q.family
        )));
    }
    let (lo_p, hi_p) = p.family.support();
    let (lo_q, hi_q) = q.family.support();
    let start = lo_p + lo_q;
    let end = effective_end(&p.family)? + effective_end(&q.family)?;
    let delta = 1e-6 * (end - start).min(1.0);
    let grid: Vec<f64> = log_space(delta, end - start, TABULATION_POINTS).into_iter().map(|v| start + v).collect();
    let (ep, eq) = (p.family.start_exponent(), q.family.start_exponent());
    let mut values = Vec::with_capacity(grid.len());
    for &u in &grid {
        let v_lo = lo_p.max(u - hi_q);
        let v_hi = hi_p.min(u - lo_q);
        if v_hi <= v_lo {
            values.push(0.0);
            continue;
        }
        let mut spec = measure_spec().with_rel_tol(1e-10);
        if v_lo == lo_p && ep < 0.0 {
            spec = spec.with_left_exponent(ep);
        }
        if v_hi == u - lo_q && eq < 0.0 {
            spec = spec.with_right_exponent(eq);
        }
        let f = |v: f64| p.family.density(v) * q.family.density(u - v);
        values.push(integrate_finite(f, v_lo, v_hi, &spec)?.value.max(0.0));
    }
    Ok(DensityPiece { weight, shift, family: Family::Tabulated { grid, values } })
}

/// Point beyond which the family keeps less than `TAIL_MASS` of its mass.
fn effective_end(family: &Family) -> Result<f64, MeasureError> {
    let (lo, hi) = family.support();
    if hi.is_finite() {
        return Ok(hi);
    }
    let piece = DensityPiece::new(family.clone());
    let cumulative = |u: f64| -> Result<f64, MeasureError> {
        match family.cumulative(u) {
            Some(v) => Ok(v),
            None => integrate_piece(&piece, &Kernel::new(|_| 1.0), u),
        }
    };
    let total = integrate_piece(&piece, &Kernel::new(|_| 1.0), f64::INFINITY)?;
    let mut u = lo + 1.0;
    while u < MAX_TABULATION_END {
        if total - cumulative(u)? <= TAIL_MASS * total {
            return Ok(u);
        }
        u *= 2.0;
    }
    Ok(MAX_TABULATION_END)
}

/// ξ_n for a fixed measure.
#[derive(Debug, Clone)]
pub struct FractionalIntegral {
    measure: Measure,
    n: usize,
}

impl FractionalIntegral {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn eval(&self, t: f64) -> Result<f64, MeasureError> {
        if !(t > 0.0) {
            return Ok(0.0);
        }
        let n = self.n;
        let nf = n as f64;
        let fact = gamma(nf);
        let mut total = 0.0;
        for a in self.measure.atoms() {
            if a.loc <= t {
                total += a.mass * (t - a.loc).powi(n as i32 - 1) / fact;
            }
        }
        for p in self.measure.pieces() {
            let tau = t - p.shift;
            total += match p.family {
                Family::PowerExp { r, c } if c == 0.0 => {
                    if tau > 0.0 {
                        p.weight * ((r + nf - 1.0) * tau.ln()).exp() / gamma(r + nf)
                    } else {
                        0.0
                    }
                }
                Family::TruncatedUnit { a, b } => {
                    let up = |x: f64| if x > 0.0 { x.powi(n as i32) } else { 0.0 };
                    p.weight * (up(tau - a) - up(tau - b)) / gamma(nf + 1.0)
                }
                _ => integrate_piece(p, &Kernel::new(|s| (t - s).powi(n as i32 - 1) / fact), t)?,
            };
        }
        Ok(total)
    }

    /// m_n ∗ μ, the measure with density ξ_n.
    pub fn as_measure(&self) -> Result<Measure, MeasureError> {
        Measure::m_r(self.n as f64)?.convolve(&self.measure)
    }
}
