use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MeasureError;
use crate::numerics::gauss_kronrod_21;
use crate::specfun::{exp_integral_e_scaled, gamma, lower_inc_gamma};

/// Named density families, written in the local coordinate u ≥ 0 of a piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// u^{r-1} e^{-cu} / Γ(r); with c = 0 this is m_r.
    PowerExp { r: f64, c: f64 },
    /// (1+u)^{-2}.
    RationalSquare,
    /// 𝟙_{u>1} (u-1)^{p-1} / (Γ(p) u).
    EpKernel { p: f64 },
    /// 𝟙_{(a,b)}(u).
    TruncatedUnit { a: f64, b: f64 },
    /// Piecewise linear through (grid[i], values[i]), zero outside the grid.
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

/// Behaviour of a density (or kernel) as u → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Vanishes beyond a finite point.
    Compact,
    /// Decays at least like e^{-rate·u} with rate > 0.
    Exponential,
    /// Behaves like u^{-q}; q may be negative for growing densities.
    Power(f64),
}

impl Decay {
    /// Decay of a product of two factors.
    pub fn times(self, other: Decay) -> Decay {
        match (self, other) {
            (Decay::Compact, _) | (_, Decay::Compact) => Decay::Compact,
            (Decay::Exponential, _) | (_, Decay::Exponential) => Decay::Exponential,
            (Decay::Power(p), Decay::Power(q)) => Decay::Power(p + q),
        }
    }
}

impl Family {
    pub fn validate(&self) -> Result<(), MeasureError> {
        let bad = |m: String| Err(MeasureError::Invalid(m));
        match self {
            Family::PowerExp { r, c } => {
                if !(*r > 0.0 && r.is_finite() && *c >= 0.0 && c.is_finite()) {
                    return bad(format!("power-exp family needs r > 0, c ≥ 0 (got r={r}, c={c})"));
                }
            }
            Family::RationalSquare => {}
            Family::EpKernel { p } => {
                if !(*p > 0.0 && p.is_finite()) {
                    return bad(format!("E_p kernel needs p > 0, got {p}"));
                }
            }
            Family::TruncatedUnit { a, b } => {
                if !(*a >= 0.0 && a < b && b.is_finite()) {
                    return bad(format!("truncated unit density needs 0 ≤ a < b < ∞ (got {a}, {b})"));
                }
            }
            Family::Tabulated { grid, values } => {
                if grid.len() < 2 || grid.len() != values.len() {
                    return bad("tabulated density needs ≥ 2 nodes and matching values".into());
                }
                if !(grid[0] >= 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) || !grid[grid.len() - 1].is_finite() {
                    return bad("tabulated grid must be finite, non-negative and strictly increasing".into());
                }
                if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                    return bad("tabulated density values must be finite and non-negative".into());
                }
            }
        }
        Ok(())
    }

    pub fn density(&self, u: f64) -> f64 {
        match self {
            Family::PowerExp { r, c } => {
                if u <= 0.0 {
                    return 0.0;
                }
                ((r - 1.0) * u.ln() - c * u).exp() / gamma(*r)
            }
            Family::RationalSquare => {
                if u < 0.0 {
                    0.0
                } else {
                    1.0 / ((1.0 + u) * (1.0 + u))
                }
            }
            Family::EpKernel { p } => {
                if u <= 1.0 {
                    return 0.0;
                }
                (u - 1.0).powf(p - 1.0) / (gamma(*p) * u)
            }
            Family::TruncatedUnit { a, b } => {
                if u > *a && u < *b {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Tabulated { grid, values } => interpolate(grid, values, u),
        }
    }

    /// Support [lo, hi] in the local coordinate; hi may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Family::PowerExp { .. } | Family::RationalSquare => (0.0, f64::INFINITY),
            Family::EpKernel { .. } => (1.0, f64::INFINITY),
            Family::TruncatedUnit { a, b } => (*a, *b),
            Family::Tabulated { grid, .. } => (grid[0], grid[grid.len() - 1]),
        }
    }

    /// Exponent e with density ~ (u - lo)^e at the left end of the support.
    pub fn start_exponent(&self) -> f64 {
        match self {
            Family::PowerExp { r, .. } => r - 1.0,
            Family::EpKernel { p } => p - 1.0,
            _ => 0.0,
        }
    }

    pub fn decay(&self) -> Decay {
        match self {
            Family::PowerExp { r, c } => {
                if *c > 0.0 {
                    Decay::Exponential
                } else {
                    Decay::Power(1.0 - r)
                }
            }
            Family::RationalSquare => Decay::Power(2.0),
            Family::EpKernel { p } => Decay::Power(2.0 - p),
            Family::TruncatedUnit { .. } | Family::Tabulated { .. } => Decay::Compact,
        }
    }

    pub fn has_finite_mass(&self) -> bool {
        match self.decay() {
            Decay::Power(q) => q > 1.0,
            _ => true,
        }
    }

    /// ∫_0^u density, where a closed form exists.
    pub fn cumulative(&self, u: f64) -> Option<f64> {
        let (lo, hi) = self.support();
        if u <= lo {
            return Some(0.0);
        }
        match self {
            Family::PowerExp { r, c } => {
                if *c == 0.0 {
                    Some((r * u.ln()).exp() / gamma(r + 1.0))
                } else {
                    lower_inc_gamma(*r, c * u).ok().map(|g| g / (gamma(*r) * c.powf(*r)))
                }
            }
            Family::RationalSquare => Some(u / (1.0 + u)),
            Family::TruncatedUnit { a, b } => Some(u.min(*b) - a),
            Family::Tabulated { grid, values } => {
                let top = u.min(hi);
                let mut acc = 0.0;
                for i in 0..grid.len() - 1 {
                    let (x0, x1) = (grid[i], grid[i + 1]);
                    if x0 >= top {
                        break;
                    }
                    let x1c = x1.min(top);
                    let v1 = interpolate(grid, values, x1c);
                    acc += 0.5 * (values[i] + v1) * (x1c - x0);
                }
                Some(acc)
            }
            Family::EpKernel { .. } => None,
        }
    }

    /// Closed-form Laplace transform ∫ e^{-zu} density(u) du, when available.
    pub fn laplace_closed(&self, z: Complex64) -> Option<Complex64> {
        let real = z.im == 0.0;
        match self {
            Family::PowerExp { r, c } => {
                if real {
                    Some(Complex64::new((z.re + c).powf(-r), 0.0))
                } else {
                    Some((z + c).powf(-r))
                }
            }
            Family::RationalSquare if real => {
                exp_integral_e_scaled(2.0, z.re).ok().map(|v| Complex64::new(v, 0.0))
            }
            Family::EpKernel { p } if real => {
                let t = z.re;
                exp_integral_e_scaled(*p, t)
                    .ok()
                    .map(|v| Complex64::new(((1.0 - p) * t.ln() - t).exp() * v, 0.0))
            }
            Family::TruncatedUnit { a, b } => {
                if real {
                    let t = z.re;
                    Some(Complex64::new((-t * a).exp() * -(-t * (b - a)).exp_m1() / t, 0.0))
                } else {
                    Some(((-z * a).exp() - (-z * b).exp()) / z)
                }
            }
            Family::Tabulated { grid, values } => {
                let mut re = 0.0;
                let mut im = 0.0;
                for i in 0..grid.len() - 1 {
                    let (x0, x1) = (grid[i], grid[i + 1]);
                    let f = |u: f64| (-z * u).exp() * interpolate(grid, values, u);
                    re += gauss_kronrod_21(&|u| f(u).re, x0, x1).ok()?.0;
                    if !real {
                        im += gauss_kronrod_21(&|u| f(u).im, x0, x1).ok()?.0;
                    }
                }
                Some(Complex64::new(re, im))
            }
            _ => None,
        }
    }
}

fn interpolate(grid: &[f64], values: &[f64], u: f64) -> f64 {
    let n = grid.len();
    if u < grid[0] || u > grid[n - 1] {
        return 0.0;
    }
    let i = match grid.binary_search_by(|g| g.total_cmp(&u)) {
        Ok(i) => return values[i],
        Err(i) => i,
    };
    let (x0, x1) = (grid[i - 1], grid[i]);
    let w = (u - x0) / (x1 - x0);
    values[i - 1] * (1.0 - w) + values[i] * w
}
