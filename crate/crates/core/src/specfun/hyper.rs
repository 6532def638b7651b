use serde::{Deserialize, Serialize};

use super::gamma::{gamma, ln_gamma};
use super::{domain, is_nonpositive_integer, SpecError};
use crate::numerics::{integrate_finite, QuadratureSpec};

const SERIES_CAP: usize = 100_000;
/// Largest (transformed) argument handled by the plain power series.
pub(crate) const SERIES_Z_MAX: f64 = 0.98;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricArgs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl HypergeometricArgs {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let Self { a, b, c, z } = *self;
        if ![a, b, c, z].iter().all(|v| v.is_finite()) {
            return domain("₂F₁ parameters must be finite");
        }
        if is_nonpositive_integer(c) {
            return domain(format!("₂F₁ undefined for c = {c}"));
        }
        if z >= 1.0 {
            return domain(format!("₂F₁ needs z < 1, got {z}"));
        }
        Ok(())
    }
}

/// Gauss ₂F₁(a, b; c; z) for real z < 1.
pub fn gauss_2f1(args: &HypergeometricArgs) -> Result<f64, SpecError> {
    args.validate()?;
    let HypergeometricArgs { a, b, c, z } = *args;
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if z > 0.0 {
        return positive_argument(a, b, c, z);
    }
    // Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1))
    let w = z / (z - 1.0);
    if w > SERIES_Z_MAX {
        if let Some(v) = euler_integral(a, b, c, z)? {
            return Ok(v);
        }
    }
    Ok((1.0 - z).powf(-a) * positive_argument(a, c - b, c, w)?)
}

/// Shorthand for [`gauss_2f1`].
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecError> {
    gauss_2f1(&HypergeometricArgs::new(a, b, c, z))
}

fn terminates(a: f64, b: f64) -> bool {
    is_nonpositive_integer(a) || is_nonpositive_integer(b)
}

fn positive_argument(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecError> {
    if z < 0.5 || terminates(a, b) {
        return series(a, b, c, z);
    }
    if z > SERIES_Z_MAX {
        if let Some(v) = euler_integral(a, b, c, z)? {
            return Ok(v);
        }
    }
    // Euler: (1-z)^{c-a-b} F(c-a, c-b; c; z)
    Ok((1.0 - z).powf(c - a - b) * series(c - a, c - b, c, z)?)
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecError> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        // compensated summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let r = ratio.abs().max(z.abs());
        if r < 1.0 && term.abs() / (1.0 - r) <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
        if !term.is_finite() {
            break;
        }
    }
    Err(SpecError::NonConvergence { terms: SERIES_CAP, partial: sum })
}

/// Γ(c)/(Γ(b)Γ(c-b)) ∫_0^1 t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} dt, when c > b > 0
/// for either ordering of (a, b). `None` when neither ordering qualifies.
fn euler_integral(a: f64, b: f64, c: f64, z: f64) -> Result<Option<f64>, SpecError> {
    let (a, b) = if c > b && b > 0.0 {
        (a, b)
    } else if c > a && a > 0.0 {
        (b, a)
    } else {
        return Ok(None);
    };
    let left = b - 1.0;
    let right = c - b - 1.0;
    let mut spec = QuadratureSpec::default().with_rel_tol(1e-13).with_left_exponent_opt(Some(left));
    if right < 0.0 {
        spec = spec.with_right_exponent(right);
    }
    let f = |t: f64| t.powf(left) * (1.0 - t).powf(right) * (1.0 - z * t).powf(-a);
    let integral = integrate_finite(&f, 0.0, 1.0, &spec)?;
    let norm = if c < 170.0 {
        gamma(c) / (gamma(b) * gamma(c - b))
    } else {
        (ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)).exp()
    };
    Ok(Some(norm * integral.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn reference_value() {
        let v = hyp2f1(2.5, 1.7, 3.5, 0.3).unwrap();
        assert!(rel(v, 1.528_494_082_670_694_300_408_476_532_569_540_210_266) < 1e-14);
    }

    #[test]
    fn euler_integral_strong_right_singularity() {
        // c - b - 1 = -0.7 puts Euler-integral nodes within an ulp of t = 1; mpmath values
        let cases = [
            (-1.0, -431.8, 333.153_846_153_846_13),
            (-0.999, -60.0, 46.968_716_643_320_626),
            (-0.5, -1e4, 85.402_619_496_168_73),
            (0.5, -431.8, 0.064_334_500_072_558_46),
            (2.0, -60.0, 0.005_316_448_467_921_428),
        ];
        for (a, z, want) in cases {
            let got = hyp2f1(a, 1.0, 1.3, z).unwrap();
            assert!(rel(got, want) < 1e-12, "a={a} z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn elementary_closed_forms() {
        // ₂F₁(1,1;2;z) = -ln(1-z)/z
        for &z in &[-50.0, -3.0, -0.7, 0.2, 0.6, 0.95, 0.99, 0.999_9] {
            let want = -(-z as f64).ln_1p() / z;
            let got = hyp2f1(1.0, 1.0, 2.0, z).unwrap();
            assert!(rel(got, want) < 1e-12, "z={z}: {got} vs {want}");
        }
        // ₂F₁(a,b;b;z) = (1-z)^{-a}
        for &z in &[-9.0, 0.4, 0.97, 0.995] {
            let got = hyp2f1(0.7, 2.3, 2.3, z).unwrap();
            assert!(rel(got, (1.0 - z).powf(-0.7)) < 1e-12, "z={z}");
        }
    }

    #[test]
    fn terminating_series() {
        // ₂F₁(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 0.999);
        let want = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!(rel(hyp2f1(-2.0, b, c, z).unwrap(), want) < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(hyp2f1(1.0, 1.0, -2.0, 0.1), Err(SpecError::Domain(_))));
        assert!(matches!(hyp2f1(1.0, 1.0, 2.0, 1.0), Err(SpecError::Domain(_))));
    }
}
