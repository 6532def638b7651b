use super::incgamma::upper_inc_gamma_scaled;
use super::{domain, SpecError};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_TERMS: usize = 100_000;

/// e^x E_p(x) for p > 0 and x > 0.
pub fn exp_integral_e_scaled(p: f64, x: f64) -> Result<f64, SpecError> {
    if !(p > 0.0) || !p.is_finite() {
        return domain(format!("E_p needs p > 0, got {p}"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("E_p needs 0 < x < ∞, got {x}"));
    }
    if x < 1.0 {
        // E_p(x) = x^{p-1} Γ(1-p, x)
        return Ok(((p - 1.0) * x.ln()).exp() * upper_inc_gamma_scaled(1.0 - p, x)?);
    }
    let mut b = x + p;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (p - 1.0 + i as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(SpecError::NonConvergence { terms: MAX_TERMS, partial: h })
}

/// E_p(x) = ∫_1^∞ e^{-xt} t^{-p} dt.
pub fn exp_integral_e(p: f64, x: f64) -> Result<f64, SpecError> {
    Ok((-x).exp() * exp_integral_e_scaled(p, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn e1_reference() {
        let v = exp_integral_e(1.0, 1.0).unwrap();
        assert!(rel(v, 0.219_383_934_395_520_273_677_163_775_460_121_649_031) < 1e-14);
    }

    #[test]
    fn branches_agree_at_one() {
        for &p in &[0.3, 1.0, 1.5, 2.0, 3.7] {
            let below = exp_integral_e_scaled(p, 1.0 - 1e-12).unwrap();
            let above = exp_integral_e_scaled(p, 1.0).unwrap();
            assert!(rel(below, above) < 1e-10, "p={p}");
        }
    }

    #[test]
    fn recurrence_in_order() {
        // p E_{p+1}(x) = e^{-x} - x E_p(x)
        for &p in &[0.4, 1.0, 2.5] {
            for &x in &[0.1, 0.8, 2.0, 15.0] {
                let lhs = p * exp_integral_e_scaled(p + 1.0, x).unwrap();
                let rhs = 1.0 - x * exp_integral_e_scaled(p, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1e-3), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(exp_integral_e(0.0, 1.0).is_err());
        assert!(exp_integral_e(1.0, 0.0).is_err());
    }
}
