use std::f64::consts::{E, PI};

use num_complex::Complex64;

use super::grid::{Axis, Point, Subgrid};
use super::{Comparison, EvalError, EvalResult, IdentityCase, Side};
use crate::classes::{
    build_sigma_n, counterexample_transform, counterexample_transform_closed, lomax_cdf, lomax_cdf_quadrature,
    pick_grid, stieltjes_violation_probe, sup_h_k, Representation, ThorinBernsteinFn,
};
use crate::measures::{fubini_check, Decay, Kernel, Measure};
use crate::numerics::{central_derivative, integrate_finite, integrate_semi_infinite, ErrorSlot, QuadratureSpec};
use crate::specfun::{exp_integral_e, gamma, hyp2f1, inc_beta, lower_inc_gamma};

const SINGLE: f64 = 1e-8;
const NESTED: f64 = 1e-6;

const LAMBDA: [f64; 3] = [0.5, 1.0, 2.5];
const X: [f64; 3] = [0.1, 1.0, 10.0];
const S: [f64; 2] = [0.5, 2.0];
const P: [f64; 2] = [0.5, 1.5];
const BETA: [f64; 2] = [0.5, 1.5];
const Z: [f64; 3] = [0.2, 0.4, 0.7];
const ORDERS: [f64; 3] = [1.0, 2.0, 3.0];

/// Threshold the counterexample's imaginary part must exceed.
const PICK_THRESHOLD: f64 = 1e-6;
/// Largest imaginary residue tolerated in the root-of-unity sums.
const IMAG_RESIDUE: f64 = 1e-10;

fn alphas(p: &Point) -> Vec<f64> {
    vec![-0.5, 0.0, 0.5, 1.0, (p.num("lambda") + 0.9).min(2.0)]
}

fn lambda() -> Axis {
    Axis::nums("lambda", &LAMBDA)
}

fn alpha() -> Axis {
    Axis::dependent("alpha", alphas)
}

fn x() -> Axis {
    Axis::nums("x", &X)
}

fn quad_spec(left: Option<f64>, right: Option<f64>) -> QuadratureSpec {
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-300).with_left_exponent_opt(left);
    match right {
        Some(r) => spec.with_right_exponent(r),
        None => spec,
    }
}

fn finite(f: impl Fn(f64) -> EvalResult, a: f64, b: f64, left: Option<f64>, right: Option<f64>) -> EvalResult {
    let slot = ErrorSlot::<EvalError>::new();
    let r = integrate_finite(|t| slot.value(f(t)), a, b, &quad_spec(left, right));
    Ok(slot.finish(r)?.value)
}

/// ∫_a^∞ f with an optional origin exponent and algebraic decay power.
fn semi(f: impl Fn(f64) -> EvalResult, a: f64, left: Option<f64>, decay: Option<f64>) -> EvalResult {
    let slot = ErrorSlot::<EvalError>::new();
    let r = integrate_semi_infinite(|t| slot.value(f(t)), a, &quad_spec(left, decay));
    Ok(slot.finish(r)?.value)
}

fn is_int(v: f64) -> bool {
    v == v.round()
}

/// Positivity and integrality constraints shared by every entry.
fn base_ok(p: &Point) -> bool {
    p.entries().iter().all(|(name, v)| {
        let super::Value::Num(v) = *v else { return true };
        match *name {
            "lambda" | "x" | "s" | "c" | "p" | "t" | "beta" | "q" => v > 0.0,
            "z" => v > 0.0 && v < 1.0,
            "n" => v >= 0.0 && is_int(v) && v <= 12.0,
            "k" => v >= 1.0 && is_int(v) && v <= 1e6,
            "a" => v >= 0.0,
            _ => true,
        }
    })
}

fn below_lambda_plus_one(p: &Point) -> bool {
    base_ok(p) && p.num("alpha") < p.num("lambda") + 1.0
}

fn dirac(s: f64) -> Result<Measure, EvalError> {
    Ok(Measure::dirac(s)?)
}

fn thorin(l: f64, al: f64, mu: Measure) -> Result<ThorinBernsteinFn, EvalError> {
    Ok(ThorinBernsteinFn::new(l, al, 0.0, 0.0, mu)?)
}

// I1

fn i1_quadrature(p: &Point) -> EvalResult {
    let (l, x, s) = (p.num("lambda"), p.num("x"), p.num("s"));
    semi(|t| Ok((-x * t).exp() * lower_inc_gamma(l, t * s)?), 0.0, Some(l), None)
}

fn i1_closed(p: &Point) -> EvalResult {
    let (l, x, s) = (p.num("lambda"), p.num("x"), p.num("s"));
    Ok(gamma(l) / x * (s / (x + s)).powf(l))
}

// I2

fn i2_measure(p: &Point) -> Result<Measure, EvalError> {
    match p.tag("mu") {
        "atom" => dirac(p.num("s")),
        _ => Ok(Measure::m_r(1.0)?),
    }
}

fn i2_domain(p: &Point) -> bool {
    below_lambda_plus_one(p) && (p.tag("mu") == "atom" || (p.num("alpha") > 0.0 && p.num("alpha") < p.num("lambda")))
}

fn i2_defining(p: &Point) -> EvalResult {
    let f = thorin(p.num("lambda"), p.num("alpha"), i2_measure(p)?)?;
    Ok(f.eval_with(p.num("x"), Representation::Defining)?)
}

fn i2_beta(p: &Point) -> EvalResult {
    let f = thorin(p.num("lambda"), p.num("alpha"), i2_measure(p)?)?;
    Ok(f.eval_with(p.num("x"), Representation::BetaForm)?)
}

fn i2_double(p: &Point) -> EvalResult {
    let (l, al, x) = (p.num("lambda"), p.num("alpha"), p.num("x"));
    let e = l + 1.0 - al;
    let inner = |s: f64| finite(|u| Ok(u.powf(l - 1.0) * (s + u).powf(-e)), 0.0, x, Some(l - 1.0), None);
    let outer = match p.tag("mu") {
        "atom" => inner(p.num("s"))?,
        _ => semi(inner, 0.0, (al < 1.0).then_some(al - 1.0), Some(e))?,
    };
    Ok(gamma(e) * outer)
}

// I3

fn i3_hyper(p: &Point) -> EvalResult {
    let f = thorin(p.num("lambda"), p.num("alpha"), dirac(p.num("s"))?)?;
    Ok(f.eval_with(p.num("x"), Representation::HyperForm)?)
}

fn i3_defining(p: &Point) -> EvalResult {
    let f = thorin(p.num("lambda"), p.num("alpha"), dirac(p.num("s"))?)?;
    Ok(f.eval_with(p.num("x"), Representation::Defining)?)
}

// I4

fn i4_pfaff(p: &Point) -> EvalResult {
    let (l, al, x, t) = (p.num("lambda"), p.num("alpha"), p.num("x"), p.num("s"));
    let k = gamma(l + 1.0 - al);
    Ok(k * x.powf(l) / l * hyp2f1(l, al, l + 1.0, x / (x + t))? * (t + x).powf(-l) * t.powf(al - 1.0))
}

fn i4_quadrature(p: &Point) -> EvalResult {
    let (l, al, x, t) = (p.num("lambda"), p.num("alpha"), p.num("x"), p.num("s"));
    let u = x / (x + t);
    let b = finite(|v| Ok(v.powf(l - 1.0) * (1.0 - v).powf(-al)), 0.0, u, Some(l - 1.0), None)?;
    Ok(gamma(l + 1.0 - al) * t.powf(al - 1.0) * b)
}

// I5

fn i5_z(p: &Point) -> f64 {
    let x = p.num("x");
    x / (1.0 + x)
}

fn i5_series(p: &Point) -> EvalResult {
    let (l, al, z) = (p.num("lambda"), p.num("alpha"), i5_z(p));
    let mut coef = 1.0;
    let mut sum = 0.0;
    for k in 0..100_000 {
        let kf = k as f64;
        let term = coef / (l + kf);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 2 || coef == 0.0 {
            return Ok(sum);
        }
        coef *= (al + kf) / (kf + 1.0) * z;
    }
    Err(EvalError::new("power series did not converge"))
}

fn i5_hyper(p: &Point) -> EvalResult {
    let (l, al, z) = (p.num("lambda"), p.num("alpha"), i5_z(p));
    Ok(hyp2f1(l, al, l + 1.0, z)? / l)
}

fn i5_integral(p: &Point) -> EvalResult {
    let (l, al, x, z) = (p.num("lambda"), p.num("alpha"), p.num("x"), i5_z(p));
    let v = finite(|u| Ok(u.powf(l - 1.0) * (1.0 + u).powf(al - l - 1.0)), 0.0, x, Some(l - 1.0), None)?;
    Ok(z.powf(-l) * v)
}

// I6, I7

/// (-1)^{n-1} (log(1+y) + Σ_{k=1}^{n-1} (-1)^k y^k/k).
fn log_closed_form(n: f64, y: f64) -> f64 {
    let n = n as i32;
    let mut sum = y.ln_1p();
    let mut pow = 1.0;
    for k in 1..n {
        pow *= -y;
        sum += pow / f64::from(k);
    }
    if n % 2 == 0 {
        -sum
    } else {
        sum
    }
}

fn n_ok(p: &Point) -> bool {
    base_ok(p) && p.num("n") >= 1.0
}

fn i6_closed(p: &Point) -> EvalResult {
    let (n, c, x) = (p.num("n"), p.num("c"), p.num("x"));
    Ok(c.powf(n - 1.0) * log_closed_form(n, x / c))
}

fn i6_defining(p: &Point) -> EvalResult {
    let (n, c, x) = (p.num("n"), p.num("c"), p.num("x"));
    Ok(thorin(n, n, dirac(c)?)?.eval_with(x, Representation::Defining)?)
}

fn i7_laplace(p: &Point) -> EvalResult {
    let (n, c, x) = (p.num("n"), p.num("c"), p.num("x"));
    let y = x / c;
    let v = semi(|t| Ok((-y * t).exp() * exp_integral_e(n, t)?), 0.0, None, None)?;
    Ok(y.powf(n) * v)
}

fn i7_closed(p: &Point) -> EvalResult {
    Ok(log_closed_form(p.num("n"), p.num("x") / p.num("c")))
}

// I8

const I8_R: f64 = 0.5;

fn i8_measure(p: &Point) -> Result<Measure, EvalError> {
    match p.tag("mu") {
        "atom" => dirac(p.num("s")),
        _ => Ok(Measure::power_exp(I8_R, 1.0)?),
    }
}

fn i8_log_form(p: &Point) -> EvalResult {
    let x = p.num("x");
    match p.tag("mu") {
        "atom" => Ok((x / p.num("s")).ln_1p()),
        _ => {
            let norm = gamma(I8_R);
            semi(|t| Ok((x / t).ln_1p() * t.powf(I8_R - 1.0) * (-t).exp() / norm), 0.0, Some(I8_R - 1.0), None)
        }
    }
}

fn i8_defining(p: &Point) -> EvalResult {
    Ok(thorin(1.0, 1.0, i8_measure(p)?)?.eval_with(p.num("x"), Representation::Defining)?)
}

// I9

fn i9_domain(p: &Point) -> bool {
    let al = p.num("alpha");
    base_ok(p) && al > 0.0 && al < 1.0
}

fn i9_derivative(p: &Point) -> EvalResult {
    let (a, al, s, x) = (p.num("a"), p.num("alpha"), p.num("s"), p.num("x"));
    let k = gamma(2.0 - al) * s.powf(al - 1.0);
    let slot = ErrorSlot::<EvalError>::new();
    let f = |y: f64| a * y + k * y / (y + s) * slot.value(hyp2f1(1.0, al, 2.0, y / (y + s)).map_err(EvalError::from));
    let d = central_derivative(&f, x, 1e-3);
    slot.finish::<f64, EvalError>(Ok(d))
}

fn i9_stieltjes(p: &Point) -> EvalResult {
    let (a, al, s, x) = (p.num("a"), p.num("alpha"), p.num("s"), p.num("x"));
    Ok(a + gamma(2.0 - al) * dirac(s)?.stieltjes_real(2.0 - al, x)?)
}

// I10

fn i10_domain(p: &Point) -> bool {
    base_ok(p) && (p.tag("form") != "roots" || (is_int(p.num("p")) && is_int(p.num("q")) && p.num("p") < p.num("q")))
}

fn i10_lhs(p: &Point) -> EvalResult {
    let z = p.num("z");
    match p.tag("form") {
        "roots" => {
            let (pp, q) = (p.num("p"), p.num("q"));
            let root = z.powf(1.0 / q);
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..q as usize {
                let th = 2.0 * PI * k as f64 / q;
                let w = Complex64::from_polar(root, th);
                sum += Complex64::from_polar(1.0, -th * pp) * -(Complex64::new(1.0, 0.0) - w).ln();
            }
            if sum.im.abs() > IMAG_RESIDUE {
                return Err(EvalError::new(format!("imaginary residue {:e}", sum.im)));
            }
            Ok(sum.re)
        }
        _ => Ok(inc_beta(p.num("n") + 0.5, 0.0, z)?),
    }
}

fn i10_rhs(p: &Point) -> EvalResult {
    let z = p.num("z");
    match p.tag("form") {
        "roots" => {
            let (pp, q) = (p.num("p"), p.num("q"));
            let mut sum = 0.0;
            let mut zk = 1.0;
            for k in 0..10_000 {
                let term = zk / (pp + k as f64 * q);
                sum += term;
                if term <= 1e-18 * sum {
                    return Ok(q * z.powf(pp / q) * sum);
                }
                zk *= z;
            }
            Err(EvalError::new("power series did not converge"))
        }
        _ => {
            let r = z.sqrt();
            let mut v = 2.0 * r.atanh();
            for k in 0..p.num("n") as i32 {
                v -= 2.0 * r.powi(2 * k + 1) / f64::from(2 * k + 1);
            }
            Ok(v)
        }
    }
}

// I11

fn i11_domain(p: &Point) -> bool {
    n_ok(p) && p.num("n") + p.num("beta") < p.num("lambda") + 1.0
}

fn i11_defining(p: &Point) -> EvalResult {
    let (l, be, n, c, x) = (p.num("lambda"), p.num("beta"), p.num("n"), p.num("c"), p.num("x"));
    semi(|t| Ok(lower_inc_gamma(l, x * t)? * t.powf(-be - n) * (-c * t).exp()), 0.0, Some(l - be - n), None)
}

fn i11_fractional(p: &Point) -> EvalResult {
    let (l, be, n, c, x) = (p.num("lambda"), p.num("beta"), p.num("n"), p.num("c"), p.num("x"));
    let xi = dirac(c)?.fractional_integral(n as usize)?;
    let v = semi(
        |t| Ok(inc_beta(l, 1.0 - be, x / (x + t))? * xi.eval(t)? * t.powf(be - 1.0)),
        c,
        Some(n - 1.0),
        Some(l + 2.0 - be - n),
    )?;
    Ok(gamma(l - be + 1.0) * v)
}

// I12

fn i12_closed(p: &Point) -> EvalResult {
    Ok(lomax_cdf(p.num("lambda"), p.num("x"))?)
}

fn i12_quadrature(p: &Point) -> EvalResult {
    Ok(lomax_cdf_quadrature(p.num("lambda"), p.num("x"))?)
}

// I13, I14, I15

fn i13_defining(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    semi(|t| Ok(lower_inc_gamma(l, x * t)? * exp_integral_e(pp, t)?), 0.0, Some(l + (pp - 1.0).min(0.0)), None)
}

fn ep_beta_form(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    Ok(gamma(l) * x.powf(-pp) * inc_beta(l + pp, -pp, x / (x + 1.0))?)
}

fn i13_tail(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    let v = semi(|s| Ok((x + s).powf(-l) * s.powf(-pp - 1.0)), 1.0, None, Some(l + pp + 1.0))?;
    Ok(gamma(l) * x.powf(l) * v)
}

fn i14_u_integral(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    let inc_beta_quad = |v: f64| -> EvalResult {
        if v <= 0.0 {
            return Ok(0.0);
        }
        finite(|t| Ok(t.powf(l - 1.0) * (1.0 - t).powf(pp - 1.0)), 0.0, v, Some(l - 1.0), None)
    };
    let v = finite(
        |u| {
            let w = x * (1.0 - u);
            Ok(inc_beta_quad(w / (1.0 + w))? * u.powf(pp - 1.0))
        },
        0.0,
        1.0,
        Some(pp - 1.0),
        Some(l),
    )?;
    Ok(gamma(l + pp) / gamma(pp) * v)
}

fn i15_domain(p: &Point) -> bool {
    base_ok(p) && p.num("p") < p.num("lambda") + 1.0
}

fn i15_s_integral(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    let v = semi(
        |s| Ok((s - 1.0).powf(pp - 1.0) * (x + s).powf(-l) / (s * s)),
        1.0,
        Some(pp - 1.0),
        Some(l + 3.0 - pp),
    )?;
    Ok(gamma(l) * x.powf(l) / gamma(pp) * v)
}

fn i15_prefactor(l: f64, pp: f64, x: f64) -> f64 {
    gamma(l - pp + 2.0) / (l * (l + 1.0)) * x.powf(l)
}

fn i15_negative_argument(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    Ok(i15_prefactor(l, pp, x) * hyp2f1(l, l - pp + 2.0, l + 2.0, -x)?)
}

fn i15_pfaff(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    let u = x / (x + 1.0);
    Ok(i15_prefactor(l, pp, x) * (u / x).powf(l) * hyp2f1(l, pp, l + 2.0, u)?)
}

fn i15_defining(p: &Point) -> EvalResult {
    let (l, pp, x) = (p.num("lambda"), p.num("p"), p.num("x"));
    semi(
        |t| Ok(lower_inc_gamma(l, x * t)? * t.powf(1.0 - pp) * exp_integral_e(pp, t)?),
        0.0,
        Some(l + (1.0 - pp).min(0.0)),
        None,
    )
}

// I16, I17

fn i16_row(p: &Point) -> Result<(f64, f64), EvalError> {
    let f = thorin(p.num("lambda"), p.num("alpha"), dirac(p.num("s"))?)?;
    let r = f.characterization_check(&[p.num("x")])?;
    Ok((r.rows[0].lhs, r.rows[0].rhs))
}

fn i16_derivative(p: &Point) -> EvalResult {
    Ok(i16_row(p)?.0)
}

fn i16_stieltjes(p: &Point) -> EvalResult {
    Ok(i16_row(p)?.1)
}

const I17_A: f64 = 0.5;
const I17_B: f64 = 1.0;

fn i17_function(p: &Point) -> Result<ThorinBernsteinFn, EvalError> {
    Ok(ThorinBernsteinFn::new(p.num("lambda"), p.num("alpha"), I17_A, I17_B, dirac(p.num("s"))?)?)
}

fn i17_laplace(p: &Point) -> EvalResult {
    let (al, x) = (p.num("alpha"), p.num("x"));
    let l = i17_function(p)?.laplace_transform(x)?;
    Ok(x.powf(al) * l - I17_B * x.powf(al - 1.0))
}

fn i17_double(p: &Point) -> EvalResult {
    Ok(i17_function(p)?.laplace_of_thorin(p.num("x"))?.double_integral)
}

// I18

fn i18_domain(p: &Point) -> bool {
    n_ok(p) && p.num("alpha") >= 0.0
}

/// (-1)^m φ^{(m)}(t) for φ(z) = z^{-α} e^{-cz}, by the trapezoid rule on
/// the Cauchy integral over |z - t| = t/2.
fn i18_cauchy(p: &Point) -> EvalResult {
    let (al, n, c, t) = (p.num("alpha"), p.num("n"), p.num("c"), p.num("t"));
    let m = n as i32 - 1;
    const NODES: usize = 128;
    let r = 0.5 * t;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..NODES {
        let th = 2.0 * PI * j as f64 / NODES as f64;
        let z = t + Complex64::from_polar(r, th);
        sum += z.powf(-al) * (-c * z).exp() * Complex64::from_polar(1.0, -th * f64::from(m));
    }
    let fact: f64 = (1..=m).map(f64::from).product();
    let d = sum.re / NODES as f64 * fact / r.powi(m);
    Ok(if m % 2 == 0 { d } else { -d })
}

fn i18_sigma_n(p: &Point) -> EvalResult {
    let (al, n, c, t) = (p.num("alpha"), p.num("n"), p.num("c"), p.num("t"));
    let sigma = build_sigma_n(&dirac(c)?, al, n as u32)?;
    Ok(t.powf(-al) * sigma.laplace_real(t)?)
}

// I19

fn i19_measure(p: &Point) -> Result<Measure, EvalError> {
    Ok(match p.tag("mu") {
        "atom" => Measure::dirac(p.num("s"))?,
        "power_exp" => Measure::power_exp(1.5, 1.0)?,
        "truncated_unit" => Measure::truncated_unit(0.5, 2.0)?,
        _ => Measure::rational_square(),
    })
}

fn i19_check(p: &Point) -> Result<(f64, f64), EvalError> {
    let be = p.num("beta");
    let g = Kernel::new(move |t: f64| t.powf(be - 1.0) * (-t).exp()).origin(be - 1.0).decay(Decay::Exponential);
    let c = fubini_check(&g, &i19_measure(p)?)?;
    Ok((c.lhs, c.rhs))
}

fn i19_laplace_side(p: &Point) -> EvalResult {
    Ok(i19_check(p)?.0)
}

fn i19_measure_side(p: &Point) -> EvalResult {
    Ok(i19_check(p)?.1)
}

// I20

const I20_R: f64 = 0.3;

fn i20_pair(p: &Point) -> Result<(Measure, Measure), EvalError> {
    Ok(match p.tag("pair") {
        "atoms" => (dirac(p.num("s"))?, dirac(p.num("c"))?),
        "atom_m_r" => (dirac(p.num("s"))?, Measure::m_r(I20_R)?),
        _ => (Measure::power_exp(1.0, 1.0)?, Measure::power_exp(1.0, 1.0)?),
    })
}

fn i20_domain(p: &Point) -> bool {
    base_ok(p) && (p.tag("pair") != "atom_m_r" || p.num("beta") > I20_R)
}

fn i20_product(p: &Point) -> EvalResult {
    let be = p.num("beta");
    let (mu, nu) = i20_pair(p)?;
    let (left, decay) = match p.tag("pair") {
        "atoms" => (be - 1.0, None),
        "atom_m_r" => (be - 1.0 - I20_R, None),
        _ => (be - 1.0, Some(3.0 - be)),
    };
    semi(|t| Ok(t.powf(be - 1.0) * mu.laplace_real(t)? * nu.laplace_real(t)?), 0.0, Some(left), decay)
}

fn i20_convolution(p: &Point) -> EvalResult {
    let be = p.num("beta");
    let (mu, nu) = i20_pair(p)?;
    let conv = mu.convolve(&nu)?;
    let v = conv.integrate(&Kernel::new(|s: f64| s.powf(-be)).origin(-be).decay(Decay::Power(be)))?;
    Ok(gamma(be) * v)
}

// I21, N1

fn i21_scaled_sup(p: &Point) -> EvalResult {
    let k = p.num("k");
    let v = sup_h_k(k as u32);
    if !(v > 0.0) {
        return Err(EvalError::new(format!("supremum of h_{k} is not positive: {v}")));
    }
    Ok(k * v)
}

fn i21_bound(_: &Point) -> EvalResult {
    Ok(E)
}

fn n1_max_imag(p: &Point) -> EvalResult {
    let n = p.num("n") as usize;
    let pts = pick_grid(0.5, 8.0, 16, 24);
    let slot = ErrorSlot::<EvalError>::new();
    let report = stieltjes_violation_probe(
        |z| match counterexample_transform(n, z) {
            Ok(v) => v,
            Err(e) => Complex64::new(slot.value(Err(e.into())), 0.0),
        },
        &pts,
    );
    slot.finish::<(), EvalError>(Ok(()))?;
    let closed = counterexample_transform_closed(n, report.witness)?;
    let quad = counterexample_transform(n, report.witness)?;
    if (closed - quad).norm() > 1e-10 * closed.norm() {
        return Err(EvalError::new(format!("witness {} disagrees with the closed form", report.witness)));
    }
    Ok(report.max_im)
}

fn n1_threshold(_: &Point) -> EvalResult {
    Ok(PICK_THRESHOLD)
}

fn side(name: &'static str, paths: &'static [&'static str], eval: fn(&Point) -> EvalResult) -> Side {
    Side { name, paths, eval }
}

/// Every identity, in report order.
pub fn registry() -> Vec<IdentityCase> {
    let thorin_grid = || vec![Subgrid::new(vec![lambda(), alpha(), Axis::nums("s", &S), x()])];
    vec![
        IdentityCase {
            id: "I1",
            description: "Laplace transform of s ↦ γ(λ, ts) in t",
            anchor: "∫_0^∞ e^{-xt} γ(λ,ts) dt = Γ(λ)/x · s^λ/(x+s)^λ",
            grid: vec![Subgrid::new(vec![lambda(), x(), Axis::nums("s", &S)])],
            domain: base_ok,
            sides: vec![
                side("quadrature", &["specfun::lower_inc_gamma"], i1_quadrature),
                side("closed_form", &["specfun::gamma"], i1_closed),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I2",
            description: "Defining integral, double integral and incomplete beta form of a Thorin-Bernstein function",
            anchor: "Γ(λ+1-α) ∫ B(λ,1-α; x/(x+s)) s^{α-1} dμ(s)",
            grid: vec![
                Subgrid::new(vec![Axis::tags("mu", &["atom"]), lambda(), alpha(), Axis::nums("s", &S), x()]),
                Subgrid::new(vec![Axis::tags("mu", &["m1"]), lambda(), alpha(), x()]),
            ],
            domain: i2_domain,
            sides: vec![
                side("defining", &["classes::defining", "specfun::lower_inc_gamma", "measures::laplace"], i2_defining),
                side("double_integral", &["verify::nested_quadrature"], i2_double),
                side("beta_form", &["classes::beta_form", "specfun::inc_beta"], i2_beta),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I3",
            description: "Hypergeometric representation for a point mass against the defining integral",
            anchor: "Γ(λ+1-α) x^λ/λ · ₂F₁(α,1; λ+1; -x/s) (x+s)^{α-λ}/s",
            grid: thorin_grid(),
            domain: below_lambda_plus_one,
            sides: vec![
                side("hyper_form", &["classes::hyper_form", "specfun::hyp2f1"], i3_hyper),
                side("defining", &["classes::defining", "specfun::lower_inc_gamma", "measures::laplace"], i3_defining),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I4",
            description: "Pointwise agreement of the Pfaff-transformed and incomplete beta integrands",
            anchor: "Γ(λ+1-α) B(λ,1-α; x/(x+t)) t^{α-1}",
            grid: thorin_grid(),
            domain: below_lambda_plus_one,
            sides: vec![
                side("pfaff_hypergeometric", &["specfun::hyp2f1"], i4_pfaff),
                side("beta_quadrature", &["verify::quadrature"], i4_quadrature),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I5",
            description: "Series, hypergeometric and integral forms with z = x/(1+x)",
            anchor: "Σ (α)_k z^k/(k!(λ+k)) = z^{-λ} ∫_0^{z/(1-z)} u^{λ-1}(1+u)^{α-λ-1} du",
            grid: vec![Subgrid::new(vec![lambda(), alpha(), x()])],
            domain: base_ok,
            sides: vec![
                side("series", &["verify::power_series"], i5_series),
                side("hypergeometric", &["specfun::hyp2f1"], i5_hyper),
                side("integral", &["verify::quadrature"], i5_integral),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I6",
            description: "Logarithmic closed form of the order (n, n) function with σ = ε_c",
            anchor: "(-1)^{n-1} (log((x+s)/s) + Σ_{k=1}^{n-1} (-1)^k x^k/(k s^k)) s^{n-1}",
            grid: vec![Subgrid::new(vec![Axis::nums("n", &ORDERS), Axis::nums("c", &S), x()])],
            domain: n_ok,
            sides: vec![
                side("closed_form", &["verify::log_closed_form"], i6_closed),
                side("defining", &["classes::defining", "specfun::lower_inc_gamma", "measures::laplace"], i6_defining),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I7",
            description: "Laplace transform of E_n against the logarithmic closed form",
            anchor: "g_{c,n}(x) = x^n/c^n ∫_0^∞ e^{-xt/c} E_n(t) dt",
            grid: vec![Subgrid::new(vec![Axis::nums("n", &ORDERS), Axis::nums("c", &S), x()])],
            domain: n_ok,
            sides: vec![
                side("laplace_of_e_n", &["specfun::exp_integral_e"], i7_laplace),
                side("closed_form", &["verify::log_closed_form"], i7_closed),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I8",
            description: "Logarithmic representation for λ = α = 1",
            anchor: "f(x) = ax + b + ∫ log((x+t)/t) dμ(t)",
            grid: vec![
                Subgrid::new(vec![Axis::tags("mu", &["atom"]), Axis::nums("s", &S), x()]),
                Subgrid::new(vec![Axis::tags("mu", &["power_exp"]), x()]),
            ],
            domain: base_ok,
            sides: vec![
                side("log_form", &["verify::log_form"], i8_log_form),
                side("defining", &["classes::defining", "specfun::lower_inc_gamma", "measures::laplace"], i8_defining),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I9",
            description: "Derivative for λ = 1, 0 < α < 1 as a Stieltjes transform",
            anchor: "f'(x) = a + Γ(2-α) ∫ dμ(s)/(x+s)^{2-α}",
            grid: vec![Subgrid::new(vec![
                Axis::nums("a", &[0.5]),
                Axis::nums("alpha", &[-0.5, 0.0, 0.5, 1.0, 1.9]),
                Axis::nums("s", &S),
                x(),
            ])],
            domain: i9_domain,
            sides: vec![
                side("difference_of_hypergeometric", &["specfun::hyp2f1"], i9_derivative),
                side("stieltjes", &["measures::stieltjes"], i9_stieltjes),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I10",
            description: "Root-of-unity filter of -log(1-w) and the half-integer arctanh form",
            anchor: "Σ_{k=0}^{q-1} e^{-2πikp/q} g(z^{1/q} e^{2πik/q}) = q z^{p/q} Σ_k z^k/(p+kq)",
            grid: vec![
                Subgrid::new(vec![
                    Axis::tags("form", &["roots"]),
                    Axis::nums("p", &[1.0, 2.0]),
                    Axis::nums("q", &[2.0, 3.0]),
                    Axis::nums("z", &Z),
                ]),
                Subgrid::new(vec![Axis::tags("form", &["tanh"]), Axis::nums("n", &[0.0, 1.0, 2.0]), Axis::nums("z", &Z)]),
            ],
            domain: i10_domain,
            sides: vec![
                side("root_sum_or_beta", &["verify::root_sum", "specfun::inc_beta"], i10_lhs),
                side("series_or_atanh", &["verify::power_series", "verify::atanh"], i10_rhs),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I11",
            description: "Fractional-integral form with φ(t) = t^{-β} L(ξ_n)(t), μ = ε_c",
            anchor: "Γ(λ-β+1) ∫ B(λ,1-β; x/(x+t)) ξ_n(t) t^{β-1} dt",
            grid: vec![Subgrid::new(vec![
                lambda(),
                Axis::nums("beta", &BETA),
                Axis::nums("n", &[1.0, 2.0]),
                Axis::nums("c", &S),
                x(),
            ])],
            domain: i11_domain,
            sides: vec![
                side("defining", &["specfun::lower_inc_gamma"], i11_defining),
                side("fractional_beta_form", &["specfun::inc_beta", "measures::fractional_integral"], i11_fractional),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I12",
            description: "Lomax distribution function, closed form against quadrature",
            anchor: "F_λ(t) = 1 - λ t^λ e^t Γ(-λ,t)",
            grid: vec![Subgrid::new(vec![Axis::nums("lambda", &[0.5, 1.0, 2.5, 2.0 - 1e-9]), x()])],
            domain: base_ok,
            sides: vec![
                side("closed_form", &["classes::lomax_cdf", "specfun::upper_inc_gamma"], i12_closed),
                side("quadrature", &["classes::lomax_cdf_quadrature", "specfun::lower_inc_gamma"], i12_quadrature),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I13",
            description: "Lower incomplete gamma against E_p",
            anchor: "∫ γ(λ,xt) E_p(t) dt = Γ(λ)/x^p B(λ+p,-p; x/(x+1))",
            grid: vec![Subgrid::new(vec![lambda(), Axis::nums("p", &P), x()])],
            domain: base_ok,
            sides: vec![
                side("defining", &["specfun::lower_inc_gamma", "specfun::exp_integral_e"], i13_defining),
                side("beta_form", &["specfun::inc_beta"], ep_beta_form),
                side("tail_integral", &["verify::quadrature"], i13_tail),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I14",
            description: "Mixture of B(λ,p; ·) against the E_p beta form",
            anchor: "Γ(λ+p)/Γ(p) ∫_0^1 B(λ,p; x(1-u)/(1+x(1-u))) u^{p-1} du",
            grid: vec![Subgrid::new(vec![lambda(), Axis::nums("p", &P), x()])],
            domain: base_ok,
            sides: vec![
                side("u_integral", &["verify::nested_quadrature"], i14_u_integral),
                side("beta_form", &["specfun::inc_beta"], ep_beta_form),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I15",
            description: "C_p as an integral over h_p, two hypergeometric forms and the defining integral",
            anchor: "Γ(λ-p+2)/(λ(λ+1)) (x/(x+1))^λ x^λ ₂F₁(λ, p; λ+2; x/(x+1))",
            grid: vec![Subgrid::new(vec![lambda(), Axis::nums("p", &P), x()])],
            domain: i15_domain,
            sides: vec![
                side("s_integral", &["verify::quadrature"], i15_s_integral),
                side("negative_argument", &["specfun::hyp2f1"], i15_negative_argument),
                side("pfaff", &["specfun::hyp2f1"], i15_pfaff),
                side("defining", &["specfun::lower_inc_gamma", "specfun::exp_integral_e"], i15_defining),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I16",
            description: "x^{1-λ} f'(x) is a Stieltjes function of order λ+1-α",
            anchor: "x^{1-λ} f'(x) = λa + Γ(λ+1-α) ∫ dσ(s)/(x+s)^{λ+1-α}",
            grid: thorin_grid(),
            domain: below_lambda_plus_one,
            sides: vec![
                side("difference_quotient", &["classes::beta_form", "specfun::inc_beta"], i16_derivative),
                side("stieltjes", &["classes::derivative_stieltjes", "measures::stieltjes"], i16_stieltjes),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I17",
            description: "Laplace transform of a Thorin-Bernstein function (a = 0.5, b = 1) as a double integral",
            anchor: "x^α L(f)(x) - f(0+) x^{α-1}",
            grid: thorin_grid(),
            domain: below_lambda_plus_one,
            sides: vec![
                side("laplace_transform", &["classes::laplace_transform", "classes::beta_form"], i17_laplace),
                side("double_integral", &["classes::weighted_laplace"], i17_double),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I18",
            description: "Derivatives of φ(t) = t^{-α} e^{-ct} through σ_n",
            anchor: "(-1)^{n-1} φ^{(n-1)}(t) = t^{-α} L(σ_n)(t)",
            grid: vec![Subgrid::new(vec![
                Axis::nums("alpha", &[0.0, 0.5, 1.0]),
                Axis::nums("n", &ORDERS),
                Axis::nums("c", &S),
                Axis::nums("t", &X),
            ])],
            domain: i18_domain,
            sides: vec![
                side("cauchy_integral", &["verify::cauchy_derivative"], i18_cauchy),
                side("sigma_n", &["classes::build_sigma_n", "measures::convolve", "measures::laplace"], i18_sigma_n),
            ],
            rel_tol: NESTED,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I19",
            description: "Exchange of integration order for g(t) = t^{β-1} e^{-t}",
            anchor: "∫ g(t) L(μ)(t) dt = ∫ L(g)(s) dμ(s)",
            grid: vec![
                Subgrid::new(vec![Axis::tags("mu", &["atom"]), Axis::nums("s", &S), Axis::nums("beta", &BETA)]),
                Subgrid::new(vec![
                    Axis::tags("mu", &["power_exp", "truncated_unit", "rational_square"]),
                    Axis::nums("beta", &BETA),
                ]),
            ],
            domain: base_ok,
            sides: vec![
                side("laplace_side", &["measures::laplace"], i19_laplace_side),
                side("measure_side", &["measures::integrate"], i19_measure_side),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I20",
            description: "Product of Laplace transforms against the convolution",
            anchor: "∫ t^{β-1} L(μ)(t) L(ν)(t) dt = Γ(β) ∫ d(μ∗ν)(s)/s^β",
            grid: vec![
                Subgrid::new(vec![
                    Axis::tags("pair", &["atoms"]),
                    Axis::nums("s", &S),
                    Axis::nums("c", &S),
                    Axis::nums("beta", &BETA),
                ]),
                Subgrid::new(vec![Axis::tags("pair", &["atom_m_r"]), Axis::nums("s", &S), Axis::nums("beta", &BETA)]),
                Subgrid::new(vec![Axis::tags("pair", &["power_exp"]), Axis::nums("beta", &BETA)]),
            ],
            domain: i20_domain,
            sides: vec![
                side("product", &["measures::laplace"], i20_product),
                side("convolution", &["measures::convolve", "measures::integrate"], i20_convolution),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Equal,
        },
        IdentityCase {
            id: "I21",
            description: "k sup h_k ≤ e",
            anchor: "sup_s h_k(s) ≤ e/k",
            grid: vec![Subgrid::new(vec![Axis::nums("k", &(1..=100).map(f64::from).collect::<Vec<_>>())])],
            domain: base_ok,
            sides: vec![
                side("scaled_supremum", &["classes::sup_h_k"], i21_scaled_sup),
                side("bound", &["verify::constant"], i21_bound),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::AtMost,
        },
        IdentityCase {
            id: "N1",
            description: "The Laplace transform of (n-1)(1-t)^{n-2} on (0,1) violates the Stieltjes sign condition",
            anchor: "max Im g(z) over Im z > 0 exceeds 1e-6",
            grid: vec![Subgrid::new(vec![Axis::nums("n", &[3.0])])],
            domain: |p| base_ok(p) && p.num("n") >= 2.0,
            sides: vec![
                side("pick_probe", &["classes::stieltjes_violation_probe", "classes::counterexample_transform"], n1_max_imag),
                side("threshold", &["verify::constant"], n1_threshold),
            ],
            rel_tol: SINGLE,
            comparison: Comparison::Exceeds,
        },
    ]
}
