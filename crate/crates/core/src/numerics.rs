//! Adaptive quadrature, finite-difference probes and small numerical helpers.
//!
//! The integrators are globally adaptive 21-point Gauss-Kronrod schemes with
//! interval bisection driven by a max-error priority queue. Known algebraic
//! endpoint behaviour is removed by a power substitution before the adaptive
//! scheme runs, and `[a + 1, ∞)` is mapped onto `(0, 1]` with `t = a + 1/v`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid quadrature settings: {0}")]
    InvalidSpec(String),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand returned a non-finite value at t = {at}")]
    NonFinite { at: f64 },
    #[error("no convergence after {subdivisions} subdivisions (partial value {partial:e}, error estimate {estimate:e})")]
    NonConvergence { partial: f64, estimate: f64, subdivisions: usize },
    #[error("integrand does not decay at infinity (|t f(t)| = {tail:e} at t = {at:e})")]
    NonDecay { at: f64, tail: f64 },
}

/// Tolerances and endpoint hints for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Exponent `s > -1` such that the integrand behaves like `(t - a)^s` at
    /// the left endpoint.
    pub endpoint_singularity_exponent: Option<f64>,
    /// Finite intervals: exponent `s > -1` of `(b - t)^s` at the right
    /// endpoint. Semi-infinite intervals: decay power `q > 1` such that the
    /// integrand behaves like `t^{-q}` at infinity.
    pub right_endpoint_exponent: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-10,
            max_subdivisions: 4096,
            endpoint_singularity_exponent: None,
            right_endpoint_exponent: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_left_exponent(mut self, s: f64) -> Self {
        self.endpoint_singularity_exponent = Some(s);
        self
    }

    pub fn with_right_exponent(mut self, s: f64) -> Self {
        self.right_endpoint_exponent = Some(s);
        self
    }

    /// Left exponent, dropped when it is non-negative (nothing to remove).
    pub fn with_left_exponent_opt(mut self, s: Option<f64>) -> Self {
        self.endpoint_singularity_exponent = s.filter(|&v| v < 0.0);
        self
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.abs_tol >= 0.0) {
            return Err(QuadError::InvalidSpec(format!("abs_tol {} < 0", self.abs_tol)));
        }
        if !(1e-14..=1e-2).contains(&self.rel_tol) {
            return Err(QuadError::InvalidSpec(format!(
                "rel_tol {} outside [1e-14, 1e-2]",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 || self.max_subdivisions > 1_000_000 {
            return Err(QuadError::InvalidSpec(format!(
                "max_subdivisions {} outside [1, 1e6]",
                self.max_subdivisions
            )));
        }
        if let Some(s) = self.endpoint_singularity_exponent {
            if !(s > -1.0) || !s.is_finite() {
                return Err(QuadError::InvalidSpec(format!("endpoint exponent {s} <= -1")));
            }
        }
        if let Some(s) = self.right_endpoint_exponent {
            if !s.is_finite() {
                return Err(QuadError::InvalidSpec(format!("right exponent {s} not finite")));
            }
        }
        Ok(())
    }
}

/// Value of an integral with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One application of the 21-point Kronrod rule with its embedded 10-point
/// Gauss rule: returns `(integral, error estimate)`.
pub fn gauss_kronrod_21<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    gk21(f, a, b).map(|(v, e, _)| (v, e))
}

/// Kronrod estimate, error estimate and ∫|f| over the segment.
fn gk21<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64, f64), QuadError>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> Result<f64, QuadError> {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { at: t })
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((result, err, res_abs))
}

const ROUNDOFF: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive Gauss-Kronrod on `[a, b]` with no endpoint treatment.
fn adaptive<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral, QuadError>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if a == b {
        return Ok(Integral { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    let (v, e, m) = gk21(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e, abs: m });
    let mut total = v;
    let mut total_err = e;
    // ∫|f|; errors below ~100 ε ∫|f| are roundoff and cannot be reduced.
    let mut total_abs = m;
    // Segments too narrow to bisect further; their error is frozen.
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let mut splits = 0usize;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs()).max(ROUNDOFF * total_abs);
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            // Everything frozen; accept if the remaining error is at roundoff level.
            break;
        };
        if splits >= spec.max_subdivisions {
            heap.push(worst);
            return Err(QuadError::NonConvergence {
                partial: total,
                estimate: total_err,
                subdivisions: splits,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let width = (worst.b - worst.a).abs();
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if width <= 1e3 * f64::EPSILON * scale || mid == worst.a || mid == worst.b {
            frozen_value += worst.value;
            frozen_err += worst.error;
            continue;
        }
        let (v1, e1, m1) = gk21(f, worst.a, mid)?;
        let (v2, e2, m2) = gk21(f, mid, worst.b)?;
        splits += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_abs += m1 + m2 - worst.abs;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1, abs: m1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2, abs: m2 });
    }

    // Re-sum to avoid drift from the running updates.
    let mut value = frozen_value;
    let mut err = frozen_err;
    let mut count = 0usize;
    for s in heap.iter() {
        value += s.value;
        err += s.error;
        count += 1;
    }
    let tol = spec.abs_tol.max(spec.rel_tol * value.abs()).max(ROUNDOFF * total_abs);
    if err > tol && frozen_err > 0.5 * err && frozen_err > 1e3 * f64::EPSILON * value.abs() {
        return Err(QuadError::NonConvergence { partial: value, estimate: err, subdivisions: splits });
    }
    Ok(Integral { value, abs_error: err, intervals: count })
}

/// Integrate `g` over `[0, w]` where the original variable is recovered as
/// `t = w^{1/(1+s)}`, removing an `x^s` factor at the origin.
fn power_substituted<F>(
    f: &F,
    origin: f64,
    direction: f64,
    length: f64,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, QuadError>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let p = 1.0 / (1.0 + s);
    let upper = length.powf(1.0 + s);
    let g = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let mut t = origin + direction * w.powf(p);
        if t == origin {
            t = if direction > 0.0 { origin.next_up() } else { origin.next_down() };
        }
        // the rounded offset, so the x^s factor cancels against what f saw
        let d = (t - origin).abs();
        f(t) * d.powf(-s) * p
    };
    adaptive(&g, 0.0, upper, spec)
}

/// `∫_a^b f(t) dt` for `a < b`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral, QuadError>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        if a == b {
            return Ok(Integral { value: 0.0, abs_error: 0.0, intervals: 0 });
        }
        return Err(QuadError::InvalidInterval { a, b });
    }
    let left = spec.endpoint_singularity_exponent.filter(|&s| s != 0.0);
    let right = spec.right_endpoint_exponent.filter(|&s| s != 0.0 && s > -1.0);
    match (left, right) {
        (None, None) => adaptive(&f, a, b, spec),
        (Some(s), None) => power_substituted(&f, a, 1.0, b - a, s, spec),
        (None, Some(r)) => power_substituted(&f, b, -1.0, b - a, r, spec),
        (Some(s), Some(r)) => {
            let mid = 0.5 * (a + b);
            let i1 = power_substituted(&f, a, 1.0, mid - a, s, spec)?;
            let i2 = power_substituted(&f, b, -1.0, b - mid, r, spec)?;
            Ok(Integral {
                value: i1.value + i2.value,
                abs_error: i1.abs_error + i2.abs_error,
                intervals: i1.intervals + i2.intervals,
            })
        }
    }
}

/// `∫_a^∞ f(t) dt` as `∫_a^{a+1} f + ∫_0^1 f(a + 1/v) v^{-2} dv`.
pub fn integrate_semi_infinite<F>(f: F, a: f64, spec: &QuadratureSpec) -> Result<Integral, QuadError>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !a.is_finite() {
        return Err(QuadError::InvalidInterval { a, b: f64::INFINITY });
    }
    let probe = a.abs().max(1.0) * 1e12;
    let far = f(a + probe);
    let near_spec = QuadratureSpec { right_endpoint_exponent: None, ..*spec };
    let near = integrate_finite(&f, a, a + 1.0, &near_spec)?;
    let g = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let y = f(a + 1.0 / v);
        if y == 0.0 {
            0.0
        } else {
            y / (v * v)
        }
    };
    // Decay t^{-q} becomes v^{q-2} at the origin of the mapped interval.
    let mapped = spec
        .right_endpoint_exponent
        .map(|q| q - 2.0)
        .filter(|&r| r < 0.0 && r > -1.0);
    let tail_spec = QuadratureSpec {
        endpoint_singularity_exponent: mapped,
        right_endpoint_exponent: None,
        ..*spec
    };
    let rest = match integrate_finite(g, 0.0, 1.0, &tail_spec) {
        // f finite but f/v^2 overflowing means f does not decay
        Err(QuadError::NonFinite { at }) if at > 0.0 && f(a + 1.0 / at).is_finite() => {
            return Err(QuadError::NonDecay { at: a + 1.0 / at, tail: (far * probe).abs() });
        }
        r => r?,
    };
    let result = Integral {
        value: near.value + rest.value,
        abs_error: near.abs_error + rest.abs_error,
        intervals: near.intervals + rest.intervals,
    };
    let tail = (far * probe).abs();
    let declared = spec.right_endpoint_exponent.is_some();
    if !far.is_finite() || (!declared && tail > 1e-2 * (result.value.abs() + spec.abs_tol)) {
        return Err(QuadError::NonDecay { at: a + probe, tail });
    }
    Ok(result)
}

/// Complex integrand over a finite interval: real and imaginary parts separately.
pub fn integrate_finite_complex<F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    let re = integrate_finite(|t| f(t).re, a, b, spec)?;
    let im = integrate_finite(|t| f(t).im, a, b, spec)?;
    Ok(Complex64::new(re.value, im.value))
}

pub fn integrate_semi_infinite_complex<F>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    let re = integrate_semi_infinite(|t| f(t).re, a, spec)?;
    let im = integrate_semi_infinite(|t| f(t).im, a, spec)?;
    Ok(Complex64::new(re.value, im.value))
}

/// Dispatch on an optional upper limit.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral, QuadError>
where
    F: Fn(f64) -> f64,
{
    if b.is_infinite() {
        integrate_semi_infinite(f, a, spec)
    } else {
        integrate_finite(f, a, b, spec)
    }
}

/// Carries the first error raised inside an integrand that must return `f64`.
/// Failed evaluations yield NaN, which stops the integrator; the stored error
/// is then reported instead of the quadrature failure.
pub struct ErrorSlot<E>(std::cell::RefCell<Option<E>>);

impl<E> Default for ErrorSlot<E> {
    fn default() -> Self {
        ErrorSlot(std::cell::RefCell::new(None))
    }
}

impl<E> ErrorSlot<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self, r: Result<f64, E>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    /// The stored error if any, otherwise `r` with its error converted.
    pub fn finish<T, Q>(self, r: Result<T, Q>) -> Result<T, E>
    where
        E: From<Q>,
    {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => r.map_err(E::from),
        }
    }
}

// ---------------------------------------------------------------------------
// Finite differences

/// Largest difference order supported before binomials lose all precision.
pub const MAX_DIFFERENCE_ORDER: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceProbe {
    pub step: f64,
    pub max_order: usize,
    pub grid: Vec<f64>,
}

impl DifferenceProbe {
    pub fn new(step: f64, max_order: usize, grid: Vec<f64>) -> Self {
        DifferenceProbe { step, max_order, grid }
    }

    /// Log-spaced grid of `n` points on `[lo, hi]`.
    pub fn log_grid(step: f64, max_order: usize, lo: f64, hi: f64, n: usize) -> Self {
        DifferenceProbe { step, max_order, grid: log_space(lo, hi, n) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceSign {
    pub x: f64,
    pub order: usize,
    /// `(-1)^n Δ_h^n f(x)`.
    pub value: f64,
    pub violation: bool,
}

/// Binomial coefficient in floating point; exact products up to `n = 30`,
/// log-sums above.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 30 {
        let mut c = 1.0;
        for i in 0..k {
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        c.round()
    } else {
        let mut ln = 0.0;
        for i in 0..k {
            ln += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
        ln.exp()
    }
}

/// Threshold below which a difference counts as a sign violation.
pub fn violation_threshold(fx: f64) -> f64 {
    -(1e-10f64).max(1e-8 * fx.abs())
}

/// `(-1)^n Δ_h^n f(x)` for `1 ≤ n ≤ N` at every grid point. Orders above
/// [`MAX_DIFFERENCE_ORDER`] are capped.
pub fn alternating_differences<F>(f: F, probe: &DifferenceProbe) -> Vec<DifferenceSign>
where
    F: Fn(f64) -> f64,
{
    let order = probe.max_order.min(MAX_DIFFERENCE_ORDER);
    let h = probe.step;
    let mut out = Vec::with_capacity(probe.grid.len() * order);
    for &x in &probe.grid {
        let values: Vec<f64> = (0..=order).map(|k| f(x + k as f64 * h)).collect();
        for n in 1..=order {
            // Δ^n f(x) = Σ_k (-1)^{n-k} C(n,k) f(x + kh), so (-1)^n Δ^n f = Σ_k (-1)^k C(n,k) f(x + kh)
            let mut acc = 0.0;
            for (k, &v) in values.iter().enumerate().take(n + 1) {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binomial(n, k) * v;
            }
            let violation = !acc.is_finite() || acc < violation_threshold(values[0]);
            out.push(DifferenceSign { x, order: n, value: acc, violation });
        }
    }
    out
}

/// Five-point central difference, `h` relative to `|x|`.
pub fn central_derivative<F>(f: &F, x: f64, rel_step: f64) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let h = rel_step * x.abs().max(f64::MIN_POSITIVE);
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub fn maximize_unimodal<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo).abs() > tol * (1.0 + lo.abs() + hi.abs()) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}
