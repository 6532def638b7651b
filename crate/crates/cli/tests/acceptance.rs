//! Acceptance criteria AC1–AC9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use thorinkit::classes::*;
use thorinkit::measures::Measure;
use thorinkit::numerics::{alternating_differences, integrate_finite, integrate_semi_infinite, log_space, DifferenceProbe, QuadratureSpec};
use thorinkit::specfun::{gamma, hyp2f1, inc_beta, lower_inc_gamma, upper_inc_gamma};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_thorinkit"));
    c.env_remove("THORINKIT_THREADS");
    c
}

fn verify_all(format: &str, out: &Path) -> Result<std::process::Output, String> {
    bin()
        .args(["verify", "--all", "--format", format, "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())
}

fn two_atoms() -> Measure {
    Measure::atom(0.5, 0.7).unwrap().plus(&Measure::atom(2.0, 1.3).unwrap())
}

fn ac1() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("all.json");
    let start = Instant::now();
    let out = verify_all("json", &path)?;
    let secs = start.elapsed().as_secs_f64();
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let reports: Vec<serde_json::Value> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| r["pass"] != serde_json::Value::Bool(true))
        .map(|r| r["id"].as_str().unwrap_or("?").to_string())
        .collect();
    let identities = reports.iter().filter(|r| r["id"].as_str().is_some_and(|s| s.starts_with('I'))).count();
    check(
        out.status.success() && identities == 21 && failed.is_empty() && secs <= 60.0,
        format!("{} reports ({identities} identities), failed {failed:?}, exit {:?}, {secs:.1}s", reports.len(), out.status.code()),
    )
}

fn ac2() -> Outcome {
    let pts = pick_grid(0.5, 8.0, 16, 24);
    let bad = stieltjes_violation_probe(|z| counterexample_transform(3, z).unwrap(), &pts);
    let stieltjes = [
        StieltjesFn::new(1.0, two_atoms(), 0.5).unwrap(),
        StieltjesFn::new(1.0, Measure::rational_square(), 0.0).unwrap(),
        StieltjesFn::new(0.5, Measure::m_r(0.3).unwrap(), 0.0).unwrap(),
        StieltjesFn::new(1.0, Measure::truncated_unit(0.0, 1.0).unwrap(), 0.0).unwrap(),
        StieltjesFn::new(0.8, Measure::power_exp(1.2, 0.5).unwrap(), 1.0).unwrap(),
    ];
    let worst = stieltjes
        .iter()
        .map(|g| stieltjes_violation_probe(|z| g.eval_complex(z).unwrap(), &pts).max_im)
        .fold(f64::NEG_INFINITY, f64::max);
    check(
        bad.max_im > 1e-6 && worst <= 1e-12,
        format!("counterexample max Im {:.3e} at {}, Stieltjes max Im {worst:.3e}", bad.max_im, bad.witness),
    )
}

fn ac3() -> Outcome {
    let pairs = [(1.0, 1.0), (2.0, 0.0), (2.5, 1.7), (1.0, 0.5), (3.0, 3.0), (0.5, -0.5)];
    let xs = log_space(1e-2, 1e2, 20);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (l, al) in pairs {
        let mut fs = vec![ThorinBernsteinFn::new(l, al, 0.0, 0.0, two_atoms()).map_err(|e| e.to_string())?];
        if al > 0.0 && al < l {
            fs.push(ThorinBernsteinFn::new(l, al, 0.0, 0.0, Measure::m_r(1.0).unwrap()).map_err(|e| e.to_string())?);
        }
        for f in fs {
            count += 1;
            for &x in &xs {
                let d = f.eval_with(x, Representation::Defining).map_err(|e| e.to_string())?;
                let b = f.eval_with(x, Representation::BetaForm).map_err(|e| e.to_string())?;
                let h = f.eval_with(x, Representation::HyperForm).map_err(|e| e.to_string())?;
                worst = worst.max(rel(d, b)).max(rel(d, h));
            }
        }
    }
    check(worst <= 1e-7, format!("{count} instances x 20 points, max rel diff {worst:.3e}"))
}

fn ac4() -> Outcome {
    let probe = DifferenceProbe::log_grid(0.05, 8, 0.05, 20.0, 30);
    let bernstein = [
        GeneralizedBernsteinFn::new(1.0, 0.0, 0.0, Measure::dirac(1.0).unwrap()).unwrap(),
        GeneralizedBernsteinFn::new(2.5, 0.5, 1.0, two_atoms()).unwrap(),
        GeneralizedBernsteinFn::new(0.5, 0.0, 0.2, Measure::power_exp(1.5, 1.0).unwrap()).unwrap(),
        GeneralizedBernsteinFn::new(1.5, 0.0, 0.0, Measure::m_r(0.5).unwrap()).unwrap(),
        GeneralizedBernsteinFn::new(2.0, 1.0, 0.0, Measure::truncated_unit(0.5, 1.5).unwrap()).unwrap(),
    ];
    let mut violations = 0;
    for f in &bernstein {
        let l = f.lambda;
        violations += cm_membership_probe(|t| t.powf(-l) * f.eval(t).unwrap(), &probe).violations.len();
    }
    let measures = [
        Measure::dirac(0.0).unwrap(),
        Measure::atom(1.5, 2.0).unwrap(),
        Measure::m_r(0.5).unwrap(),
        Measure::lebesgue(),
        Measure::power_exp(2.5, 1.0).unwrap(),
        Measure::shifted_power(1.0, 2.0).unwrap(),
        Measure::rational_square(),
        Measure::ep_kernel(0.5).unwrap(),
        Measure::ep_kernel(2.0).unwrap(),
        Measure::truncated_unit(0.5, 2.0).unwrap(),
        two_atoms().plus(&Measure::m_r(1.5).unwrap()),
    ];
    for mu in &measures {
        violations += alternating_differences(|t| mu.laplace_real(t).unwrap(), &probe).iter().filter(|r| r.violation).count();
    }
    let c1 = cm_membership_probe(|t| 1.0 / (1.0 + t * t), &probe).violations.len();
    let c2 = cm_membership_probe(|t| (-t).exp() * (1.0 + (3.0 * t).sin() / 2.0), &probe).violations.len();
    check(
        violations == 0 && c1 > 0 && c2 > 0,
        format!(
            "{} functions, {violations} violations; controls flagged {c1} and {c2}",
            bernstein.len() + measures.len()
        ),
    )
}

fn ac5() -> Outcome {
    let sigma = Measure::dirac(1.0).unwrap();
    let grid = log_space(1e-2, 1e2, 100);
    let mut lines = Vec::new();
    let mut ok = true;
    for l in [1.0, 2.0] {
        let mut prev = f64::INFINITY;
        for n in [1, 2, 4, 8, 16] {
            let ap = build_approximation(l, &sigma, n).map_err(|e| e.to_string())?.ok_or("empty truncation")?;
            let mut err: f64 = 0.0;
            for x in [0.5, 1.0, 3.0] {
                let target = lower_inc_gamma(l, x).map_err(|e| e.to_string())?;
                err = err.max((ap.big_f(x).map_err(|e| e.to_string())? - target).abs());
            }
            let gap = ap.uniform_gap(&grid).map_err(|e| e.to_string())?;
            ok &= err <= prev && gap <= 1.0 / f64::from(n);
            prev = err;
        }
        ok &= prev <= 0.05;
        lines.push(format!("λ={l}: err(16)={prev:.3e}"));
    }
    check(ok, lines.join(", "))
}

fn ac6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut min_sup = f64::INFINITY;
    for k in 1..=100u32 {
        let s = sup_h_k(k);
        min_sup = min_sup.min(s);
        worst = worst.max(f64::from(k) * s);
    }
    check(worst <= std::f64::consts::E && min_sup > 0.0, format!("max k·sup {worst:.6}, min sup {min_sup:.3e}"))
}

fn ac7() -> Outcome {
    let mut worst: f64 = 0.0;
    let e = |x: thorinkit::specfun::SpecError| x.to_string();
    for l in [0.3, 1.0, 2.5, 7.0] {
        for x in [0.01, 1.0, 10.0] {
            worst = worst.max(rel(lower_inc_gamma(l, x).map_err(e)? + upper_inc_gamma(l, x).map_err(e)?, gamma(l)));
        }
    }
    for (a, b, c) in [(2.5f64, 1.7f64, 3.5f64), (0.5, 1.0, 1.5), (1.2, -0.4, 2.7)] {
        for z in [-5.0f64, -1.0, -0.2] {
            let pfaff = (1.0 - z).powf(-a) * hyp2f1(a, c - b, c, z / (z - 1.0)).map_err(e)?;
            worst = worst.max(rel(hyp2f1(a, b, c, z).map_err(e)?, pfaff));
        }
        for z in [0.1f64, 0.5, 0.9] {
            let euler = (1.0 - z).powf(c - a - b) * hyp2f1(c - a, c - b, c, z).map_err(e)?;
            worst = worst.max(rel(hyp2f1(a, b, c, z).map_err(e)?, euler));
        }
    }
    for a in [0.5, 1.5, 3.0] {
        for b in [-1.5, -0.5, 0.5, 1.0, 2.0] {
            for x in [0.1, 0.5, 0.9, 0.99] {
                let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_left_exponent(a - 1.0);
                let want = integrate_finite(|t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0), 0.0, x, &spec)
                    .map_err(|e| e.to_string())?
                    .value;
                worst = worst.max(rel(inc_beta(a, b, x).map_err(e)?, want));
            }
        }
    }
    for l in [0.5f64, 1.5] {
        for x in [0.5f64, 2.0] {
            let spec = QuadratureSpec::default().with_rel_tol(1e-13);
            let want = integrate_semi_infinite(|u: f64| (-u).exp() * u.powf(-l - 1.0), x, &spec)
                .map_err(|e| e.to_string())?
                .value;
            worst = worst.max(rel(upper_inc_gamma(-l, x).map_err(e)?, want));
        }
    }
    check(worst <= 1e-8, format!("max rel err {worst:.3e}"))
}

fn ac8() -> Outcome {
    let sigma = Measure::dirac(1.0).unwrap();
    let minus_phi1 = |t: f64| (t.powf(-0.5) + 0.5 * t.powf(-1.5)) * (-t).exp();
    let phi2 = |t: f64| (0.75 * t.powf(-2.5) + t.powf(-1.5) + t.powf(-0.5)) * (-t).exp();
    let s2 = build_sigma_n(&sigma, 0.5, 2).map_err(|e| e.to_string())?;
    let s3 = build_sigma_n(&sigma, 0.5, 3).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for t in [0.5f64, 1.0, 2.0] {
        worst = worst.max(rel(t.powf(-0.5) * s2.laplace_real(t).map_err(|e| e.to_string())?, minus_phi1(t)));
        worst = worst.max(rel(t.powf(-0.5) * s3.laplace_real(t).map_err(|e| e.to_string())?, phi2(t)));
    }
    check(worst <= 1e-7, format!("max rel err {worst:.3e}"))
}

fn ac9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    verify_all("csv", &a)?;
    verify_all("csv", &b)?;
    let (x, y) = (std::fs::read(&a).map_err(|e| e.to_string())?, std::fs::read(&b).map_err(|e| e.to_string())?);
    check(!x.is_empty() && x == y, format!("{} bytes, identical: {}", x.len(), x == y))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("AC1", "identity suite", ac1),
        ("AC2", "Pick probe on the counterexample", ac2),
        ("AC3", "representation agreement", ac3),
        ("AC4", "complete-monotonicity battery", ac4),
        ("AC5", "approximation convergence", ac5),
        ("AC6", "h_k bound", ac6),
        ("AC7", "special-function cross-checks", ac7),
        ("AC8", "sigma_n machinery", ac8),
        ("AC9", "determinism", ac9),
    ];
    let mut failures = 0;
    for (id, name, run) in criteria {
        match run() {
            Ok(detail) => println!("{id} PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("{id} FAIL  {name}: {detail}");
            }
        }
    }
    println!("{}/9 acceptance criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
