use num_complex::Complex64;
use proptest::prelude::*;
use thorinkit::classes::*;
use thorinkit::measures::Measure;
use thorinkit::numerics::{central_derivative, log_space, DifferenceProbe};
use thorinkit::specfun::{gamma, lower_inc_gamma};

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

const PAIRS: [(f64, f64); 6] = [(1.0, 1.0), (2.0, 0.0), (2.5, 1.7), (1.0, 0.5), (3.0, 3.0), (0.5, -0.5)];

fn two_atoms() -> Measure {
    Measure::atom(0.5, 0.7).unwrap().plus(&Measure::atom(2.0, 1.3).unwrap())
}

/// Point masses for every pair; m_1 where 0 < α < λ makes φ integrable.
fn thorin_corpus() -> Vec<(String, ThorinBernsteinFn)> {
    let mut out = Vec::new();
    for (l, al) in PAIRS {
        out.push((format!("atoms λ={l} α={al}"), ThorinBernsteinFn::new(l, al, 0.0, 0.0, two_atoms()).unwrap()));
        if al > 0.0 && al < l {
            let f = ThorinBernsteinFn::new(l, al, 0.0, 0.0, Measure::m_r(1.0).unwrap()).unwrap();
            out.push((format!("m_1 λ={l} α={al}"), f));
        }
    }
    out
}

#[test]
fn representations_agree() {
    let xs = log_space(1e-2, 1e2, 20);
    for (name, f) in thorin_corpus() {
        for &x in &xs {
            let d = f.eval_with(x, Representation::Defining).unwrap();
            let b = f.eval_with(x, Representation::BetaForm).unwrap();
            let h = f.eval_with(x, Representation::HyperForm).unwrap();
            assert!(rel(d, b) <= 1e-7 && rel(d, h) <= 1e-7, "{name} x={x}: {d} {b} {h}");
        }
    }
}

#[test]
fn m1_closed_form() {
    // σ = m_1 gives x^{α} Γ(λ-α)/α
    for (l, al) in [(2.5, 1.7), (1.0, 0.5)] {
        let f = ThorinBernsteinFn::new(l, al, 0.0, 0.0, Measure::m_r(1.0).unwrap()).unwrap();
        for x in [0.05f64, 1.0, 30.0] {
            let want = x.powf(al) * gamma(l - al) / al;
            assert!(rel(f.eval(x).unwrap(), want) < 1e-9, "λ={l} α={al} x={x}");
        }
    }
}

#[test]
fn monotone_and_non_negative() {
    let xs = log_space(1e-2, 1e2, 20);
    for (name, f) in thorin_corpus() {
        let mut prev = 0.0;
        for &x in &xs {
            let v = f.eval(x).unwrap();
            assert!(v >= prev, "{name} x={x}");
            prev = v;
        }
    }
}

#[test]
fn derivative_matches_central_difference() {
    let mut corpus = thorin_corpus();
    corpus.push(("with a, b".into(), ThorinBernsteinFn::new(1.5, 0.5, 0.3, 2.0, two_atoms()).unwrap()));
    for (name, f) in corpus {
        for x in [0.05, 0.5, 3.0, 40.0] {
            let fd = central_derivative(&|y: f64| f.eval(y).unwrap(), x, 1e-4);
            let d = f.thorin_derivative(x).unwrap();
            assert!(rel(fd, d) <= 1e-5, "{name} x={x}: {fd} vs {d}");
        }
        let rep = f.characterization_check(&[0.1, 1.0, 10.0]).unwrap();
        assert!(rep.max_rel_err <= 1e-5, "{name}: {rep:?}");
    }
}

#[test]
fn nesting_of_point_masses() {
    for (l, a2, a1) in [(2.0, 1.5, 0.5), (1.0, 0.5, -0.5), (3.0, 3.0, 1.2)] {
        let f = ThorinBernsteinFn::new(l, a2, 0.0, 0.0, two_atoms()).unwrap();
        let g = f.with_lower_order(a1).unwrap();
        for x in [0.1, 1.0, 10.0] {
            assert!(rel(f.eval(x).unwrap(), g.eval(x).unwrap()) < 1e-8, "λ={l} x={x}");
        }
    }
}

#[test]
fn laplace_decomposition_corpus() {
    for (name, f) in thorin_corpus() {
        for x in [0.5, 2.0] {
            let d = f.laplace_of_thorin(x).unwrap();
            assert!(rel(d.decomposed, d.double_integral) < 1e-6, "{name} x={x}: {d:?}");
        }
    }
}

fn bernstein_corpus() -> Vec<GeneralizedBernsteinFn> {
    vec![
        GeneralizedBernsteinFn::new(1.0, 0.0, 0.0, Measure::dirac(1.0).unwrap()).unwrap(),
        GeneralizedBernsteinFn::new(2.5, 0.5, 1.0, two_atoms()).unwrap(),
        GeneralizedBernsteinFn::new(0.5, 0.0, 0.2, Measure::power_exp(1.5, 1.0).unwrap()).unwrap(),
        GeneralizedBernsteinFn::new(1.5, 0.0, 0.0, Measure::m_r(0.5).unwrap()).unwrap(),
        GeneralizedBernsteinFn::new(2.0, 1.0, 0.0, Measure::truncated_unit(0.5, 1.5).unwrap()).unwrap(),
    ]
}

#[test]
fn bernstein_cm_battery() {
    let probe = DifferenceProbe::log_grid(0.05, 8, 0.05, 20.0, 30);
    for f in bernstein_corpus() {
        let l = f.lambda;
        let r = cm_membership_probe(|t| t.powf(-l) * f.eval(t).unwrap(), &probe);
        assert!(r.is_consistent(), "{f:?}: {:?}", &r.violations[..r.violations.len().min(3)]);
    }
    assert!(!cm_membership_probe(|t| 1.0 / (1.0 + t * t), &probe).is_consistent());
    assert!(!cm_membership_probe(|t| (-t).exp() * (1.0 + (3.0 * t).sin() / 2.0), &probe).is_consistent());
}

#[test]
fn phi_map_matches_image() {
    for f in bernstein_corpus() {
        let g = f.phi_image().unwrap();
        for x in [0.3, 2.0] {
            assert!(rel(f.phi_map(x).unwrap(), g.eval(x).unwrap()) < 1e-8, "{f:?} x={x}");
        }
    }
}

#[test]
fn pick_probe_separates_counterexample() {
    let pts = pick_grid(0.5, 8.0, 16, 24);
    let bad = stieltjes_violation_probe(|z| counterexample_transform(3, z).unwrap(), &pts);
    assert!(bad.max_im > 1e-6, "{bad:?}");
    let closed = counterexample_transform_closed(3, bad.witness).unwrap();
    assert!((counterexample_transform(3, bad.witness).unwrap() - closed).norm() < 1e-12);
    let stieltjes = [
        StieltjesFn::new(1.0, two_atoms(), 0.5).unwrap(),
        StieltjesFn::new(1.0, Measure::rational_square(), 0.0).unwrap(),
        StieltjesFn::new(0.5, Measure::m_r(0.3).unwrap(), 0.0).unwrap(),
        StieltjesFn::new(1.0, Measure::truncated_unit(0.0, 1.0).unwrap(), 0.0).unwrap(),
        StieltjesFn::new(0.8, Measure::power_exp(1.2, 0.5).unwrap(), 1.0).unwrap(),
    ];
    for g in &stieltjes {
        let r = stieltjes_violation_probe(|z| g.eval_complex(z).unwrap(), &pts);
        assert!(r.max_im <= 1e-12, "{g:?}: {r:?}");
    }
}

#[test]
fn approximation_converges() {
    let sigma = Measure::dirac(1.0).unwrap();
    let grid = log_space(1e-2, 1e2, 100);
    for l in [1.0, 2.0] {
        let mut prev = f64::INFINITY;
        for n in [1, 2, 4, 8, 16] {
            let ap = build_approximation(l, &sigma, n).unwrap().unwrap();
            let err = [0.5, 1.0, 3.0]
                .iter()
                .map(|&x| (ap.big_f(x).unwrap() - lower_inc_gamma(l, x).unwrap()).abs())
                .fold(0.0, f64::max);
            assert!(err <= prev, "λ={l} n={n}: {err} > {prev}");
            prev = err;
            assert!(ap.uniform_gap(&grid).unwrap() <= 1.0 / f64::from(n));
        }
        assert!(prev <= 0.05, "λ={l}: {prev}");
    }
}

#[test]
fn h_k_bound() {
    for k in 1..=100u32 {
        let s = sup_h_k(k);
        assert!(s > 0.0 && f64::from(k) * s <= std::f64::consts::E, "k={k}");
    }
}

#[test]
fn sigma_n_matches_symbolic_derivatives() {
    let sigma = Measure::dirac(1.0).unwrap();
    let minus_phi1 = |t: f64| (t.powf(-0.5) + 0.5 * t.powf(-1.5)) * (-t).exp();
    let phi2 = |t: f64| (0.75 * t.powf(-2.5) + t.powf(-1.5) + t.powf(-0.5)) * (-t).exp();
    let s2 = build_sigma_n(&sigma, 0.5, 2).unwrap();
    let s3 = build_sigma_n(&sigma, 0.5, 3).unwrap();
    for t in [0.5f64, 1.0, 2.0] {
        let l2 = t.powf(-0.5) * s2.laplace_real(t).unwrap();
        let l3 = t.powf(-0.5) * s3.laplace_real(t).unwrap();
        assert!(rel(l2, minus_phi1(t)) < 1e-7);
        assert!(rel(l3, phi2(t)) < 1e-7);
    }
}

#[test]
fn lomax_agreement() {
    for l in [0.5, 1.5, 2.0 - 1e-9, 2.5] {
        for t in [0.1, 1.0, 10.0] {
            let a = lomax_cdf(l, t).unwrap();
            let b = lomax_cdf_quadrature(l, t).unwrap();
            assert!(rel(a, b) < 1e-8, "λ={l} t={t}: {a} {b}");
            assert!((0.0..=1.0).contains(&a));
        }
    }
}

#[test]
fn stieltjes_imag_sign_at_one_point() {
    let g = StieltjesFn::new(1.0, two_atoms(), 0.0).unwrap();
    assert!(g.eval_complex(Complex64::new(0.3, 2.0)).unwrap().im < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_point_mass_representations(
        l in 0.3f64..3.0,
        frac in 0.0f64..1.0,
        s in 0.1f64..5.0,
        x in 0.01f64..50.0,
    ) {
        let al = -1.0 + frac * (l + 1.9);
        let f = ThorinBernsteinFn::new(l, al, 0.0, 0.0, Measure::dirac(s).unwrap()).unwrap();
        let b = f.eval_with(x, Representation::BetaForm).unwrap();
        let h = f.eval_with(x, Representation::HyperForm).unwrap();
        let d = f.eval_with(x, Representation::Defining).unwrap();
        prop_assert!(rel(b, h) < 1e-8, "{} {}", b, h);
        prop_assert!(rel(b, d) < 1e-7, "{} {}", b, d);
    }

    #[test]
    fn thorin_is_increasing(l in 0.3f64..3.0, frac in 0.0f64..1.0, s in 0.1f64..5.0, x in 0.01f64..50.0) {
        let al = -1.0 + frac * (l + 1.9);
        let f = ThorinBernsteinFn::new(l, al, 0.2, 0.1, Measure::dirac(s).unwrap()).unwrap();
        prop_assert!(f.eval(x * 1.1).unwrap() >= f.eval(x).unwrap());
        prop_assert!(f.thorin_derivative(x).unwrap() > 0.0);
    }

    #[test]
    fn h_k_non_negative(k in 1u32..500, s in 0.0f64..100.0) {
        prop_assert!(h_k(k, s) >= -1e-16);
    }
}
