use num_complex::Complex64;
use proptest::prelude::*;
use thorinkit::measures::*;
use thorinkit::numerics::{alternating_differences, integrate_finite, DifferenceProbe, QuadratureSpec};
use thorinkit::specfun::{gamma, lower_inc_gamma};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn corpus() -> Vec<Measure> {
    vec![
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
        Measure::atom(0.5, 1.0).unwrap().plus(&Measure::m_r(1.5).unwrap()),
    ]
}

#[test]
fn laplace_transforms_pass_difference_test() {
    let probe = DifferenceProbe::log_grid(0.05, 8, 0.1, 20.0, 25);
    for mu in corpus() {
        let rows = alternating_differences(|t| mu.laplace_real(t).unwrap(), &probe);
        assert!(rows.iter().all(|r| !r.violation), "{mu:?}");
    }
}

#[test]
fn trivial_laplace_examples() {
    for t in [0.3, 1.0, 4.0] {
        assert!(rel(Measure::dirac(2.0).unwrap().laplace_real(t).unwrap(), (-2.0 * t).exp()) < 1e-15);
        assert!(rel(Measure::m_r(1.7).unwrap().laplace_real(t).unwrap(), t.powf(-1.7)) < 1e-15);
    }
}

fn points() -> [EvaluablePoint; 3] {
    [0.5, 1.0]
        .map(|x| EvaluablePoint::real(x).unwrap())
        .into_iter()
        .chain([EvaluablePoint::new(Complex64::new(2.0, 1.0)).unwrap()])
        .collect::<Vec<_>>()
        .try_into()
        .unwrap()
}

#[test]
fn convolution_product_rule_exact_pairs() {
    let pairs = [
        (Measure::dirac(1.0).unwrap(), Measure::atom(0.5, 3.0).unwrap()),
        (Measure::m_r(0.5).unwrap(), Measure::m_r(2.0).unwrap()),
        (Measure::dirac(0.7).unwrap(), Measure::rational_square()),
        (Measure::power_exp(1.5, 2.0).unwrap(), Measure::power_exp(0.5, 2.0).unwrap()),
        (Measure::atom(1.0, 2.0).unwrap().plus(&Measure::lebesgue()), Measure::m_r(1.0).unwrap()),
    ];
    for (mu, nu) in &pairs {
        let conv = mu.convolve(nu).unwrap();
        for z in points() {
            let want = mu.laplace(z).unwrap() * nu.laplace(z).unwrap();
            let got = conv.laplace(z).unwrap();
            assert!((got - want).norm() <= 1e-8 * want.norm(), "{mu:?} ∗ {nu:?} at {z:?}");
        }
    }
}

// Density × density products are tabulated with linear interpolation on 512
// geometric nodes, so the product rule only holds to interpolation accuracy.
#[test]
fn convolution_product_rule_tabulated_pairs() {
    let pairs = [
        (Measure::rational_square(), Measure::truncated_unit(0.0, 1.0).unwrap()),
        (Measure::power_exp(1.0, 1.0).unwrap(), Measure::power_exp(2.0, 3.0).unwrap()),
    ];
    for (mu, nu) in &pairs {
        let conv = mu.convolve(nu).unwrap();
        for z in points() {
            let want = mu.laplace(z).unwrap() * nu.laplace(z).unwrap();
            let got = conv.laplace(z).unwrap();
            assert!((got - want).norm() <= 1e-3 * want.norm(), "{mu:?} ∗ {nu:?} at {z:?}: {got} vs {want}");
        }
    }
}

#[test]
fn laplace_product_two_atoms() {
    let beta: f64 = 1.5;
    let e1 = Measure::dirac(1.0).unwrap();
    let e2 = Measure::dirac(2.0).unwrap();
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_left_exponent(beta - 1.0);
    let lhs = thorinkit::numerics::integrate_semi_infinite(
        |t| t.powf(beta - 1.0) * e1.laplace_real(t).unwrap() * e2.laplace_real(t).unwrap(),
        0.0,
        &spec,
    )
    .unwrap()
    .value;
    let conv = e1.convolve(&e2).unwrap();
    let rhs = gamma(beta) * conv.integrate(&Kernel::new(|s: f64| s.powf(-beta))).unwrap();
    let oracle = 0.170_554_451_324_414_743_385_000_827_273_276_513_606_2;
    assert!(rel(lhs, oracle) < 1e-10 && rel(rhs, oracle) < 1e-14);
}

#[test]
fn fractional_integral_recurrence_discrete() {
    let mu = Measure::atom(0.3, 1.0).unwrap().plus(&Measure::atom(1.2, 0.5).unwrap());
    for n in 1..4 {
        let xi_n = mu.fractional_integral(n).unwrap();
        let xi_next = mu.fractional_integral(n + 1).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let spec = QuadratureSpec::default().with_rel_tol(1e-12);
            // split at the atoms, where ξ_1 jumps
            let mut acc = 0.0;
            let mut cuts = vec![0.0, 0.3, 1.2, t];
            cuts.retain(|&c| c <= t);
            cuts.dedup();
            for w in cuts.windows(2) {
                acc += integrate_finite(|u| xi_n.eval(u).unwrap(), w[0], w[1], &spec).unwrap().value;
            }
            let want = xi_next.eval(t).unwrap();
            assert!(rel(acc, want) <= 1e-8, "n={n} t={t}: {acc} vs {want}");
        }
    }
}

#[test]
fn fractional_integrals_nonnegative_nondecreasing() {
    for mu in corpus() {
        for n in 1..=3 {
            let xi = mu.fractional_integral(n).unwrap();
            let mut prev = 0.0;
            for i in 1..=30 {
                let v = xi.eval(0.2 * i as f64).unwrap();
                assert!(v >= 0.0 && v >= prev - 1e-12 * v.abs(), "{mu:?} n={n}");
                prev = v;
            }
        }
    }
}

#[test]
fn fubini_composite_case() {
    let g = Kernel::new(|t: f64| lower_inc_gamma(2.0, t).unwrap() * (-t).exp()).origin(2.0).decay(Decay::Exponential);
    let c = fubini_check(&g, &Measure::dirac(0.5).unwrap()).unwrap();
    assert!(c.rel_gap <= 1e-8);
    assert!(rel(c.lhs, 8.0 / 75.0) < 1e-10);
}

#[test]
fn stieltjes_transforms_have_nonpositive_imaginary_part() {
    let zs: Vec<Complex64> = (1..=8)
        .flat_map(|r| (1..12).map(move |k| Complex64::from_polar(r as f64, std::f64::consts::PI * k as f64 / 12.0)))
        .collect();
    let mut checked = 0;
    for mu in corpus() {
        // densities growing at infinity (m_r, r ≥ 1; shifted powers; h_p, p ≥ 1) have no order-1 transform
        if matches!(mu.stieltjes_transform(1.0, Complex64::new(1.0, 0.0)), Err(MeasureError::Divergent(_))) {
            continue;
        }
        checked += 1;
        for &z in &zs {
            let v = mu.stieltjes_transform(1.0, z).unwrap();
            assert!(v.im <= 1e-12, "{mu:?} at {z}: {v}");
        }
    }
    assert_eq!(checked, 7);
}

fn arb_measure() -> impl Strategy<Value = Measure> {
    (
        prop::collection::vec((0.0f64..5.0, 0.1f64..3.0), 0..3),
        prop::option::of((0.2f64..3.0, 0.0f64..2.0, 0.0f64..2.0)),
    )
        .prop_filter("non-zero", |(a, p)| !a.is_empty() || p.is_some())
        .prop_map(|(atoms, piece)| {
            let mut m = Measure::zero();
            for (loc, mass) in atoms {
                m = m.plus(&Measure::atom(loc, mass).unwrap());
            }
            if let Some((r, c, shift)) = piece {
                let p = DensityPiece::new(Family::PowerExp { r, c }).shifted(shift);
                m = m.plus(&Measure::piece(p).unwrap());
            }
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_laplace_is_completely_monotone(mu in arb_measure()) {
        let probe = DifferenceProbe::log_grid(0.05, 8, 0.2, 10.0, 8);
        let rows = alternating_differences(|t| mu.laplace_real(t).unwrap(), &probe);
        prop_assert!(rows.iter().all(|r| !r.violation));
    }

    #[test]
    fn random_product_rule(mu in arb_measure(), nu in arb_measure()) {
        // generated densities share c only by accident; restrict to exact pairs
        let exact = mu.pieces().is_empty() || nu.pieces().is_empty();
        prop_assume!(exact);
        let conv = mu.convolve(&nu).unwrap();
        for z in points() {
            let want = mu.laplace(z).unwrap() * nu.laplace(z).unwrap();
            let got = conv.laplace(z).unwrap();
            prop_assert!((got - want).norm() <= 1e-8 * want.norm());
        }
    }

    #[test]
    fn random_laplace_matches_quadrature(mu in arb_measure(), t in 0.2f64..5.0) {
        let z = EvaluablePoint::real(t).unwrap();
        let a = mu.laplace(z).unwrap().re;
        let b = mu.laplace_quadrature(z).unwrap().re;
        prop_assert!(rel(b, a) <= 1e-9);
    }
}
