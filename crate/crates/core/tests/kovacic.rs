use jost_forge::exact::{laurent_expand, Center, Gq, Poly, RationalFunction};
use jost_forge::kovacic::{analyze, asymptotic_exponents, solvability_scan, CaseAVerdict, KSet, Verdict};
use num_complex::Complex64;

fn two_pole() -> RationalFunction<Gq> {
    RationalFunction::from_partial_fractions(&[
        (Gq::int(0), 2, Gq::frac(-5, 16)),
        (Gq::int(1), 2, Gq::frac(-5, 16)),
        (Gq::int(0), 1, Gq::frac(-7, 8)),
        (Gq::int(1), 1, Gq::frac(5, 24)),
    ])
}

#[test]
fn two_double_pole_potential_combines_over_common_denominator() {
    // independently combined: −(32x³ − 44x² + 12x + 15)/(48x²(x−1)²)
    let u = two_pole();
    let den = Poly::new(vec![Gq::int(0), Gq::int(0), Gq::int(1), Gq::int(-2), Gq::int(1)]);
    let num = Poly::new(vec![Gq::frac(-15, 48), Gq::frac(-12, 48), Gq::frac(44, 48), Gq::frac(-32, 48)]);
    assert_eq!(u.den(), &den);
    assert_eq!(u.num(), &num);
}

#[test]
fn decay_coefficient_at_infinity() {
    let s = laurent_expand(&two_pole(), &Center::Infinity, 2).unwrap();
    assert_eq!(s.x_power_coeff(0).unwrap(), Gq::int(0));
    // lim x·u(x): −32/48 = −2/3
    assert_eq!(s.x_power_coeff(-1).unwrap(), Gq::frac(-2, 3));
}

#[test]
fn double_pole_kappas_and_families() {
    let rep = analyze(&two_pole(), &Gq::frac(4, 3)).unwrap();
    assert_eq!(rep.profile.poles, vec![(Gq::int(0), 2), (Gq::int(1), 2)]);
    assert_eq!(rep.profile.order_at_infinity, 0);
    assert!(rep.necessary.a && rep.necessary.b && !rep.necessary.c);
    let a = rep.case_a.as_ref().unwrap();
    for pair in &a.kappas[..2] {
        assert_eq!(pair.plus.as_rational(), Some(Gq::frac(5, 4)));
        assert_eq!(pair.minus.as_rational(), Some(Gq::frac(-1, 4)));
    }
    // κ_∞^± = ±β/(2ik) with β = −ū₁ = 2/3
    let (p, m) = a.kappa_infinity_times_k();
    assert_eq!(p, Gq::cplx((0, 1), (-1, 3)));
    assert_eq!(m, Gq::cplx((0, 1), (1, 3)));
    assert_eq!(a.verdict, CaseAVerdict::Excluded);
    let b = rep.case_b.as_ref().unwrap();
    assert_eq!(b.families[0].1, vec![-1, 2, 5]);
    assert_eq!(b.families[1].1, vec![-1, 2, 5]);
    assert_eq!(b.candidates.len(), 1);
    assert_eq!(b.candidates[0].e, vec![-1, -1]);
    assert_eq!(b.candidates[0].d_e, 1);
    let theta = RationalFunction::from_partial_fractions(&[
        (Gq::int(0), 1, Gq::frac(-1, 2)),
        (Gq::int(1), 1, Gq::frac(-1, 2)),
    ]);
    assert_eq!(b.candidates[0].theta, theta);
    let th_inf = laurent_expand(&theta, &Center::Infinity, 1).unwrap();
    assert_eq!(th_inf.x_power_coeff(-1).unwrap(), Gq::int(-1));
}

#[test]
fn exceptional_k_squared_gives_linear_p() {
    let rep = analyze(&two_pole(), &Gq::frac(4, 3)).unwrap();
    assert_eq!(rep.verdict, Verdict::SolvableCaseB);
    let sol = rep.case_b.unwrap().solution.unwrap();
    assert_eq!(sol.p, Poly::new(vec![Gq::frac(-1, 4), Gq::int(1)]));
    assert!(sol.eq_p_residual().is_zero());
    let expected_hat = &RationalFunction::from_partial_fractions(&[
        (Gq::int(0), 1, Gq::frac(-1, 2)),
        (Gq::int(1), 1, Gq::frac(-1, 2)),
    ]) + &RationalFunction::pole_term(Gq::int(1), Gq::frac(1, 4), 1);
    assert_eq!(sol.theta_hat, expected_hat);
    assert!(sol.riccati_identity_holds());
}

#[test]
fn generic_k_has_no_case_b_solution() {
    for k2 in [Gq::int(1), Gq::frac(1, 4), Gq::frac(16, 25), Gq::frac(49, 25)] {
        let rep = analyze(&two_pole(), &k2).unwrap();
        assert!(rep.case_b.unwrap().solution.is_none());
        assert_eq!(rep.verdict, Verdict::NotSolvable);
    }
}

#[test]
fn asymptotics_of_the_liouvillian_solutions() {
    let rep = analyze(&two_pole(), &Gq::frac(4, 3)).unwrap();
    let sol = rep.case_b.unwrap().solution.unwrap();
    let ex = asymptotic_exponents(&sol).unwrap();
    let k = 2.0 / 3f64.sqrt();
    let i = Complex64::new(0.0, 1.0);
    assert!((ex[0].rate.to_c64() - i * k).norm() < 1e-14);
    assert!((ex[1].rate.to_c64() + i * k).norm() < 1e-14);
    // power = ∓ i/(3k) from ū₁ = −2/3
    assert!((ex[0].power.to_c64() + i / (3.0 * k)).norm() < 1e-14);
    assert!((ex[1].power.to_c64() - i / (3.0 * k)).norm() < 1e-14);
}

#[test]
fn inverse_square_potential_is_never_excluded() {
    let u = RationalFunction::pole_term(Gq::int(-2), Gq::int(0), 2);
    let out = solvability_scan(&u, &KSet::Grid { lo: 0.5, hi: 2.0, n: 7 }).unwrap();
    for p in &out.points {
        assert_ne!(p.report.verdict, Verdict::NotSolvable);
    }
    // independent check: v = e^{ikx}(1 + i/(kx)) solves v'' + (k² − 2/x²)v = 0
    let k = 1.3f64;
    let i = Complex64::new(0.0, 1.0);
    for x in [0.7f64, 1.9, 4.2] {
        let h = 1e-3;
        let v = |x: f64| (i * k * x).exp() * (1.0 + i / (k * x));
        let vpp = (v(x + h) - 2.0 * v(x) + v(x - h)) / (h * h);
        let res = vpp + (k * k - 2.0 / (x * x)) * v(x);
        assert!(res.norm() < 1e-5, "{}", res.norm());
    }
}

#[test]
fn scan_flags_the_exceptional_point() {
    let out = solvability_scan(&two_pole(), &KSet::Grid { lo: 0.5, hi: 1.5, n: 101 }).unwrap();
    assert!(out.points.iter().all(|p| p.report.verdict == Verdict::NotSolvable));
    assert_eq!(out.exceptional.len(), 1);
    let e = &out.exceptional[0];
    assert!((e.k - 2.0 / 3f64.sqrt()).abs() < 1e-8);
    assert!(e.interval.1 - e.interval.0 < 1e-6);
}

mod invariants {
    use super::*;
    use proptest::prelude::*;

    fn translate(u: &RationalFunction<Gq>, s: &Gq) -> RationalFunction<Gq> {
        RationalFunction::normalize(u.num().shift(s), u.den().shift(s)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        // translating x moves the poles but leaves the differential Galois group alone
        #[test]
        fn verdict_is_translation_invariant(p in -7i64..=7, q in 1i64..=5, k2 in prop::sample::select(vec![(4, 3), (1, 1), (1, 4)])) {
            let u = two_pole();
            let k2 = Gq::frac(k2.0, k2.1);
            let moved = translate(&u, &Gq::frac(p, q));
            let a = analyze(&u, &k2).unwrap();
            let b = analyze(&moved, &k2).unwrap();
            prop_assert_eq!(&a.verdict, &b.verdict);
            if let Some(sol) = b.case_b.and_then(|c| c.solution) {
                prop_assert!(sol.eq_p_residual().is_zero());
                prop_assert!(sol.riccati_identity_holds());
                prop_assert_eq!(sol.p.degree(), Some(1));
            }
        }
    }
}
