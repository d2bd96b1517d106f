use jost_forge::exact::{ComplexField, Field, Gq, RationalFunction};
use jost_forge::synthesis::{
    asymptotic_leading, assemble_system, eval_expr, real_poles, render, schrodinger_residual, synthesize, Direction,
    ExpRational, MPoly, Mono, SpectralData, SpectralEntry, Style,
};
use num_complex::Complex64;

fn double_zero() -> SpectralData {
    SpectralData::new(vec![SpectralEntry {
        k: Gq::i(),
        nu: 2,
        a_jet: vec![Gq::frac(-1, 2), Gq::int(0)],
        b_jet: vec![Gq::int(1), Gq::int(0)],
    }])
    .unwrap()
}

fn one_soliton() -> SpectralData {
    SpectralData::new(vec![SpectralEntry {
        k: Gq::i(),
        nu: 1,
        a_jet: vec![Gq::cplx((0, 1), (-1, 2))],
        b_jet: vec![Gq::int(1)],
    }])
    .unwrap()
}

// Polynomials in F = e^{2x} = E^{-1} (E = e^{2ik x} at k = i), x and k.
fn t(c: Gq, f: i32, x: u32, k: u32) -> MPoly {
    MPoly::term(Mono { e: vec![-f], x, k }, c)
}

fn sum(ts: Vec<MPoly>) -> MPoly {
    ts.into_iter().fold(MPoly::zero(1), |a, b| a.add(&b))
}

fn rates() -> Vec<Gq> {
    vec![Gq::int(-2)]
}

/// e^{4x} − 2(2x+1)e^{2x} − 1
fn d() -> MPoly {
    sum(vec![t(Gq::int(1), 2, 0, 0), t(Gq::int(-4), 1, 1, 0), t(Gq::int(-2), 1, 0, 0), t(Gq::int(-1), 0, 0, 0)])
}

#[test]
fn displayed_system_for_double_zero() {
    let sys = assemble_system(&double_zero()).unwrap();
    // rows scaled by E = e^{-2x}:
    //   N⁰ = E(1 − 2iN¹ + N⁰)          → (1 − E)N⁰ + 2iE N¹ = E
    //   N¹ − 2ixN⁰ = E(N¹ + iN⁰)       → (−2ix − iE)N⁰ + (1 − E)N¹ = 0
    let e = MPoly::e_pow(1, 0, 1);
    let one = MPoly::one(1);
    let i = Gq::i();
    assert_eq!(sys.matrix[0][0], one.sub(&e));
    assert_eq!(sys.matrix[0][1], e.scale(&(Gq::int(2) * i.clone())));
    assert_eq!(sys.matrix[1][0], MPoly::x(1).scale(&(Gq::int(-2) * i.clone())).sub(&e.scale(&i)));
    assert_eq!(sys.matrix[1][1], one.sub(&e));
    assert_eq!(sys.rhs, vec![e, MPoly::zero(1)]);
}

#[test]
fn double_zero_closed_forms() {
    let s = synthesize(&double_zero()).unwrap();
    let n0 = ExpRational::new(rates(), sum(vec![t(Gq::int(1), 1, 0, 0), t(Gq::int(-1), 0, 0, 0)]), vec![(d(), 1)]);
    let n1 = ExpRational::new(
        rates(),
        sum(vec![t(Gq::cplx((0, 1), (2, 1)), 1, 1, 0), t(Gq::i(), 0, 0, 0)]),
        vec![(d(), 1)],
    );
    assert_eq!(s.solution.get(0, 0).unwrap(), &n0);
    assert_eq!(s.solution.get(0, 1).unwrap(), &n1);
    // ψe^{-ikx} = 1 + 4i[(2(k+i)x + i)e^{2x} + k]/((k+i)² D)
    let kpi = sum(vec![t(Gq::int(1), 0, 0, 1), t(Gq::i(), 0, 0, 0)]);
    let bracket = sum(vec![
        t(Gq::int(2), 1, 1, 1),
        t(Gq::cplx((0, 1), (2, 1)), 1, 1, 0),
        t(Gq::i(), 1, 0, 0),
        t(Gq::int(1), 0, 0, 1),
    ]);
    let frac = ExpRational::new(rates(), bracket.scale(&Gq::cplx((0, 1), (4, 1))), vec![(kpi, 2), (d(), 1)]);
    assert_eq!(s.psi.factor, ExpRational::one(rates()).add(&frac));
    // u = −16e^{2x}(e^{2x} − 1)((2x−1)e^{2x} + 2x + 3)/D²
    let num = t(Gq::int(-16), 1, 0, 0)
        .mul(&sum(vec![t(Gq::int(1), 1, 0, 0), t(Gq::int(-1), 0, 0, 0)]))
        .mul(&sum(vec![t(Gq::int(2), 1, 1, 0), t(Gq::int(-1), 1, 0, 0), t(Gq::int(2), 0, 1, 0), t(Gq::int(3), 0, 0, 0)]));
    assert_eq!(s.potential, ExpRational::new(rates(), num, vec![(d(), 2)]));
}

#[test]
fn double_zero_asymptotics_and_pole() {
    let s = synthesize(&double_zero()).unwrap();
    let a = asymptotic_leading(&s.psi, Direction::MinusInfinity).unwrap();
    let q = RationalFunction::normalize(
        jost_forge::exact::Poly::new(vec![-Gq::i(), Gq::int(1)]),
        jost_forge::exact::Poly::new(vec![Gq::i(), Gq::int(1)]),
    )
    .unwrap();
    assert_eq!(a, q.pow(2));
    assert_eq!(asymptotic_leading(&s.psi, Direction::PlusInfinity).unwrap(), RationalFunction::one());
    let poles = real_poles(&s.potential, -10.0, 10.0, 2001);
    assert_eq!(poles.len(), 1);
    assert!((poles[0] - 0.864558449107187).abs() < 1e-9, "{}", poles[0]);
}

#[test]
fn synthesized_jost_solution_solves_the_equation() {
    for data in [double_zero(), one_soliton()] {
        let s = synthesize(&data).unwrap();
        assert!(schrodinger_residual(&s.psi, &s.potential).is_zero());
    }
}

#[test]
fn one_soliton_is_two_sech_squared() {
    let s = synthesize(&one_soliton()).unwrap();
    let n0 = ExpRational::new(rates(), MPoly::one(1), vec![(sum(vec![t(Gq::int(1), 1, 0, 0), t(Gq::int(1), 0, 0, 0)]), 1)]);
    assert_eq!(s.solution.get(0, 0).unwrap(), &n0);
    for x in [-3.0, -0.5, 0.0, 0.7, 4.0] {
        let v = eval_expr(&s.potential, Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)).value().unwrap();
        let want = 2.0 / x.cosh().powi(2);
        assert!((v.re - want).abs() < 1e-13 && v.im.abs() < 1e-13);
    }
    let a = asymptotic_leading(&s.psi, Direction::MinusInfinity).unwrap();
    let want = RationalFunction::normalize(
        jost_forge::exact::Poly::new(vec![-Gq::i(), Gq::int(1)]),
        jost_forge::exact::Poly::new(vec![Gq::i(), Gq::int(1)]),
    )
    .unwrap();
    assert_eq!(a, want);
    println!("{}", render(&s.potential, Style::Text));
}

#[test]
fn empty_data_gives_free_solution() {
    let s = synthesize(&SpectralData::default()).unwrap();
    assert!(s.potential.is_zero());
    assert_eq!(s.psi.factor, ExpRational::one(vec![]));
    assert!(s.solution.values.is_empty());
}

/// Jets of a(k) = Π ((k − k_j)/(k + k_j))^{ν_j} at each zero, computed exactly.
fn reflectionless_data(zeros: &[(Gq, usize)], b: &[Vec<Gq>]) -> SpectralData {
    use jost_forge::exact::Poly;
    let a = zeros.iter().fold(RationalFunction::one(), |acc, (k, nu)| {
        let f = RationalFunction::normalize(Poly::linear_root(k.clone()), Poly::linear_root(-k.clone())).unwrap();
        &acc * &f.pow(*nu as u32)
    });
    let entries = zeros
        .iter()
        .zip(b)
        .map(|((k, nu), bj)| SpectralEntry {
            k: k.clone(),
            nu: *nu,
            a_jet: (*nu..2 * nu).map(|m| a.nth_derivative(m).eval(k).unwrap()).collect(),
            b_jet: bj.clone(),
        })
        .collect();
    SpectralData::new(entries).unwrap()
}

#[test]
fn two_simple_zeros_and_mixed_multiplicity() {
    let two = reflectionless_data(&[(Gq::i(), 1), (Gq::cplx((0, 1), (2, 1)), 1)], &[vec![Gq::int(1)], vec![Gq::int(1)]]);
    // oracle for the two-state corpus entry: a'(i) = i/6, a'(2i) = −i/12
    assert_eq!(two.entries[0].a_jet[0], Gq::cplx((0, 1), (1, 6)));
    assert_eq!(two.entries[1].a_jet[0], Gq::cplx((0, 1), (-1, 12)));
    let mixed = reflectionless_data(
        &[(Gq::i(), 2), (Gq::cplx((0, 1), (2, 1)), 1)],
        &[vec![Gq::int(1), Gq::frac(1, 3)], vec![Gq::int(-2)]],
    );
    for data in [two, mixed] {
        let s = synthesize(&data).unwrap();
        assert!(schrodinger_residual(&s.psi, &s.potential).is_zero());
        let a = asymptotic_leading(&s.psi, Direction::MinusInfinity).unwrap();
        let want = data.entries.iter().fold(RationalFunction::one(), |acc, e| {
            let f = RationalFunction::normalize(
                jost_forge::exact::Poly::linear_root(e.k.clone()),
                jost_forge::exact::Poly::linear_root(-e.k.clone()),
            )
            .unwrap();
            &acc * &f.pow(e.nu as u32)
        });
        assert_eq!(a, want);
        for x in [-40.0, 40.0] {
            let v = eval_expr(&s.potential, Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)).value().unwrap();
            assert!(v.norm() < 1e-20, "{} at {}", v, x);
        }
    }
}

mod invariants {
    use super::*;
    use jost_forge::harness::reflectionless_oracle;
    use proptest::prelude::*;

    fn c64(g: &Gq) -> Complex64 {
        g.to_c64()
    }

    fn simple_states() -> impl Strategy<Value = Vec<(Gq, Gq)>> {
        let kappa = (1i64..=6, 1i64..=2).prop_map(|(p, q)| Gq::cplx((0, 1), (p, q)));
        let b = (-5i64..=5, 1i64..=3, -3i64..=3).prop_filter_map("nonzero", |(p, q, im)| {
            let g = Gq::cplx((p, q), (im, 2));
            (!g.is_zero()).then_some(g)
        });
        proptest::collection::vec((kappa, b), 1..=2)
            .prop_filter("distinct zeros", |v| v.len() < 2 || v[0].0 != v[1].0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn simple_zeros_match_the_determinant_formula(states in simple_states()) {
            let zeros: Vec<(Gq, usize)> = states.iter().map(|s| (s.0.clone(), 1)).collect();
            let bs: Vec<Vec<Gq>> = states.iter().map(|s| vec![s.1.clone()]).collect();
            let data = reflectionless_data(&zeros, &bs);
            let s = synthesize(&data).unwrap();
            prop_assert!(schrodinger_residual(&s.psi, &s.potential).is_zero());
            let oracle_in: Vec<_> = data.entries.iter().map(|e| (c64(&e.k), c64(&e.a_jet[0]), c64(&e.b_jet[0]))).collect();
            for x in [-1.3, 0.2, 1.7] {
                let z = Complex64::new(x, 0.0);
                let Some(want) = reflectionless_oracle(&oracle_in, z) else { continue };
                let got = eval_expr(&s.potential, z, Complex64::new(0.0, 0.0)).value();
                let Some(got) = got else { continue };
                prop_assert!((got - want).norm() <= 1e-8 * (1.0 + want.norm()), "{} vs {} at {}", got, want, x);
            }
        }

        #[test]
        fn transmission_is_the_blaschke_product(states in simple_states(), double in any::<bool>()) {
            let nu = if double { 2 } else { 1 };
            let zeros: Vec<(Gq, usize)> = states.iter().map(|s| (s.0.clone(), nu)).collect();
            let bs: Vec<Vec<Gq>> = states.iter().map(|s| vec![s.1.clone(); nu]).collect();
            let data = reflectionless_data(&zeros, &bs);
            let s = synthesize(&data).unwrap();
            let want = zeros.iter().fold(RationalFunction::one(), |acc, (k, n)| {
                let f = RationalFunction::normalize(
                    jost_forge::exact::Poly::linear_root(k.clone()),
                    jost_forge::exact::Poly::linear_root(-k.clone()),
                )
                .unwrap();
                &acc * &f.pow(*n as u32)
            });
            prop_assert_eq!(asymptotic_leading(&s.psi, Direction::MinusInfinity).unwrap(), want);
        }
    }
}
