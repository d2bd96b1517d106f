use jost_forge::exact::{laurent_expand, Center, ComplexField, Field, Gq, Poly, RationalFunction};
use proptest::prelude::*;

fn gq() -> impl Strategy<Value = Gq> {
    (-12i64..=12, 1i64..=7, -12i64..=12, 1i64..=7).prop_map(|(a, b, c, d)| Gq::cplx((a, b), (c, d)))
}

fn nonzero() -> impl Strategy<Value = Gq> {
    gq().prop_filter("nonzero", |g| !g.is_zero())
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly<Gq>> {
    proptest::collection::vec(gq(), 1..=max_len).prop_map(Poly::new)
}

fn small_int() -> impl Strategy<Value = Gq> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| Gq::cplx((a, 1), (b, 1)))
}

proptest! {
    #[test]
    fn scalar_field_laws(a in gq(), b in nonzero(), c in gq()) {
        prop_assert_eq!(a.clone() * b.clone() / b.clone(), a.clone());
        prop_assert_eq!((a.clone() + c.clone()) - c.clone(), a.clone());
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
    }

    #[test]
    fn exact_square_roots_square_back(a in gq()) {
        let sq = a.clone() * a.clone();
        let r = sq.sqrt_exact().expect("a perfect square has an exact root");
        prop_assert_eq!(r.clone() * r, sq.clone());
        let p = sq.sqrt_principal().unwrap();
        prop_assert!(p == a || p == -a);
    }

    #[test]
    fn division_with_remainder(p in poly(6), d in poly(4).prop_filter("nonzero", |d| !d.is_zero())) {
        let (q, r) = p.div_rem(&d);
        prop_assert_eq!(&(&q * &d) + &r, p);
        if let Some(dr) = r.degree() {
            prop_assert!(dr < d.degree().unwrap() || d.degree() == Some(0) && r.is_zero());
        }
    }

    #[test]
    fn gcd_divides_both(a in poly(4), b in poly(4), c in poly(3).prop_filter("nonzero", |c| !c.is_zero())) {
        let (x, y) = (&a * &c, &b * &c);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let g = x.gcd(&y);
        prop_assert!(x.div_rem(&g).1.is_zero());
        prop_assert!(y.div_rem(&g).1.is_zero());
        // the common factor survives
        prop_assert!(g.div_rem(&c.monic()).1.is_zero());
    }

    #[test]
    fn square_free_factors_rebuild_the_monic_polynomial(roots in proptest::collection::vec((small_int(), 1usize..=3), 1..=3)) {
        let mut p = Poly::one();
        for (r, m) in &roots {
            p = &p * &Poly::linear_root(r.clone()).pow(*m as u32);
        }
        let mut rebuilt = Poly::one();
        for (f, m) in p.square_free() {
            prop_assert_eq!(f.gcd(&f.derivative()).degree(), Some(0));
            rebuilt = &rebuilt * &f.pow(m as u32);
        }
        prop_assert_eq!(rebuilt, p.monic());
    }

    #[test]
    fn quotient_rule(a in poly(4), b in poly(3).prop_filter("nonconstant", |b| b.degree().unwrap_or(0) > 0)) {
        let f = RationalFunction::normalize(a.clone(), b.clone()).unwrap();
        let g = RationalFunction::normalize(b, Poly::one()).unwrap();
        let fg = &f * &g;
        prop_assert_eq!(fg.derivative(), &(&f.derivative() * &g) + &(&f * &g.derivative()));
    }

    #[test]
    fn principal_parts_recover_partial_fractions(
        terms in proptest::collection::vec((small_int(), 1u32..=3, nonzero()), 1..=4),
    ) {
        let f = RationalFunction::from_partial_fractions(&terms);
        let poles: Vec<Gq> = terms.iter().map(|t| t.0.clone()).collect();
        let mut sum = RationalFunction::zero();
        let mut seen = Vec::new();
        for s in poles {
            if seen.contains(&s) {
                continue;
            }
            seen.push(s.clone());
            let want = terms
                .iter()
                .filter(|t| t.0 == s)
                .fold(RationalFunction::zero(), |acc, t| &acc + &RationalFunction::pole_term(t.2.clone(), s.clone(), t.1));
            let pp = laurent_expand(&f, &Center::Finite(s), 0).unwrap().principal_part().unwrap();
            prop_assert_eq!(&pp, &want);
            sum = &sum + &pp;
        }
        // a proper function is the sum of its principal parts
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn series_square_root_squares_back(g in poly(4).prop_filter("g(0) != 0", |g| !g.coeff(0).is_zero()), n in 2i64..=6) {
        let f = RationalFunction::from_poly(&g * &g);
        let s = laurent_expand(&f, &Center::Finite(Gq::zero()), n).unwrap();
        let r = s.sqrt().unwrap();
        prop_assert_eq!(r.mul(&r).unwrap(), s);
    }
}
