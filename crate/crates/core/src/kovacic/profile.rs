use std::cmp::Ordering;

use serde_json::{json, Value};

use super::KovacicError;
use crate::exact::{find_poles, Gq, PoleLocation, RationalFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct PoleProfile {
    /// Pole locations with their orders, sorted by real then imaginary part.
    pub poles: Vec<(Gq, u32)>,
    /// `deg den − deg num`.
    pub order_at_infinity: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NecessaryConditions {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

pub(crate) fn cmp_gq(a: &Gq, b: &Gq) -> Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

pub fn pole_profile(r: &RationalFunction<Gq>) -> Result<PoleProfile, KovacicError> {
    if r.is_constant() {
        return Err(KovacicError::ConstantR);
    }
    let mut poles = Vec::new();
    for (loc, m) in find_poles(r.den()) {
        match loc {
            PoleLocation::Exact(g) => poles.push((g, m as u32)),
            PoleLocation::Approx(z) => return Err(KovacicError::InexactPole(format!("{}", z))),
        }
    }
    poles.sort_by(|a, b| cmp_gq(&a.0, &b.0));
    Ok(PoleProfile { poles, order_at_infinity: r.order_at_infinity() })
}

pub fn necessary_conditions(p: &PoleProfile) -> NecessaryConditions {
    let oi = p.order_at_infinity;
    let a = p.poles.iter().all(|&(_, o)| o == 1 || o % 2 == 0) && !(oi % 2 != 0 && oi < 2);
    let b = p.poles.iter().any(|&(_, o)| o == 2 || (o > 2 && o % 2 == 1));
    let c = p.poles.iter().all(|&(_, o)| o <= 2) && oi > 1;
    NecessaryConditions { a, b, c }
}

impl PoleProfile {
    pub fn to_json(&self) -> Value {
        json!({
            "poles": self.poles.iter().map(|(s, o)| json!({"at": format!("{}", s), "order": o})).collect::<Vec<_>>(),
            "order_at_infinity": self.order_at_infinity,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Poly;

    fn profile(poles: &[u32], oi: i64) -> PoleProfile {
        PoleProfile { poles: poles.iter().enumerate().map(|(i, &o)| (Gq::int(i as i64), o)).collect(), order_at_infinity: oi }
    }

    #[test]
    fn simple_pole_profile() {
        let r = RationalFunction::normalize(Poly::one(), Poly::x()).unwrap();
        let p = pole_profile(&r).unwrap();
        assert_eq!(p.poles, vec![(Gq::int(0), 1)]);
        assert_eq!(p.order_at_infinity, 1);
    }

    #[test]
    fn constant_rejected() {
        assert_eq!(pole_profile(&RationalFunction::constant(Gq::int(-4))), Err(KovacicError::ConstantR));
    }

    #[test]
    fn condition_table() {
        let n = necessary_conditions(&profile(&[3], 0));
        assert_eq!((n.a, n.b, n.c), (false, true, false));
        let n = necessary_conditions(&profile(&[1], 2));
        assert_eq!((n.a, n.b, n.c), (true, false, true));
        let n = necessary_conditions(&profile(&[2, 2], 0));
        assert_eq!((n.a, n.b, n.c), (true, true, false));
        // order one at infinity is odd and below two
        assert!(!necessary_conditions(&profile(&[2], 1)).a);
    }
}
