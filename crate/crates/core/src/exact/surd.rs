//! Quadratic surds over ℚ(i): `q + Σ c_j √n_j`.
//!
//! Radicands are normalized squarefree positive integers whenever possible.
//! Square roots of distinct squarefree integers are linearly independent over
//! ℚ(i), so for such surds rationality and integrality are decided exactly.
//! A Gaussian rational with no square root of that shape is kept as an opaque
//! radicand and decisions involving it fall back to numerics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::scalar::{square_free_split, ComplexField, Field, Gq};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Radicand {
    /// Squarefree integer ≥ 2.
    Int(BigInt),
    /// Gaussian rational whose principal root is not expressible over integer radicands.
    Opaque(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Copy)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, PartialEq)]
pub struct Surd {
    rational: Gq,
    terms: BTreeMap<Radicand, Gq>,
    /// Values of opaque radicands, keyed by their display form.
    opaque: BTreeMap<String, Gq>,
}

impl Surd {
    pub fn rational(q: Gq) -> Self {
        Surd { rational: q, terms: BTreeMap::new(), opaque: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Surd::rational(Gq::int(0))
    }

    /// Principal square root of `z`.
    pub fn sqrt(z: &Gq) -> Self {
        if let Some(r) = z.sqrt_exact() {
            return Surd::rational(r);
        }
        if z.is_real() {
            let q = z.re.abs();
            // √(n/d) = √(n·d)/d
            let nd = q.numer() * q.denom();
            let (m, s, certified) = square_free_split(&nd);
            let coef = BigRational::new(m, q.denom().clone());
            let c = if z.re.is_negative() { Gq::imag(coef) } else { Gq::real(coef) };
            if certified {
                return Surd::single(c, Radicand::Int(s));
            }
            let inner = Gq::real(BigRational::from_integer(s));
            return Surd::opaque_term(c, inner);
        }
        Surd::opaque_term(Gq::int(1), z.clone())
    }

    fn single(c: Gq, r: Radicand) -> Self {
        let mut s = Surd::zero();
        if !c.is_zero() {
            s.terms.insert(r, c);
        }
        s
    }

    fn opaque_term(c: Gq, z: Gq) -> Self {
        let key = format!("{}", z);
        let mut s = Surd::single(c, Radicand::Opaque(key.clone()));
        s.opaque.insert(key, z);
        s
    }

    pub fn rational_part(&self) -> &Gq {
        &self.rational
    }

    pub fn is_exact(&self) -> bool {
        self.terms.keys().all(|r| matches!(r, Radicand::Int(_)))
    }

    pub fn as_rational(&self) -> Option<Gq> {
        if self.terms.is_empty() {
            Some(self.rational.clone())
        } else {
            None
        }
    }

    fn radicand_value(&self, r: &Radicand) -> Complex64 {
        match r {
            Radicand::Int(n) => Complex64::new(Gq::real(BigRational::from_integer(n.clone())).to_c64().re.sqrt(), 0.0),
            Radicand::Opaque(k) => self.opaque[k].to_c64().sqrt_principal().unwrap(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        self.terms.iter().fold(self.rational.to_c64(), |acc, (r, c)| acc + c.to_c64() * self.radicand_value(r))
    }

    fn combine(mut self, o: &Surd, sign: i64) -> Surd {
        self.rational = self.rational + o.rational.clone() * Gq::int(sign);
        for (r, c) in &o.terms {
            let e = self.terms.entry(r.clone()).or_insert_with(|| Gq::int(0));
            *e = e.clone() + c.clone() * Gq::int(sign);
        }
        self.terms.retain(|_, c| !c.is_zero());
        for (k, v) in &o.opaque {
            self.opaque.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn add(&self, o: &Surd) -> Surd {
        self.clone().combine(o, 1)
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        self.clone().combine(o, -1)
    }

    pub fn neg(&self) -> Surd {
        self.scale(&Gq::int(-1))
    }

    pub fn scale(&self, c: &Gq) -> Surd {
        if c.is_zero() {
            return Surd::zero();
        }
        Surd {
            rational: self.rational.clone() * c.clone(),
            terms: self.terms.iter().map(|(r, v)| (r.clone(), v.clone() * c.clone())).collect(),
            opaque: self.opaque.clone(),
        }
    }

    /// Division by a surd with a single term (`c` or `c√n`), which is all the
    /// κ recipes need. Returns `None` for general divisors or products of two
    /// opaque radicands.
    pub fn div(&self, d: &Surd) -> Option<Surd> {
        if let Some(q) = d.as_rational() {
            if q.is_zero() {
                return None;
            }
            return Some(self.scale(&q.inv()));
        }
        if !d.rational.is_zero() || d.terms.len() != 1 {
            return None;
        }
        let (r, c) = d.terms.iter().next().unwrap();
        // x/(c√z) = x·√z/(c·z)
        let z = match r {
            Radicand::Int(n) => Gq::real(BigRational::from_integer(n.clone())),
            Radicand::Opaque(k) => d.opaque[k].clone(),
        };
        let denom = (c.clone() * z.clone()).inv();
        let mut out = Surd::zero();
        let root_d = Surd::single(Gq::int(1), r.clone());
        let root_d = Surd { opaque: d.opaque.clone(), ..root_d };
        out = out.add(&root_d.scale(&(self.rational.clone() * denom.clone())));
        for (rr, cc) in &self.terms {
            let prod = match (rr, r) {
                (Radicand::Int(a), Radicand::Int(b)) => {
                    // √a·√b = √(ab), both positive
                    let ab = a * b;
                    let (m, s, certified) = square_free_split(&ab);
                    if !certified {
                        return None;
                    }
                    let m = Gq::real(BigRational::from_integer(m));
                    if s.is_one() {
                        Surd::rational(m)
                    } else {
                        Surd::single(m, Radicand::Int(s))
                    }
                }
                (Radicand::Int(a), Radicand::Opaque(k)) | (Radicand::Opaque(k), Radicand::Int(a)) => {
                    let zz = if let Some(v) = d.opaque.get(k) { v.clone() } else { self.opaque[k].clone() };
                    Surd::opaque_term(Gq::int(1), zz * Gq::real(BigRational::from_integer(a.clone())))
                }
                _ => return None,
            };
            out = out.add(&prod.scale(&(cc.clone() * denom.clone())));
        }
        Some(out)
    }

    /// Whether the value is a rational number.
    pub fn is_rational(&self) -> Decision {
        if self.terms.is_empty() {
            return Decision::Yes;
        }
        if self.is_exact() {
            return Decision::No;
        }
        let irr = self.sub(&Surd::rational(self.rational.clone())).to_c64();
        if irr.norm() > 1e-9 * (1.0 + self.to_c64().norm()) {
            Decision::No
        } else {
            Decision::Unknown
        }
    }

    /// Whether the value lies in ℕ₀ = {0, 1, 2, …}.
    pub fn is_nonneg_integer(&self) -> Decision {
        match self.is_rational() {
            Decision::Yes => {
                let ok = self.rational.as_integer().is_some_and(|n| !n.is_negative());
                if ok {
                    Decision::Yes
                } else {
                    Decision::No
                }
            }
            Decision::No => Decision::No,
            Decision::Unknown => {
                let v = self.to_c64();
                let near = v.re.round();
                if v.im.abs() > 1e-9 || near < 0.0 || (v.re - near).abs() > 1e-9 {
                    Decision::No
                } else {
                    Decision::Unknown
                }
            }
        }
    }

    /// Whether the value is an integer (any sign); used for the E_s families.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().and_then(|q| q.as_integer())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.rational.is_zero() || self.terms.is_empty() {
            parts.push(format!("{}", self.rational));
        }
        for (r, c) in &self.terms {
            let rad = match r {
                Radicand::Int(n) => format!("sqrt({})", n),
                Radicand::Opaque(k) => format!("sqrt({})", k),
            };
            if c.is_one() {
                parts.push(rad);
            } else {
                parts.push(format!("{}*{}", c, rad));
            }
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_collapse() {
        assert_eq!(Surd::sqrt(&Gq::frac(9, 4)).as_rational(), Some(Gq::frac(3, 2)));
        assert_eq!(Surd::sqrt(&Gq::frac(-1, 4)).as_rational(), Some(Gq::cplx((0, 1), (1, 2))));
    }

    #[test]
    fn irrational_root_normalized() {
        // √(-4/3) = (2/3)·i·√3
        let s = Surd::sqrt(&Gq::frac(-4, 3));
        assert!(s.is_exact());
        assert_eq!(format!("{}", s), "2/3*i*sqrt(3)");
        let v = s.to_c64();
        assert!((v - Complex64::new(0.0, (4.0f64 / 3.0).sqrt())).norm() < 1e-14);
    }

    #[test]
    fn integrality_decisions() {
        let half = Surd::rational(Gq::frac(1, 2));
        let r = half.add(&Surd::sqrt(&Gq::int(2)).scale(&Gq::frac(1, 2)));
        assert_eq!(r.is_nonneg_integer(), Decision::No);
        let back = r.sub(&Surd::sqrt(&Gq::int(8)).scale(&Gq::frac(1, 4)));
        assert_eq!(back.as_rational(), Some(Gq::frac(1, 2)));
        assert_eq!(Surd::rational(Gq::int(3)).is_nonneg_integer(), Decision::Yes);
        assert_eq!(Surd::rational(Gq::int(-3)).is_nonneg_integer(), Decision::No);
    }

    #[test]
    fn division_by_single_term() {
        let a = Surd::sqrt(&Gq::int(-3));
        let q = Surd::rational(Gq::int(1)).div(&a).unwrap();
        assert!((q.to_c64() - Complex64::new(1.0, 0.0) / Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-14);
        let b = Surd::sqrt(&Gq::int(6)).div(&Surd::sqrt(&Gq::int(2))).unwrap();
        assert_eq!(b.to_c64().re, 3f64.sqrt());
    }
}
