//! Sparse polynomials in `E_1 … E_n` (Laurent), `x` and the spectral parameter `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::exact::{ComplexField, Field, Gq};

/// Exponents of `E_1 … E_n`, `x` and `k`. The derived order is lexicographic
/// in `(E_1, …, E_n, x, k)`, which is the monomial order used for division.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub e: Vec<i32>,
    pub x: u32,
    pub k: u32,
}

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono { e: vec![0; n], x: 0, k: 0 }
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono { e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(), x: self.x + o.x, k: self.k + o.k }
    }

    fn divides(&self, o: &Mono) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| a <= b) && self.x <= o.x && self.k <= o.k
    }

    fn quotient(&self, d: &Mono) -> Mono {
        Mono { e: self.e.iter().zip(&d.e).map(|(a, b)| a - b).collect(), x: self.x - d.x, k: self.k - d.k }
    }

    pub fn is_e_only(&self) -> bool {
        self.x == 0 && self.k == 0
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    n: usize,
    terms: BTreeMap<Mono, Gq>,
}

impl MPoly {
    pub fn zero(n: usize) -> Self {
        MPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Gq) -> Self {
        MPoly::term(Mono::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        MPoly::constant(n, Gq::int(1))
    }

    pub fn term(m: Mono, c: Gq) -> Self {
        let n = m.e.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { n, terms }
    }

    pub fn x(n: usize) -> Self {
        MPoly::term(Mono { e: vec![0; n], x: 1, k: 0 }, Gq::int(1))
    }

    pub fn k(n: usize) -> Self {
        MPoly::term(Mono { e: vec![0; n], x: 0, k: 1 }, Gq::int(1))
    }

    /// `E_j^p`.
    pub fn e_pow(n: usize, j: usize, p: i32) -> Self {
        let mut e = vec![0; n];
        e[j] = p;
        MPoly::term(Mono { e, x: 0, k: 0 }, Gq::int(1))
    }

    /// Polynomial in `k` alone from coefficients, lowest first.
    pub fn from_k_coeffs(n: usize, coeffs: &[Gq]) -> Self {
        let mut p = MPoly::zero(n);
        for (d, c) in coeffs.iter().enumerate() {
            p.add_term(Mono { e: vec![0; n], x: 0, k: d as u32 }, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Gq)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variables at all.
    pub fn as_constant(&self) -> Option<Gq> {
        match self.terms.len() {
            0 => Some(Gq::int(0)),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (*m == Mono::one(self.n)).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((m, c))` when the polynomial is `c·E^m`, a unit of the ring.
    pub fn as_unit(&self) -> Option<(Vec<i32>, Gq)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        m.is_e_only().then(|| (m.e.clone(), c.clone()))
    }

    pub fn leading(&self) -> Option<(&Mono, &Gq)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Mono, c: Gq) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&Gq::int(-1))
    }

    pub fn scale(&self, c: &Gq) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.n);
        }
        MPoly { n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &Gq) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.n);
        }
        MPoly { n: self.n, terms: self.terms.iter().map(|(a, v)| (a.mul(m), v.clone() * c.clone())).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.n);
        for (a, c) in &o.terms {
            for (b, d) in &self.terms {
                out.add_term(a.mul(b), c.clone() * d.clone());
            }
        }
        out
    }

    pub fn pow(&self, p: u32) -> MPoly {
        let mut acc = MPoly::one(self.n);
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `E^shift`.
    pub fn shift_e(&self, shift: &[i32]) -> MPoly {
        let m = Mono { e: shift.to_vec(), x: 0, k: 0 };
        self.mul_term(&m, &Gq::int(1))
    }

    /// Componentwise minimum of the `E` exponents (zeros for the zero polynomial).
    pub fn min_e(&self) -> Vec<i32> {
        let mut out: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            out = Some(match out {
                None => m.e.clone(),
                Some(v) => v.iter().zip(&m.e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        out.unwrap_or_else(|| vec![0; self.n])
    }

    pub fn max_x(&self) -> u32 {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn max_k(&self) -> u32 {
        self.terms.keys().map(|m| m.k).max().unwrap_or(0)
    }

    pub fn has_e(&self) -> bool {
        self.terms.keys().any(|m| m.e.iter().any(|&p| p != 0))
    }

    /// `∂/∂x` with `∂E_j/∂x = w_j E_j`.
    pub fn derivative_x(&self, rates: &[Gq]) -> MPoly {
        let mut out = MPoly::zero(self.n);
        for (m, c) in &self.terms {
            let w = m.e.iter().zip(rates).fold(Gq::int(0), |acc, (&p, r)| acc + Gq::int(p as i64) * r.clone());
            out.add_term(m.clone(), c.clone() * w);
            if m.x > 0 {
                let mut d = m.clone();
                d.x -= 1;
                out.add_term(d, c.clone() * Gq::int(m.x as i64));
            }
        }
        out
    }

    /// Exact quotient up to a unit `E^m`: returns `q` with `self = d·q` when it exists.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(self.n));
        }
        let sp = self.min_e();
        let sd = d.min_e();
        let neg = |v: &[i32]| v.iter().map(|a| -a).collect::<Vec<_>>();
        let mut r = self.shift_e(&neg(&sp));
        let ds = d.shift_e(&neg(&sd));
        let (lm_d, lc_d) = {
            let (m, c) = ds.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut q = MPoly::zero(self.n);
        while let Some((lm, lc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm_d.divides(&lm) {
                return None;
            }
            let t = lm.quotient(&lm_d);
            let c = lc / lc_d.clone();
            r = r.sub(&ds.mul_term(&t, &c));
            q.add_term(t, c);
        }
        let back: Vec<i32> = sp.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Some(q.shift_e(&back))
    }

    /// Coefficients, lowest power of `k` first, of the monomial `E^e x^x`.
    pub fn k_coefficient(&self, e: &[i32], x: u32) -> Vec<Gq> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m.e == e && m.x == x {
                let d = m.k as usize;
                if out.len() <= d {
                    out.resize(d + 1, Gq::int(0));
                }
                out[d] = c.clone();
            }
        }
        out
    }

    /// Substitutes a value for `k`.
    pub fn subs_k(&self, k: &Gq) -> MPoly {
        let mut out = MPoly::zero(self.n);
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            mm.k = 0;
            out.add_term(mm, c.clone() * k.pow(m.k));
        }
        out
    }

    /// Scaled evaluation. Returns `(v, s, a)` with the value equal to `v·e^s`
    /// and `a` the sum of term magnitudes on the same scale, so `|v|/a`
    /// measures cancellation.
    pub fn eval_scaled(&self, rates: &[Complex64], x: Complex64, k: Complex64) -> (Complex64, f64, f64) {
        if self.terms.is_empty() {
            return (Complex64::new(0.0, 0.0), 0.0, 0.0);
        }
        let exps: Vec<Complex64> = self
            .terms
            .keys()
            .map(|m| m.e.iter().zip(rates).fold(Complex64::new(0.0, 0.0), |acc, (&p, w)| acc + w * (p as f64)) * x)
            .collect();
        let s = exps.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let mut v = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for ((m, c), z) in self.terms.iter().zip(&exps) {
            let t = c.to_c64() * (z - s).exp() * x.powu(m.x) * k.powu(m.k);
            v += t;
            a += t.norm();
        }
        (v, s, a)
    }

    pub fn eval(&self, rates: &[Complex64], x: Complex64, k: Complex64) -> Complex64 {
        let (v, s, _) = self.eval_scaled(rates, x, k);
        v * s.exp()
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly{{")?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*E{:?}x^{}k^{}", c, m.e, m.x, m.k)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: i32) -> MPoly {
        MPoly::e_pow(1, 0, p)
    }

    #[test]
    fn exact_division_recovers_factor() {
        // (1 + E + xE)(E² − 3k) / (1 + E + xE)
        let a = MPoly::one(1).add(&e(1)).add(&e(1).mul(&MPoly::x(1)));
        let b = e(2).sub(&MPoly::k(1).scale(&Gq::int(3)));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn division_up_to_exponential_units() {
        let a = MPoly::one(1).sub(&e(1));
        let p = a.mul(&e(-3));
        assert_eq!(p.div_exact(&a).unwrap(), e(-3));
    }

    #[test]
    fn derivative_follows_exponential_rule() {
        // d/dx (x·E) with E = e^{-2x} is E − 2xE
        let p = MPoly::x(1).mul(&e(1));
        let d = p.derivative_x(&[Gq::int(-2)]);
        assert_eq!(d, e(1).sub(&p.scale(&Gq::int(2))));
    }

    #[test]
    fn scaled_evaluation_survives_large_exponents() {
        let p = e(1).add(&MPoly::one(1));
        let (v, s, _) = p.eval_scaled(&[Complex64::new(2.0, 0.0)], Complex64::new(400.0, 0.0), Complex64::new(0.0, 0.0));
        assert!((s - 800.0).abs() < 1e-12 && (v.re - 1.0).abs() < 1e-12);
    }
}
