//! Ratios of exp-polynomials with a factored denominator.

use num_complex::Complex64;

use super::mpoly::{Mono, MPoly};
use crate::exact::{find_poles, ComplexField, Field, Gq, PoleLocation, RationalFunction};

/// `num / Π f_i^{m_i}` where `num` and each `f_i` are polynomials in
/// `E_j = e^{w_j x}`, `x` and `k`.
///
/// Denominator factors are kept normalized: smallest `E` exponents zero and
/// leading coefficient one. Units `c·E^m` never appear as factors; they are
/// absorbed into the numerator. After every operation the numerator is
/// divided by each factor as long as the division is exact, so common
/// factors do not accumulate.
#[derive(Clone, Debug)]
pub struct ExpRational {
    rates: Vec<Gq>,
    num: MPoly,
    den: Vec<(MPoly, u32)>,
}

fn factor_key(p: &MPoly) -> String {
    format!("{:?}", p)
}

impl ExpRational {
    pub fn from_poly(rates: Vec<Gq>, num: MPoly) -> Self {
        assert_eq!(rates.len(), num.nvars());
        ExpRational { rates, num, den: Vec::new() }
    }

    pub fn constant(rates: Vec<Gq>, c: Gq) -> Self {
        let n = rates.len();
        ExpRational::from_poly(rates, MPoly::constant(n, c))
    }

    pub fn zero(rates: Vec<Gq>) -> Self {
        ExpRational::constant(rates, Gq::int(0))
    }

    pub fn one(rates: Vec<Gq>) -> Self {
        ExpRational::constant(rates, Gq::int(1))
    }

    /// `num / Π f_i^{m_i}` brought to normal form.
    pub fn new(rates: Vec<Gq>, num: MPoly, den: Vec<(MPoly, u32)>) -> Self {
        let mut out = ExpRational { rates, num, den: Vec::new() };
        for (f, m) in den {
            out.push_factor(f, m);
        }
        out.reduce();
        out
    }

    /// A rational function of `k` alone, with its denominator split into
    /// linear factors where the roots are exact.
    pub fn from_k_function(rates: Vec<Gq>, f: &RationalFunction<Gq>) -> Self {
        let n = rates.len();
        let num = MPoly::from_k_coeffs(n, f.num().coeffs());
        let mut den = Vec::new();
        let mut rest = f.den().clone();
        for (loc, m) in find_poles(f.den()) {
            if let PoleLocation::Exact(s) = loc {
                den.push((MPoly::from_k_coeffs(n, &[-s.clone(), Gq::int(1)]), m as u32));
                let lin = crate::exact::Poly::linear_root(s).pow(m as u32);
                rest = rest.div_rem(&lin).0;
            }
        }
        if !rest.is_constant() {
            den.push((MPoly::from_k_coeffs(n, rest.coeffs()), 1));
        } else {
            let c = rest.coeff(0);
            return ExpRational::new(rates, num.scale(&c.inv()), den);
        }
        ExpRational::new(rates, num, den)
    }

    pub fn rates(&self) -> &[Gq] {
        &self.rates
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(MPoly, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Fully expanded denominator `Π f_i^{m_i}`.
    pub fn den_expanded(&self) -> MPoly {
        self.den.iter().fold(MPoly::one(self.rates.len()), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }

    fn push_factor(&mut self, f: MPoly, m: u32) {
        if m == 0 {
            return;
        }
        assert!(!f.is_zero(), "zero denominator factor");
        let shift = f.min_e();
        let neg: Vec<i32> = shift.iter().map(|a| -a).collect();
        let fs = f.shift_e(&neg);
        let lc = fs.leading().unwrap().1.clone();
        let fnorm = fs.scale(&lc.inv());
        // 1/(lc·E^shift·fnorm)^m
        let unit: Vec<i32> = shift.iter().map(|a| -a * m as i32).collect();
        self.num = self.num.shift_e(&unit).scale(&lc.inv().pow(m));
        if fnorm.as_constant().is_some() {
            return;
        }
        let key = factor_key(&fnorm);
        if let Some(slot) = self.den.iter_mut().find(|(g, _)| factor_key(g) == key) {
            slot.1 += m;
        } else {
            self.den.push((fnorm, m));
            self.den.sort_by_key(|(g, _)| factor_key(g));
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, m) in self.den.iter_mut() {
            while *m > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, m)| *m > 0);
    }

    fn check_rates(&self, o: &ExpRational) {
        assert_eq!(self.rates, o.rates, "exp-rational operands over different exponential bases");
    }

    /// Numerators of `self` and `o` over the least common factored denominator.
    fn common(&self, o: &ExpRational) -> (MPoly, MPoly, Vec<(MPoly, u32)>) {
        let mut den: Vec<(MPoly, u32)> = self.den.clone();
        for (g, m) in &o.den {
            let key = factor_key(g);
            match den.iter_mut().find(|(f, _)| factor_key(f) == key) {
                Some(slot) => slot.1 = slot.1.max(*m),
                None => den.push((g.clone(), *m)),
            }
        }
        let lift = |e: &ExpRational| -> MPoly {
            let mut acc = e.num.clone();
            for (f, m) in &den {
                let have = e.den.iter().find(|(g, _)| factor_key(g) == factor_key(f)).map_or(0, |(_, mm)| *mm);
                acc = acc.mul(&f.pow(m - have));
            }
            acc
        };
        (lift(self), lift(o), den)
    }

    pub fn add(&self, o: &ExpRational) -> ExpRational {
        self.check_rates(o);
        let (a, b, den) = self.common(o);
        ExpRational::new(self.rates.clone(), a.add(&b), den)
    }

    pub fn sub(&self, o: &ExpRational) -> ExpRational {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ExpRational {
        self.scale(&Gq::int(-1))
    }

    pub fn scale(&self, c: &Gq) -> ExpRational {
        let mut out = self.clone();
        out.num = out.num.scale(c);
        out.reduce();
        out
    }

    pub fn mul(&self, o: &ExpRational) -> ExpRational {
        self.check_rates(o);
        let mut den = self.den.clone();
        den.extend(o.den.iter().cloned());
        ExpRational::new(self.rates.clone(), self.num.mul(&o.num), den)
    }

    pub fn mul_poly(&self, p: &MPoly) -> ExpRational {
        ExpRational::new(self.rates.clone(), self.num.mul(p), self.den.clone())
    }

    /// `None` when dividing by zero.
    pub fn div(&self, o: &ExpRational) -> Option<ExpRational> {
        self.check_rates(o);
        if o.is_zero() {
            return None;
        }
        let mut den = self.den.clone();
        den.push((o.num.clone(), 1));
        Some(ExpRational::new(self.rates.clone(), self.num.mul(&o.den_expanded()), den))
    }

    pub fn pow(&self, p: u32) -> ExpRational {
        (0..p).fold(ExpRational::one(self.rates.clone()), |acc, _| acc.mul(self))
    }

    /// `∂/∂x`.
    pub fn derivative_x(&self) -> ExpRational {
        // (N/Πf^m)' = (N'·Πf − N·Σ m_i f_i' Π_{j≠i} f_j) / Πf^{m+1}
        let n = self.rates.len();
        let prod = self.den.iter().fold(MPoly::one(n), |acc, (f, _)| acc.mul(f));
        let mut num = self.num.derivative_x(&self.rates).mul(&prod);
        for (i, (f, m)) in self.den.iter().enumerate() {
            let others = self
                .den
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(MPoly::one(n), |acc, (_, (g, _))| acc.mul(g));
            let t = self.num.mul(&f.derivative_x(&self.rates)).mul(&others).scale(&Gq::int(*m as i64));
            num = num.sub(&t);
        }
        let den = self.den.iter().map(|(f, m)| (f.clone(), m + 1)).collect();
        ExpRational::new(self.rates.clone(), num, den)
    }

    /// Substitutes an exact value for `k`.
    pub fn subs_k(&self, k: &Gq) -> ExpRational {
        let den = self.den.iter().map(|(f, m)| (f.subs_k(k), *m)).collect();
        ExpRational::new(self.rates.clone(), self.num.subs_k(k), den)
    }

    /// Exact equality as functions: cross-multiplied numerators agree.
    pub fn equals(&self, o: &ExpRational) -> bool {
        self.rates == o.rates && self.num.mul(&o.den_expanded()) == o.num.mul(&self.den_expanded())
    }

    pub fn rates_c64(&self) -> Vec<Complex64> {
        self.rates.iter().map(|w| w.to_c64()).collect()
    }

    /// Same function over an enlarged basis `new_rates`, each old rate being
    /// an integer multiple of one of the new rates.
    pub fn rebase(&self, new_rates: &[Gq]) -> Option<ExpRational> {
        let mut map = Vec::with_capacity(self.rates.len());
        for w in &self.rates {
            let hit = new_rates.iter().enumerate().find_map(|(j, v)| {
                if v.is_zero() {
                    return None;
                }
                let q = w.clone() / v.clone();
                q.as_i64().map(|p| (j, p as i32))
            })?;
            map.push(hit);
        }
        let n = new_rates.len();
        let conv = |p: &MPoly| -> MPoly {
            let mut out = MPoly::zero(n);
            for (m, c) in p.terms() {
                let mut e = vec![0i32; n];
                for (i, &pi) in m.e.iter().enumerate() {
                    let (j, mult) = map[i];
                    e[j] += pi * mult;
                }
                out.add_term(Mono { e, x: m.x, k: m.k }, c.clone());
            }
            out
        };
        let den = self.den.iter().map(|(f, m)| (conv(f), *m)).collect();
        Some(ExpRational::new(new_rates.to_vec(), conv(&self.num), den))
    }
}

impl PartialEq for ExpRational {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}
