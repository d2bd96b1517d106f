//! Truncated Laurent series at a finite point or at infinity.
//!
//! A series is stored in its local parameter `t` (`t = x − s` at a finite
//! point, `t = 1/x` at infinity). Every series carries the last order through
//! which its coefficients are guaranteed; arithmetic propagates that bound and
//! consumers asking for more get [`ExactError::InsufficientPrecision`].

use std::fmt;

use super::poly::Poly;
use super::ratfunc::RationalFunction;
use super::scalar::{ComplexField, Field};
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
pub enum Center<F> {
    Finite(F),
    Infinity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<F: Field> {
    center: Center<F>,
    /// Order (in `t`) of `coeffs[0]`; equal to `truncation + 1` for a series
    /// known only to vanish.
    min_order: i64,
    coeffs: Vec<F>,
    truncation: i64,
}

impl<F: Field> LaurentSeries<F> {
    /// Builds a series from coefficients of consecutive orders starting at `min_order`,
    /// valid through `truncation`. Extra coefficients beyond `truncation` are dropped.
    pub fn new(center: Center<F>, min_order: i64, mut coeffs: Vec<F>, truncation: i64) -> Self {
        let keep = (truncation - min_order + 1).max(0) as usize;
        coeffs.truncate(keep);
        while coeffs.len() < keep {
            coeffs.push(F::zero());
        }
        let mut s = LaurentSeries { center, min_order, coeffs, truncation };
        s.strip();
        s
    }

    /// The series `O(t^(truncation+1))`.
    pub fn zero(center: Center<F>, truncation: i64) -> Self {
        LaurentSeries { center, min_order: truncation + 1, coeffs: Vec::new(), truncation }
    }

    fn strip(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_order += lead as i64;
        }
    }

    pub fn center(&self) -> &Center<F> {
        &self.center
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Order of the first nonzero coefficient, `None` if the series vanishes
    /// through its truncation order.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_order)
        }
    }

    pub fn leading_coeff(&self) -> Option<F> {
        self.coeffs.first().cloned()
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^n`.
    pub fn coeff(&self, n: i64) -> Result<F, ExactError> {
        if n > self.truncation {
            return Err(ExactError::InsufficientPrecision { needed: n, available: self.truncation });
        }
        if n < self.min_order {
            return Ok(F::zero());
        }
        Ok(self.coeffs[(n - self.min_order) as usize].clone())
    }

    /// Coefficient of `x^p` at infinity, or of `(x − s)^p` at a finite point.
    pub fn x_power_coeff(&self, p: i64) -> Result<F, ExactError> {
        match self.center {
            Center::Infinity => self.coeff(-p),
            Center::Finite(_) => self.coeff(p),
        }
    }

    /// Requires that the series is known through order `n`.
    pub fn require(&self, n: i64) -> Result<(), ExactError> {
        if n > self.truncation {
            Err(ExactError::InsufficientPrecision { needed: n, available: self.truncation })
        } else {
            Ok(())
        }
    }

    fn check_center(&self, o: &Self) -> Result<(), ExactError> {
        if self.center != o.center {
            Err(ExactError::CenterMismatch)
        } else {
            Ok(())
        }
    }

    /// Drops every coefficient above order `n`.
    pub fn truncate(&self, n: i64) -> Self {
        let t = n.min(self.truncation);
        Self::new(self.center.clone(), self.min_order, self.coeffs.clone(), t)
    }

    pub fn add(&self, o: &Self) -> Result<Self, ExactError> {
        self.check_center(o)?;
        let t = self.truncation.min(o.truncation);
        let lo = self.min_order.min(o.min_order).min(t + 1);
        let v = (lo..=t).map(|n| self.coeff(n).unwrap() + o.coeff(n).unwrap()).collect();
        Ok(Self::new(self.center.clone(), lo, v, t))
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            center: self.center.clone(),
            min_order: self.min_order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            truncation: self.truncation,
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(
            self.center.clone(),
            self.min_order,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            self.truncation,
        )
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.check_center(o)?;
        let va = self.min_order;
        let vb = o.min_order;
        let t = (self.truncation + vb).min(o.truncation + va);
        let lo = va + vb;
        if lo > t {
            return Ok(Self::zero(self.center.clone(), t));
        }
        let mut v = vec![F::zero(); (t - lo + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx < v.len() {
                    let s = v[idx].clone() + a.clone() * b.clone();
                    v[idx] = s;
                }
            }
        }
        Ok(Self::new(self.center.clone(), lo, v, t))
    }

    /// Multiplicative inverse; the relative precision is preserved.
    pub fn inv(&self) -> Result<Self, ExactError> {
        let v = self.valuation().ok_or(ExactError::ZeroSeries)?;
        let rel = self.truncation - v;
        let c0 = self.coeffs[0].clone();
        let n = (rel + 1) as usize;
        let mut q: Vec<F> = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = if j == 0 { F::one() } else { F::zero() };
            for i in 1..=j {
                let ai = self.coeffs.get(i).cloned().unwrap_or_else(F::zero);
                acc = acc - ai * q[j - i].clone();
            }
            q.push(acc / c0.clone());
        }
        Ok(Self::new(self.center.clone(), -v, q, -v + rel))
    }

    pub fn div(&self, o: &Self) -> Result<Self, ExactError> {
        self.mul(&o.inv()?)
    }

    /// Writes `self = lead · g²` with `g` monic at order `valuation/2`.
    /// Only field operations are needed, so `g` always exists.
    pub fn normalized_sqrt(&self) -> Result<(F, Self), ExactError> {
        let v = self.valuation().ok_or(ExactError::ZeroSeries)?;
        if v % 2 != 0 {
            return Err(ExactError::OddLeadingOrder(v));
        }
        let rel = self.truncation - v;
        let lead = self.coeffs[0].clone();
        let h: Vec<F> = self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect();
        let two = F::from_i64(2);
        let n = (rel + 1) as usize;
        let mut g: Vec<F> = Vec::with_capacity(n);
        g.push(F::one());
        for m in 1..n {
            let mut acc = h.get(m).cloned().unwrap_or_else(F::zero);
            for j in 1..m {
                acc = acc - g[j].clone() * g[m - j].clone();
            }
            g.push(acc / two.clone());
        }
        Ok((lead, Self::new(self.center.clone(), v / 2, g, v / 2 + rel)))
    }

    /// Sum of the terms of negative order, as a rational function of `x`
    /// (the polynomial part when the center is infinity).
    pub fn principal_part(&self) -> Result<RationalFunction<F>, ExactError> {
        self.require(-1)?;
        let mut out = RationalFunction::zero();
        for n in self.min_order..0 {
            let c = self.coeff(n)?;
            if c.is_zero() {
                continue;
            }
            let term = match &self.center {
                Center::Finite(s) => RationalFunction::pole_term(c, s.clone(), (-n) as u32),
                Center::Infinity => RationalFunction::from_poly(Poly::monomial(c, (-n) as usize)),
            };
            out = &out + &term;
        }
        Ok(out)
    }
}

impl<F: ComplexField> LaurentSeries<F> {
    /// Principal-branch square root; fails when the leading coefficient has no
    /// square root in the field.
    pub fn sqrt(&self) -> Result<Self, ExactError> {
        let (lead, g) = self.normalized_sqrt()?;
        let root = lead.sqrt_principal().ok_or_else(|| ExactError::NoExactSqrt(format!("{:?}", lead)))?;
        Ok(g.scale(&root))
    }
}

/// Laurent expansion of `f` at `at`, through order `through` of the local parameter.
pub fn laurent_expand<F: Field>(
    f: &RationalFunction<F>,
    at: &Center<F>,
    through: i64,
) -> Result<LaurentSeries<F>, ExactError> {
    if f.is_zero() {
        return Ok(LaurentSeries::zero(at.clone(), through));
    }
    // f = t^shift · a(t)/b(t) with b(0) ≠ 0.
    let (shift, a, b) = match at {
        Center::Finite(s) => {
            let n = f.num().shift(s);
            let d = f.den().shift(s);
            let zn = n.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
            let zd = d.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
            (zn as i64 - zd as i64, n.coeffs()[zn..].to_vec(), d.coeffs()[zd..].to_vec())
        }
        Center::Infinity => {
            let dn = f.num().degree().unwrap();
            let dd = f.den().degree().unwrap_or(0);
            (dd as i64 - dn as i64, f.num().reversed(dn), f.den().reversed(dd))
        }
    };
    if through < shift {
        return Ok(LaurentSeries::zero(at.clone(), through));
    }
    let n = (through - shift + 1) as usize;
    let mut q: Vec<F> = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = a.get(j).cloned().unwrap_or_else(F::zero);
        for i in 1..=j.min(b.len().saturating_sub(1)) {
            acc = acc - b[i].clone() * q[j - i].clone();
        }
        q.push(acc / b[0].clone());
    }
    Ok(LaurentSeries::new(at.clone(), shift, q, through))
}

pub fn series_sqrt<F: ComplexField>(s: &LaurentSeries<F>) -> Result<LaurentSeries<F>, ExactError> {
    s.sqrt()
}

impl<F: Field + fmt::Display> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |n: i64| -> String {
            match &self.center {
                Center::Infinity => format!("x^{}", -n),
                Center::Finite(s) => format!("(x-{})^{}", s, n),
            }
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(f, "{}*{} + ", c, var(self.min_order + i as i64))?;
        }
        write!(f, "O({})", var(self.truncation + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::Gq;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction<Gq> {
        RationalFunction::normalize(
            Poly::new(num.iter().map(|&n| Gq::int(n)).collect()),
            Poly::new(den.iter().map(|&n| Gq::int(n)).collect()),
        )
        .unwrap()
    }

    #[test]
    fn simple_pole_at_origin() {
        let s = laurent_expand(&rf(&[1], &[0, 1]), &Center::Finite(Gq::int(0)), 3).unwrap();
        assert_eq!(s.valuation(), Some(-1));
        assert_eq!(s.coeff(-1).unwrap(), Gq::int(1));
        for n in 0..=3 {
            assert_eq!(s.coeff(n).unwrap(), Gq::int(0));
        }
    }

    #[test]
    fn double_pole_coefficient() {
        // -2/(x-1)^2
        let f = rf(&[-2], &[1, -2, 1]);
        let s = laurent_expand(&f, &Center::Finite(Gq::int(1)), 2).unwrap();
        assert_eq!(s.coeff(-2).unwrap(), Gq::int(-2));
        assert_eq!(s.coeff(-1).unwrap(), Gq::int(0));
    }

    #[test]
    fn sqrt_at_infinity() {
        // 1 + 2/x = (x+2)/x; through x^-2.
        let f = rf(&[2, 1], &[0, 1]);
        let s = laurent_expand(&f, &Center::Infinity, 2).unwrap();
        let r = s.sqrt().unwrap();
        assert_eq!(r.x_power_coeff(0).unwrap(), Gq::int(1));
        assert_eq!(r.x_power_coeff(-1).unwrap(), Gq::int(1));
        assert_eq!(r.x_power_coeff(-2).unwrap(), Gq::frac(-1, 2));
        let sq = r.mul(&r).unwrap();
        for n in 0..=2 {
            assert_eq!(sq.coeff(n).unwrap(), s.coeff(n).unwrap());
        }
        assert!(sq.coeff(3).is_err());
    }

    #[test]
    fn constant_four_has_root_two() {
        let s = laurent_expand(&rf(&[4], &[1]), &Center::Infinity, 3).unwrap();
        assert_eq!(s.sqrt().unwrap().coeff(0).unwrap(), Gq::int(2));
    }

    #[test]
    fn odd_order_rejected() {
        let s = laurent_expand(&rf(&[1], &[0, 1]), &Center::Finite(Gq::int(0)), 3).unwrap();
        assert_eq!(s.sqrt().unwrap_err(), ExactError::OddLeadingOrder(-1));
    }

    #[test]
    fn precision_loss_is_loud() {
        let s = laurent_expand(&rf(&[1], &[1, 1]), &Center::Finite(Gq::int(0)), 2).unwrap();
        assert!(matches!(s.coeff(3), Err(ExactError::InsufficientPrecision { .. })));
        let p = s.mul(&laurent_expand(&rf(&[1], &[0, 1]), &Center::Finite(Gq::int(0)), 5).unwrap()).unwrap();
        // (1 + O(t^3)) · (1/t) is known only through t^1
        assert_eq!(p.truncation(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let s = laurent_expand(&rf(&[1, 3, 0, 1], &[0, 0, 2, 1]), &Center::Finite(Gq::int(0)), 6).unwrap();
        let one = s.mul(&s.inv().unwrap()).unwrap();
        assert_eq!(one.coeff(0).unwrap(), Gq::int(1));
        for n in 1..=one.truncation() {
            assert_eq!(one.coeff(n).unwrap(), Gq::int(0));
        }
    }
}
