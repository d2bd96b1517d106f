//! Dense univariate polynomials over a [`Field`], lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::scalar::{ComplexField, Field};

#[derive(Clone, PartialEq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    /// `c·x^n`.
    pub fn monomial(c: F, n: usize) -> Self {
        let mut v = vec![F::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }

    /// `x - s`.
    pub fn linear_root(s: F) -> Self {
        Poly::new(vec![-s, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> F {
        self.coeffs.get(n).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().inv();
        self.scale(&l)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c.clone() * F::from_i64(n as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let lc = d.leading();
        let mut q = vec![F::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = r[i - dd + j].clone() - c.clone() * dj.clone();
                r[i - dd + j] = t;
            }
            r[i] = F::zero();
            q[i - dd] = c;
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p(x + s)` via repeated synthetic division (Taylor shift).
    pub fn shift(&self, s: &F) -> Poly<F> {
        let n = self.coeffs.len();
        let mut c = self.coeffs.clone();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j].clone() + s.clone() * c[j + 1].clone();
                c[j] = t;
            }
        }
        Poly::new(c)
    }

    /// Coefficients reversed with respect to `x^n`: `x^n p(1/x)`.
    pub fn reversed(&self, n: usize) -> Vec<F> {
        let mut v = vec![F::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        v
    }

    /// Multiplicity of `s` as a root.
    pub fn root_multiplicity(&self, s: &F) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear_root(s.clone());
        let mut m = 0;
        let mut p = self.clone();
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    /// Yun square-free decomposition: returns `(f_i, i)` with `self = c·Π f_i^i`.
    pub fn square_free(&self) -> Vec<(Poly<F>, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let (mut b, _) = f.div_rem(&a0);
        let (mut c, _) = fp.div_rem(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let (nb, _) = b.div_rem(&a);
            c = {
                let (q, _) = d.div_rem(&a);
                q
            };
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            b = nb;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: ComplexField> Poly<F> {
    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(|c| c.to_c64())
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_c64();
        }
        acc
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let t = v[i + j].clone() + a.clone() * b.clone();
                v[i + j] = t;
            }
        }
        Poly::new(v)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, o: Poly<F>) -> Poly<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{}", c);
            let body = match n {
                0 => cs.clone(),
                _ => {
                    let xp = if n == 1 { "x".to_string() } else { format!("x^{}", n) };
                    if c.is_one() {
                        xp
                    } else if (-c.clone()).is_one() {
                        format!("-{}", xp)
                    } else {
                        format!("{}*{}", cs, xp)
                    }
                }
            };
            if first {
                write!(f, "{}", body)?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", body)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::Gq;

    fn p(v: &[i64]) -> Poly<Gq> {
        Poly::new(v.iter().map(|&n| Gq::int(n)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[2, 1]));
    }

    #[test]
    fn shift_matches_substitution() {
        let a = p(&[1, -2, 0, 3]);
        let s = Gq::frac(1, 3);
        let shifted = a.shift(&s);
        for t in [-2i64, 0, 1, 5] {
            let t = Gq::int(t);
            assert_eq!(shifted.eval(&t), a.eval(&(t.clone() + s.clone())));
        }
    }

    #[test]
    fn square_free_decomposition() {
        // x^2 (x-1)^2 (x+1)
        let f = &(&p(&[0, 1]).pow(2) * &p(&[-1, 1]).pow(2)) * &p(&[1, 1]);
        let sf = f.square_free();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (p(&[1, 1]), 1));
        assert_eq!(sf[1], (&p(&[0, 1]) * &p(&[-1, 1]), 2));
        assert_eq!(f.root_multiplicity(&Gq::int(1)), 2);
    }

    #[test]
    fn display() {
        assert_eq!(format!("{}", p(&[-1, 0, 2])), "2*x^2 - 1");
        assert_eq!(format!("{}", p(&[0, -1])), "-x");
    }
}
