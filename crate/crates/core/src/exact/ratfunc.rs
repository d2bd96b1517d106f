//! Rational functions in canonical form: coprime numerator and monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::Poly;
use super::scalar::{ComplexField, Field, Gq};
use super::ExactError;

#[derive(Clone, PartialEq)]
pub struct RationalFunction<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RationalFunction<F> {
    /// Canonical form of `num/den`.
    pub fn normalize(num: Poly<F>, den: Poly<F>) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lc = d.leading();
        if !lc.is_one() {
            let inv = lc.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `c / (x - s)^n`.
    pub fn pole_term(c: F, s: F, n: u32) -> Self {
        Self::normalize(Poly::constant(c), Poly::linear_root(s).pow(n)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn num_degree(&self) -> Option<usize> {
        self.num.degree()
    }

    pub fn den_degree(&self) -> usize {
        self.den.degree().unwrap_or(0)
    }

    /// `deg den − deg num`: order of vanishing at infinity.
    pub fn order_at_infinity(&self) -> i64 {
        match self.num.degree() {
            None => i64::MAX,
            Some(n) => self.den_degree() as i64 - n as i64,
        }
    }

    pub fn eval(&self, x: &F) -> Result<F, ExactError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ExactError::PoleEvaluation);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::normalize(n, d).expect("nonzero denominator")
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        let mut r = self.clone();
        for _ in 0..n {
            r = r.derivative();
        }
        r
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        if o.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Self::normalize(&self.num * &o.den, &self.den * &o.num)
    }
}

impl<F: ComplexField> RationalFunction<F> {
    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        self.num.eval_c64(x) / self.den.eval_c64(x)
    }

    pub fn to_c64(&self) -> RationalFunction<Complex64> {
        RationalFunction { num: self.num.to_c64(), den: self.den.to_c64() }
    }
}

impl RationalFunction<Gq> {
    /// Sum of partial-fraction terms `c/(x-s)^n`.
    pub fn from_partial_fractions(terms: &[(Gq, u32, Gq)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(), |acc, (s, n, c)| &acc + &Self::pole_term(c.clone(), s.clone(), *n))
    }
}

impl<F: Field> Add for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn add(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        if self.den == o.den {
            return RationalFunction::normalize(&self.num + &o.num, self.den.clone()).unwrap();
        }
        RationalFunction::normalize(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
            .unwrap()
    }
}

impl<F: Field> Sub for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn sub(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        self + &(-o)
    }
}

impl<F: Field> Mul for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn mul(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        RationalFunction::normalize(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl<F: Field> Div for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn div(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        self.checked_div(o).expect("rational function division by zero")
    }
}

impl<F: Field> Neg for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for RationalFunction<F> {
            type Output = RationalFunction<F>;
            fn $m(self, o: RationalFunction<F>) -> RationalFunction<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);
forward_by_value!(Div, div);

impl<F: Field> Neg for RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        -&self
    }
}

/// Rational functions form a field, so exact linear algebra can run over them.
impl<F: Field> Field for RationalFunction<F> {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        RationalFunction::constant(F::from_i64(n))
    }
}

impl<F: Field + fmt::Display> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", self.num)
        } else {
            format!("{}", self.num)
        };
        write!(f, "{}/({})", num, self.den)
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}
