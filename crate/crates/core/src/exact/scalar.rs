//! Coefficient fields: exact Gaussian rationals and floating complex numbers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// A commutative field with decidable (or tolerance-based) zero test.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Fields embedded in ℂ. Exact implementations never report approximate zeros.
pub trait ComplexField: Field {
    fn i() -> Self;
    fn to_c64(&self) -> Complex64;
    fn is_exact() -> bool;
    /// True when `self` is indistinguishable from zero relative to `scale`.
    fn is_negligible(&self, scale: f64) -> bool;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Principal square root (nonnegative real part; nonnegative imaginary
    /// part on the imaginary axis) when it exists in the field.
    fn sqrt_principal(&self) -> Option<Self>;
}

/// Exact element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gq {
    pub re: BigRational,
    pub im: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Gq {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gq { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gq { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Gq::real(BigRational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Gq::real(rat(n, d))
    }

    pub fn cplx(re: (i64, i64), im: (i64, i64)) -> Self {
        Gq { re: rat(re.0, re.1), im: rat(im.0, im.1) }
    }

    pub fn imag(im: BigRational) -> Self {
        Gq { re: BigRational::zero(), im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gq { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Integer value if `self` is a (real) integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// Principal square root when it lies in ℚ(i): nonnegative real part,
    /// and nonnegative imaginary part when the real part vanishes.
    pub fn sqrt_exact(&self) -> Option<Gq> {
        if self.im.is_zero() {
            if self.re.is_negative() {
                return rational_sqrt(&(-self.re.clone())).map(Gq::imag);
            }
            return rational_sqrt(&self.re).map(Gq::real);
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let p = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let q = &self.im / (&two * &p);
        Some(Gq { re: p, im: q })
    }

    /// Exact conversion of an `f64` pair (every finite double is rational).
    pub fn from_f64_exact(re: f64, im: f64) -> Result<Self, ExactError> {
        let r = BigRational::from_float(re).ok_or(ExactError::NonFinite)?;
        let i = BigRational::from_float(im).ok_or(ExactError::NonFinite)?;
        Ok(Gq { re: r, im: i })
    }

    /// Best rational approximation with bounded denominator (continued fractions).
    pub fn rationalize(z: Complex64, max_den: i64) -> Gq {
        Gq { re: rationalize_f64(z.re, max_den), im: rationalize_f64(z.im, max_den) }
    }
}

/// Continued-fraction approximation of `x` with denominator at most `max_den`.
pub fn rationalize_f64(x: f64, max_den: i64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 || ((p1 as f64) / (q1 as f64) - x.abs()).abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return BigRational::zero();
    }
    let r = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// Square root of a nonnegative rational if it is a rational square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = integer_sqrt_exact(q.numer())?;
    let d = integer_sqrt_exact(q.denom())?;
    Some(BigRational::new(n, d))
}

pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

impl Add for Gq {
    type Output = Gq;
    fn add(self, o: Gq) -> Gq {
        Gq { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Gq {
    type Output = Gq;
    fn sub(self, o: Gq) -> Gq {
        Gq { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Gq {
    type Output = Gq;
    fn mul(self, o: Gq) -> Gq {
        if self.im.is_zero() && o.im.is_zero() {
            return Gq::real(self.re * o.re);
        }
        Gq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for Gq {
    type Output = Gq;
    fn div(self, o: Gq) -> Gq {
        assert!(!o.is_zero(), "division of Gaussian rational by zero");
        if o.im.is_zero() {
            return Gq { re: self.re / &o.re, im: self.im / &o.re };
        }
        let n = o.norm_sqr();
        let c = o.conj();
        let p = self * c;
        Gq { re: p.re / &n, im: p.im / &n }
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq { re: -self.re, im: -self.im }
    }
}

impl Field for Gq {
    fn zero() -> Self {
        Gq { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        Gq { re: BigRational::one(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        Gq::int(n)
    }
}

impl ComplexField for Gq {
    fn i() -> Self {
        Gq { re: BigRational::zero(), im: BigRational::one() }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
    fn is_exact() -> bool {
        true
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn sqrt_principal(&self) -> Option<Self> {
        self.sqrt_exact()
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl ComplexField for Complex64 {
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE)
    }
    fn sqrt_principal(&self) -> Option<Self> {
        let s = self.sqrt();
        if s.re == 0.0 {
            return Some(Complex64::new(0.0, s.im.abs()));
        }
        Some(s)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Gq {
    /// Renders in the potential grammar (`1/2`, `-3*i`, `(1/2+3/4*i)`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re0 = self.re.is_zero();
        let im0 = self.im.is_zero();
        let imag = |q: &BigRational| -> String {
            if q.is_one() {
                "i".to_string()
            } else if (-q.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(q))
            }
        };
        match (re0, im0) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                let im = imag(&self.im);
                if im.starts_with('-') {
                    write!(f, "({}{})", fmt_rational(&self.re), im)
                } else {
                    write!(f, "({}+{})", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses an exact rational such as `"-5/16"`, `"3"` or `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let t = s.trim();
    let bad = || ExactError::BadNumber(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_abs = ip.trim().trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if ip_abs.is_empty() { "0" } else { ip_abs }, fp);
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

/// Factor out the largest square dividing a positive integer, returning
/// `(s, m)` with `n = s²·m`. `certified` is false when a large cofactor
/// could not be fully checked for square factors.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt, bool) {
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut rest = n.clone();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= bound {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            m *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest.is_one() {
        return (s, m, true);
    }
    if let Some(r) = integer_sqrt_exact(&rest) {
        return (s * r, m, true);
    }
    // rest has no prime factor <= bound; below bound³ it cannot hide a square
    // other than a perfect square, which was checked above.
    let certified = rest < &bound * &bound * &bound;
    (s, m * rest, certified)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_branches() {
        assert_eq!(Gq::int(4).sqrt_exact(), Some(Gq::int(2)));
        assert_eq!(Gq::int(-4).sqrt_exact(), Some(Gq::cplx((0, 1), (2, 1))));
        assert_eq!(Gq::frac(9, 4).sqrt_exact(), Some(Gq::frac(3, 2)));
        assert_eq!(Gq::int(2).sqrt_exact(), None);
        // (1+2i)^2 = -3+4i
        assert_eq!(Gq::cplx((-3, 1), (4, 1)).sqrt_exact(), Some(Gq::cplx((1, 1), (2, 1))));
        // 2i = (1+i)^2
        assert_eq!(Gq::cplx((0, 1), (2, 1)).sqrt_exact(), Some(Gq::cplx((1, 1), (1, 1))));
        // -2i = (1-i)^2, principal root has positive real part
        assert_eq!(Gq::cplx((0, 1), (-2, 1)).sqrt_exact(), Some(Gq::cplx((1, 1), (-1, 1))));
    }

    #[test]
    fn arithmetic_and_display() {
        let a = Gq::cplx((1, 2), (3, 4));
        let b = Gq::cplx((-2, 1), (1, 1));
        assert_eq!((a.clone() * b.clone()) / b.clone(), a);
        assert_eq!(format!("{}", a), "(1/2+3/4*i)");
        assert_eq!(format!("{}", Gq::i()), "i");
        assert_eq!(format!("{}", -Gq::i()), "-i");
        assert_eq!(format!("{}", Gq::frac(-5, 16)), "-5/16");
    }

    #[test]
    fn parse_numbers() {
        assert_eq!(parse_rational("-5/16").unwrap(), rat(-5, 16));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn rationalize_simple() {
        assert_eq!(rationalize_f64(0.51, 1_000_000), rat(51, 100));
        assert_eq!(rationalize_f64(-0.125, 1000), rat(-1, 8));
    }

    #[test]
    fn square_free() {
        let (s, m, ok) = square_free_split(&BigInt::from(72));
        assert_eq!((s, m, ok), (BigInt::from(6), BigInt::from(2), true));
    }
}
