//! The potential grammar.
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary | primary)*      implicit product allowed
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?                      integer exponents only
//! primary := number | 'x' | 'i' | 'exp' '(' sum ')' | '(' sum ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. The argument of
//! `exp` must reduce to `c·x` with an exact constant `c`.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IoError;
use crate::exact::scalar::parse_rational;
use crate::exact::{ComplexField, Field, Gq, Poly, RationalFunction};
use crate::synthesis::{ExpRational, MPoly, Mono};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, IoError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let q = parse_rational(&text)
                .map_err(|_| IoError::Syntax { line: l0, col: c0, msg: format!("malformed number `{}`", text) })?;
            out.push(Token { tok: Tok::Num(q), line: l0, col: c0 });
            continue;
        }
        if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        let op = match c {
            '−' => '-',
            '·' | '×' => '*',
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => c,
            _ => return Err(IoError::Syntax { line: l0, col: c0, msg: format!("unexpected character `{}`", c) }),
        };
        out.push(Token { tok: Tok::Op(op), line: l0, col: c0 });
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Gq),
    X,
    Exp(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: &str) -> Result<T, IoError> {
        Err(IoError::Syntax { line: t.line, col: t.col, msg: msg.to_string() })
    }

    fn sum(&mut self) -> Result<Expr, IoError> {
        let mut e = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Op('+') => {
                    self.next();
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.next();
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, IoError> {
        let mut e = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Op('*') => {
                    self.next();
                    e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.next();
                    e = Expr::Div(Box::new(e), Box::new(self.unary()?));
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::Op('(') => {
                    e = Expr::Mul(Box::new(e), Box::new(self.power()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, IoError> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.next();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, IoError> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        let at = self.peek().clone();
        let ex = self.unary()?;
        let n = const_value(&ex)
            .and_then(|c| c.as_i64())
            .ok_or(IoError::Syntax { line: at.line, col: at.col, msg: "exponent must be an integer constant".into() })?;
        Ok(Expr::Pow(Box::new(base), n))
    }

    fn primary(&mut self) -> Result<Expr, IoError> {
        let t = self.next();
        match &t.tok {
            Tok::Num(q) => Ok(Expr::Const(Gq::real(q.clone()))),
            Tok::Ident(s) if s == "x" => Ok(Expr::X),
            Tok::Ident(s) if s == "i" => Ok(Expr::Const(Gq::i())),
            Tok::Ident(s) if s == "exp" => {
                let open = self.next();
                if open.tok != Tok::Op('(') {
                    return self.err(&open, "expected `(` after exp");
                }
                let arg = self.sum()?;
                let close = self.next();
                if close.tok != Tok::Op(')') {
                    return self.err(&close, "expected `)`");
                }
                Ok(Expr::Exp(Box::new(arg)))
            }
            Tok::Ident(s) => self.err(&t, &format!("unknown identifier `{}`", s)),
            Tok::Op('(') => {
                let e = self.sum()?;
                let close = self.next();
                if close.tok != Tok::Op(')') {
                    return self.err(&close, "expected `)`");
                }
                Ok(e)
            }
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Op(c) => self.err(&t, &format!("unexpected `{}`", c)),
        }
    }
}

/// Value of an `x`-free, `exp`-free subexpression.
fn const_value(e: &Expr) -> Option<Gq> {
    Some(match e {
        Expr::Const(c) => c.clone(),
        Expr::X | Expr::Exp(_) => return None,
        Expr::Add(a, b) => const_value(a)? + const_value(b)?,
        Expr::Sub(a, b) => const_value(a)? - const_value(b)?,
        Expr::Mul(a, b) => const_value(a)? * const_value(b)?,
        Expr::Div(a, b) => {
            let d = const_value(b)?;
            if d.is_zero() {
                return None;
            }
            const_value(a)? / d
        }
        Expr::Neg(a) => -const_value(a)?,
        Expr::Pow(a, n) => {
            let c = const_value(a)?;
            if *n < 0 {
                if c.is_zero() {
                    return None;
                }
                c.inv().pow(n.unsigned_abs() as u32)
            } else {
                c.pow(*n as u32)
            }
        }
    })
}

pub fn parse_expr(src: &str) -> Result<Expr, IoError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.sum()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, "unexpected trailing input");
    }
    Ok(e)
}

/// A parsed potential: purely rational, or with exponential atoms.
#[derive(Debug, Clone)]
pub enum ParsedPotential {
    Rational(RationalFunction<Gq>),
    Exp(ExpRational),
}

impl ParsedPotential {
    /// The rational form; exponential atoms are rejected.
    pub fn into_rational(self) -> Result<RationalFunction<Gq>, IoError> {
        match self {
            ParsedPotential::Rational(r) => Ok(r),
            ParsedPotential::Exp(_) => Err(IoError::ExpNotAllowed),
        }
    }
}

fn collect_rates(e: &Expr, out: &mut Vec<Gq>) -> Result<(), IoError> {
    match e {
        Expr::Const(_) | Expr::X => Ok(()),
        Expr::Exp(a) => {
            let r = exp_rate(a)?;
            if !r.is_zero() && !out.contains(&r) {
                out.push(r);
            }
            Ok(())
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            collect_rates(a, out)?;
            collect_rates(b, out)
        }
        Expr::Neg(a) | Expr::Pow(a, _) => collect_rates(a, out),
    }
}

/// `c` for an argument equal to `c·x`.
fn exp_rate(arg: &Expr) -> Result<Gq, IoError> {
    let bad = || IoError::Semantic("exp argument must be a constant multiple of x".into());
    let p = to_exp_rational(arg, &[]).map_err(|_| bad())?;
    if !p.den_factors().is_empty() {
        return Err(bad());
    }
    let mut rate = Gq::int(0);
    for (m, c) in p.num().terms() {
        if m.x != 1 || m.k != 0 {
            return Err(bad());
        }
        rate = c.clone();
    }
    Ok(rate)
}

fn gcd_rational(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Generators such that every rate is an integer multiple of exactly one of them.
pub fn generator_basis(rates: &[Gq]) -> Vec<Gq> {
    let mut classes: Vec<(Gq, BigRational)> = Vec::new();
    for r in rates {
        let hit = classes.iter_mut().find_map(|(base, g)| {
            let q = r.clone() / base.clone();
            q.is_real().then(|| {
                *g = gcd_rational(g, &q.re);
            })
        });
        if hit.is_none() {
            classes.push((r.clone(), BigRational::one()));
        }
    }
    classes
        .into_iter()
        .map(|(base, g)| {
            let w = base * Gq::real(g.abs());
            if w.re.is_negative() || (w.re.is_zero() && w.im.is_negative()) {
                -w
            } else {
                w
            }
        })
        .collect()
}

fn exponent_in(rate: &Gq, basis: &[Gq]) -> Option<(usize, i32)> {
    basis.iter().enumerate().find_map(|(j, w)| {
        let q = rate.clone() / w.clone();
        let n = q.as_integer()?;
        i32::try_from(n).ok().map(|n| (j, n))
    })
}

/// Builds the exp-rational value over `basis`.
pub fn to_exp_rational(e: &Expr, basis: &[Gq]) -> Result<ExpRational, IoError> {
    let n = basis.len();
    let rates = basis.to_vec();
    Ok(match e {
        Expr::Const(c) => ExpRational::constant(rates, c.clone()),
        Expr::X => ExpRational::from_poly(rates, MPoly::x(n)),
        Expr::Exp(a) => {
            let r = exp_rate(a)?;
            if r.is_zero() {
                ExpRational::one(rates)
            } else {
                let (j, p) = exponent_in(&r, basis)
                    .ok_or_else(|| IoError::Semantic(format!("rate {} is not a multiple of the basis", r)))?;
                let mut ex = vec![0; n];
                ex[j] = p;
                ExpRational::from_poly(rates, MPoly::term(Mono { e: ex, x: 0, k: 0 }, Gq::int(1)))
            }
        }
        Expr::Add(a, b) => to_exp_rational(a, basis)?.add(&to_exp_rational(b, basis)?),
        Expr::Sub(a, b) => to_exp_rational(a, basis)?.sub(&to_exp_rational(b, basis)?),
        Expr::Mul(a, b) => to_exp_rational(a, basis)?.mul(&to_exp_rational(b, basis)?),
        Expr::Div(a, b) => to_exp_rational(a, basis)?
            .div(&to_exp_rational(b, basis)?)
            .ok_or_else(|| IoError::Semantic("division by zero".into()))?,
        Expr::Neg(a) => to_exp_rational(a, basis)?.neg(),
        Expr::Pow(a, p) => {
            let v = to_exp_rational(a, basis)?;
            if *p >= 0 {
                v.pow(*p as u32)
            } else {
                ExpRational::one(rates)
                    .div(&v.pow(p.unsigned_abs() as u32))
                    .ok_or_else(|| IoError::Semantic("negative power of zero".into()))?
            }
        }
    })
}

fn exp_free_to_rational(e: &ExpRational) -> Result<RationalFunction<Gq>, IoError> {
    let as_poly = |p: &MPoly| {
        let deg = p.max_x() as usize;
        let mut c = vec![Gq::int(0); deg + 1];
        for (m, v) in p.terms() {
            c[m.x as usize] = c[m.x as usize].clone() + v.clone();
        }
        Poly::new(c)
    };
    Ok(RationalFunction::normalize(as_poly(e.num()), as_poly(&e.den_expanded()))?)
}

/// Parses `src`; pure rational input becomes a [`RationalFunction`], anything
/// with `exp` atoms an [`ExpRational`] over `basis` (or generators inferred
/// from the rates).
pub fn parse_potential(src: &str, basis: Option<&[Gq]>) -> Result<ParsedPotential, IoError> {
    let e = parse_expr(src)?;
    let mut rates = Vec::new();
    collect_rates(&e, &mut rates)?;
    if rates.is_empty() {
        let v = to_exp_rational(&e, &[])?;
        return Ok(ParsedPotential::Rational(exp_free_to_rational(&v)?));
    }
    let basis = match basis {
        Some(b) => b.to_vec(),
        None => generator_basis(&rates),
    };
    Ok(ParsedPotential::Exp(to_exp_rational(&e, &basis)?))
}

pub fn parse_rational_potential(src: &str) -> Result<RationalFunction<Gq>, IoError> {
    parse_potential(src, None)?.into_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_of_power_over_minus() {
        let u = parse_rational_potential("-x^2 + 2x").unwrap();
        assert_eq!(u, RationalFunction::from_poly(Poly::new(vec![Gq::int(0), Gq::int(2), Gq::int(-1)])));
        assert_eq!(parse_rational_potential("2^-1").unwrap(), RationalFunction::constant(Gq::frac(1, 2)));
    }

    #[test]
    fn partial_fraction_text() {
        let u = parse_rational_potential("-5/16/x^2 - 5/16/(x-1)^2 - 7/8/x + 5/24/(x-1)").unwrap();
        let want = RationalFunction::from_partial_fractions(&[
            (Gq::int(0), 2, Gq::frac(-5, 16)),
            (Gq::int(1), 2, Gq::frac(-5, 16)),
            (Gq::int(0), 1, Gq::frac(-7, 8)),
            (Gq::int(1), 1, Gq::frac(5, 24)),
        ]);
        assert_eq!(u, want);
        assert!(parse_rational_potential("0").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("1 +\n  2 * )") {
            Err(IoError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 7)),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_rational_potential("exp(2*x)"), Err(IoError::ExpNotAllowed)));
        assert!(parse_potential("exp(x^2)", None).is_err());
        assert!(parse_expr("x ^ 1/2").is_ok());
        assert!(parse_expr("x ^ (1/2)").is_err());
    }

    #[test]
    fn generators_from_rates() {
        let b = generator_basis(&[Gq::int(4), Gq::int(-2), Gq::frac(2, 3), Gq::i()]);
        assert_eq!(b, vec![Gq::frac(2, 3), Gq::i()]);
        match parse_potential("2/(exp(x) + exp(-x))^2 * 4", None).unwrap() {
            ParsedPotential::Exp(e) => assert_eq!(e.rates(), &[Gq::int(1)]),
            _ => panic!(),
        }
    }
}
