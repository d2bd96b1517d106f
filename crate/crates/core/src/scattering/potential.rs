use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::ScatteringError;
use crate::exact::{find_poles, laurent_expand, Center, ComplexField, Gq, RationalFunction};
use crate::synthesis::{complex_poles, render, ExpRational, MPoly, Style, POLE_TOL};

/// Tail behaviour used to seed the Jost solutions at `±L`.
#[derive(Debug, Clone, PartialEq)]
pub enum Decay {
    /// `u ~ Σ_{j≥2} c_j x^{−j}` at both ends; `coeffs[j]` is `c_j`.
    Algebraic { excess: i64, coeffs: Vec<Complex64> },
    /// Exponential or faster; the tail beyond `±L` is negligible.
    Fast,
}

type Evaluator = dyn Fn(Complex64) -> Option<Complex64> + Send + Sync;

/// A potential that can be evaluated at complex `x`, with its known poles.
#[derive(Clone)]
pub struct PotentialEval {
    eval: Arc<Evaluator>,
    /// Poles with orders, as far as they are known.
    pub poles: Vec<(Complex64, u32)>,
    pub decay: Decay,
    pub label: String,
    zero: bool,
}

impl fmt::Debug for PotentialEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PotentialEval({}, poles {:?}, {:?})", self.label, self.poles, self.decay)
    }
}

/// Floating copy of a `k`-free exp-polynomial: `(rate, power of x, coefficient)`.
struct CompiledPoly {
    terms: Vec<(Complex64, i32, Complex64)>,
}

impl CompiledPoly {
    fn new(p: &MPoly, rates: &[Complex64]) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let w = m.e.iter().zip(rates).fold(Complex64::new(0.0, 0.0), |acc, (&e, r)| acc + r * e as f64);
                (w, m.x as i32, c.to_c64())
            })
            .collect();
        CompiledPoly { terms }
    }

    /// `(v, s, Σ|terms|)` with value `v·e^s`, scaled by the largest exponential.
    fn eval_scaled(&self, z: Complex64) -> (Complex64, f64, f64) {
        let s = self.terms.iter().map(|t| (t.0 * z).re).fold(f64::NEG_INFINITY, f64::max);
        let mut v = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for (w, p, c) in &self.terms {
            let t = c * (w * z - s).exp() * z.powi(*p);
            v += t;
            a += t.norm();
        }
        (v, s, a)
    }
}

/// Poles farther than this from the real axis are irrelevant for contour selection.
const POLE_STRIP: f64 = 3.0;

impl PotentialEval {
    pub fn from_fn(
        label: &str,
        f: impl Fn(Complex64) -> Option<Complex64> + Send + Sync + 'static,
        poles: Vec<(Complex64, u32)>,
        decay: Decay,
    ) -> Self {
        PotentialEval { eval: Arc::new(f), poles, decay, label: label.to_string(), zero: false }
    }

    pub fn zero() -> Self {
        PotentialEval {
            eval: Arc::new(|_| Some(Complex64::new(0.0, 0.0))),
            poles: Vec::new(),
            decay: Decay::Fast,
            label: "0".into(),
            zero: true,
        }
    }

    /// `2 sech² x`, the one-soliton potential.
    pub fn sech2() -> Self {
        let poles = [-1.0, 1.0].iter().map(|s| (Complex64::new(0.0, s * std::f64::consts::FRAC_PI_2), 2)).collect();
        PotentialEval::from_fn("2 sech^2 x", |z| Some(2.0 / z.cosh().powi(2)), poles, Decay::Fast)
    }

    /// `e^{−x²}`.
    pub fn gaussian() -> Self {
        PotentialEval::from_fn("exp(-x^2)", |z| Some((-z * z).exp()), Vec::new(), Decay::Fast)
    }

    pub fn from_rational(u: &RationalFunction<Gq>) -> Result<Self, ScatteringError> {
        if u.is_zero() {
            return Ok(PotentialEval::zero());
        }
        let excess = u.order_at_infinity();
        if excess < 2 {
            return Err(ScatteringError::SlowTail(excess));
        }
        let ser = laurent_expand(u, &Center::Infinity, excess + 6)?;
        let coeffs = (0..=(excess + 6)).map(|j| ser.x_power_coeff(-j).map(|c| c.to_c64())).collect::<Result<_, _>>()?;
        let poles = find_poles(u.den()).into_iter().map(|(p, m)| (p.to_c64(), m as u32)).collect();
        let num = u.num().to_c64();
        let den = u.den().to_c64();
        let f = move |z: Complex64| {
            let d = den.eval(&z);
            if d.norm() == 0.0 {
                None
            } else {
                Some(num.eval(&z) / d)
            }
        };
        Ok(PotentialEval::from_fn(&format!("{}", u), f, poles, Decay::Algebraic { excess, coeffs }))
    }

    /// An exp-rational potential; poles are searched for in the strip
    /// `|Im x| ≤ 3` over `[−span, span]`.
    pub fn from_exp_rational(u: &ExpRational, span: f64) -> Result<Self, ScatteringError> {
        if u.is_zero() {
            return Ok(PotentialEval::zero());
        }
        if u.num().max_k() > 0 || u.den_factors().iter().any(|(f, _)| f.max_k() > 0) {
            return Err(ScatteringError::Invalid("potential depends on k".into()));
        }
        let poles = complex_poles(u, (-span, span), (-POLE_STRIP, POLE_STRIP))
            .into_iter()
            .map(|p| {
                let order = u
                    .den_factors()
                    .iter()
                    .filter(|(f, _)| f.eval(&u.rates_c64(), p, Complex64::new(0.0, 0.0)).norm() < 1e-8)
                    .map(|(_, m)| *m)
                    .sum::<u32>()
                    .max(1);
                (p, order)
            })
            .collect();
        let rates = u.rates_c64();
        let num = CompiledPoly::new(u.num(), &rates);
        let den: Vec<(CompiledPoly, i32)> =
            u.den_factors().iter().map(|(f, m)| (CompiledPoly::new(f, &rates), *m as i32)).collect();
        let f = move |z: Complex64| {
            let (mut v, mut s, _) = num.eval_scaled(z);
            for (d, m) in &den {
                let (dv, ds, da) = d.eval_scaled(z);
                if dv.norm() <= POLE_TOL * da {
                    return None;
                }
                v /= dv.powi(*m);
                s -= ds * *m as f64;
            }
            Some(if v.norm() == 0.0 { v } else { v * s.exp() })
        };
        Ok(PotentialEval::from_fn(&render(u, Style::Text), f, poles, Decay::Fast))
    }

    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        (self.eval)(z)
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn real_poles(&self) -> Vec<f64> {
        self.poles.iter().filter(|(p, _)| p.im.abs() < 1e-9).map(|(p, _)| p.re).collect()
    }

    /// Default half-length of the integration interval.
    pub fn default_half_length(&self) -> f64 {
        match self.decay {
            Decay::Fast => 20.0,
            Decay::Algebraic { .. } => 200.0,
        }
    }

    /// `u'(z)` from the tail expansion; zero for fast decay.
    pub fn tail_derivative(&self, z: Complex64) -> Complex64 {
        match &self.decay {
            Decay::Fast => Complex64::new(0.0, 0.0),
            Decay::Algebraic { coeffs, .. } => coeffs
                .iter()
                .enumerate()
                .skip(2)
                .map(|(j, c)| -c * j as f64 * z.powi(-(j as i32) - 1))
                .sum(),
        }
    }

    /// `∫_{z}^{∞} u` for `side = +1` and `∫_{−∞}^{z} u` for `side = −1`, from the
    /// tail expansion (zero for fast decay).
    pub fn tail_integral(&self, z: Complex64, side: i32) -> Complex64 {
        match &self.decay {
            Decay::Fast => Complex64::new(0.0, 0.0),
            Decay::Algebraic { coeffs, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, c) in coeffs.iter().enumerate().skip(2) {
                    // antiderivative of x^{−j} is x^{1−j}/(1−j)
                    let f = z.powi(1 - j as i32) / (1.0 - j as f64);
                    acc += if side > 0 { -c * f } else { c * f };
                }
                acc
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebraic_tail_integral() {
        // u = 1/(x² + 1) ~ x⁻² − x⁻⁴ + …, ∫_L^∞ u = π/2 − atan L
        let u = RationalFunction::normalize(
            crate::exact::Poly::one(),
            crate::exact::Poly::new(vec![Gq::int(1), Gq::int(0), Gq::int(1)]),
        )
        .unwrap();
        let p = PotentialEval::from_rational(&u).unwrap();
        let l = 30.0f64;
        let want = std::f64::consts::FRAC_PI_2 - l.atan();
        assert!((p.tail_integral(Complex64::new(l, 0.0), 1).re - want).abs() < 1e-12);
        assert!((p.tail_integral(Complex64::new(-l, 0.0), -1).re - want).abs() < 1e-12);
        assert_eq!(p.poles.len(), 2);
    }

    #[test]
    fn coulomb_tail_rejected() {
        let u = RationalFunction::pole_term(Gq::int(1), Gq::int(0), 1);
        assert!(matches!(PotentialEval::from_rational(&u), Err(ScatteringError::SlowTail(1))));
    }
}
