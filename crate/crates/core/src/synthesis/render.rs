//! Numerical evaluation, pole location and text/LaTeX output of exp-rational expressions.

use num_complex::Complex64;
use num_traits::Zero;

use super::exprat::ExpRational;
use super::mpoly::{MPoly, Mono};
use super::system::PsiExpr;
use crate::exact::{Field, Gq};

/// Relative size of a denominator factor below which a sample is reported as a pole.
pub const POLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sample {
    Value(Complex64),
    Pole,
}

impl Sample {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            Sample::Value(v) => Some(*v),
            Sample::Pole => None,
        }
    }
}

/// Evaluates at complex `x` (and `k`, ignored when the expression has none).
/// Each exp-polynomial is evaluated relative to its largest exponential, so
/// `|x|` in the hundreds is fine.
pub fn eval_expr(expr: &ExpRational, x: Complex64, k: Complex64) -> Sample {
    let rates = expr.rates_c64();
    let (vn, sn, _) = expr.num().eval_scaled(&rates, x, k);
    let mut v = vn;
    let mut s = sn;
    for (f, m) in expr.den_factors() {
        let (vf, sf, af) = f.eval_scaled(&rates, x, k);
        if vf.norm() <= POLE_TOL * af {
            return Sample::Pole;
        }
        v /= vf.powu(*m);
        s -= sf * *m as f64;
    }
    if vn == Complex64::new(0.0, 0.0) {
        return Sample::Value(vn);
    }
    Sample::Value(v * s.exp())
}

pub fn eval_psi(psi: &PsiExpr, x: Complex64, k: Complex64) -> Sample {
    match eval_expr(&psi.factor, x, k) {
        Sample::Value(v) => Sample::Value(v * (Complex64::new(0.0, 1.0) * k * x).exp()),
        Sample::Pole => Sample::Pole,
    }
}

/// Real zeros in `[lo, hi]` of the `k`-free denominator factors, by sign
/// changes and local minima of the scaled factor on `n` samples followed by
/// Newton polishing.
pub fn real_poles(expr: &ExpRational, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let rates = expr.rates_c64();
    let k0 = Complex64::new(0.0, 0.0);
    let mut out: Vec<f64> = Vec::new();
    for (f, _) in expr.den_factors() {
        if f.max_k() > 0 {
            continue;
        }
        let df = f.derivative_x(expr.rates());
        let rel = |x: f64| {
            let (v, _, a) = f.eval_scaled(&rates, Complex64::new(x, 0.0), k0);
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v / a
            }
        };
        let grid: Vec<f64> = (0..n.max(2)).map(|i| lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64).collect();
        let vals: Vec<Complex64> = grid.iter().map(|&x| rel(x)).collect();
        let mut seeds = Vec::new();
        for i in 0..grid.len() {
            let sign_change = i + 1 < grid.len() && vals[i].re * vals[i + 1].re <= 0.0;
            let local_min = i > 0
                && i + 1 < grid.len()
                && vals[i].norm() <= vals[i - 1].norm()
                && vals[i].norm() <= vals[i + 1].norm();
            if sign_change {
                seeds.push(0.5 * (grid[i] + grid[i + 1]));
            } else if local_min {
                seeds.push(grid[i]);
            }
        }
        for mut x in seeds {
            for _ in 0..60 {
                let z = Complex64::new(x, 0.0);
                let (v, s, _) = f.eval_scaled(&rates, z, k0);
                let (dv, ds, _) = df.eval_scaled(&rates, z, k0);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = (v / dv) * (s - ds).exp();
                x -= step.re;
                if step.norm() < 1e-15 * (1.0 + x.abs()) {
                    break;
                }
            }
            if x.is_finite() && x >= lo && x <= hi && rel(x).norm() < 1e-9 && !out.iter().any(|p| (p - x).abs() < 1e-8)
            {
                out.push(x);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Newton step `f/f'` in true scale, or `None` when `f'` vanishes.
fn newton_step(f: &MPoly, df: &MPoly, rates: &[Complex64], z: Complex64) -> Option<Complex64> {
    let k0 = Complex64::new(0.0, 0.0);
    let (v, s, _) = f.eval_scaled(rates, z, k0);
    let (dv, ds, _) = df.eval_scaled(rates, z, k0);
    let step = (v / dv) * (s - ds).exp();
    (dv.norm() > 0.0 && step.re.is_finite() && step.norm() <= 2.0).then_some(step)
}

fn relative_value(f: &MPoly, rates: &[Complex64], z: Complex64) -> f64 {
    let (v, _, a) = f.eval_scaled(rates, z, Complex64::new(0.0, 0.0));
    if a == 0.0 {
        0.0
    } else {
        v.norm() / a
    }
}

/// Zeros of the `k`-free denominator factors inside the rectangle
/// `[x0, x1] × [y0, y1]`, by Newton iteration from a grid of seeds.
///
/// A zero of multiplicity `m` is a simple zero of the `(m−1)`-th derivative,
/// so each seed is first brought close with Newton on `f/f'` and then
/// polished on the lowest derivative where plain Newton converges and all
/// lower derivatives vanish.
pub fn complex_poles(expr: &ExpRational, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Vec<Complex64> {
    const MAX_MULTIPLICITY: usize = 8;
    let rates = expr.rates_c64();
    let k0 = Complex64::new(0.0, 0.0);
    let mut out: Vec<Complex64> = Vec::new();
    let nx = ((x1 - x0) / 0.25).ceil().max(1.0) as usize;
    let ny = ((y1 - y0) / 0.25).ceil().max(1.0) as usize;
    for (f, _) in expr.den_factors() {
        if f.max_k() > 0 {
            continue;
        }
        let mut ders = vec![f.clone()];
        for j in 0..=MAX_MULTIPLICITY {
            let d = ders[j].derivative_x(expr.rates());
            ders.push(d);
        }
        for i in 0..=nx {
            for j in 0..=ny {
                let mut z = Complex64::new(x0 + (x1 - x0) * i as f64 / nx as f64, y0 + (y1 - y0) * j as f64 / ny as f64);
                // Newton on f/f' converges at repeated zeros, up to a noise floor
                let mut close = false;
                for _ in 0..50 {
                    let (v, s, _) = ders[0].eval_scaled(&rates, z, k0);
                    let (dv, ds, _) = ders[1].eval_scaled(&rates, z, k0);
                    let (ddv, dds, _) = ders[2].eval_scaled(&rates, z, k0);
                    let den = dv * dv - v * ddv * (s + dds - 2.0 * ds).exp();
                    if den.norm() == 0.0 {
                        close = v.norm() == 0.0;
                        break;
                    }
                    let step = v * dv / den * (s - ds).exp();
                    if !step.re.is_finite() || step.norm() > 2.0 {
                        break;
                    }
                    z -= step;
                    if step.norm() < 1e-6 * (1.0 + z.norm()) {
                        close = true;
                    }
                }
                if !close {
                    continue;
                }
                let Some(root) = (0..MAX_MULTIPLICITY).find_map(|m| {
                    let mut w = z;
                    for _ in 0..30 {
                        let step = newton_step(&ders[m], &ders[m + 1], &rates, w)?;
                        w -= step;
                        if step.norm() < 1e-13 * (1.0 + w.norm()) {
                            let vanishes = (0..=m).all(|l| relative_value(&ders[l], &rates, w) < 1e-9);
                            let simple = relative_value(&ders[m + 1], &rates, w) > 1e-6;
                            return ((w - z).norm() < 1e-2 && vanishes && simple).then_some(w);
                        }
                    }
                    None
                }) else {
                    continue;
                };
                let inside = root.re >= x0 && root.re <= x1 && root.im >= y0 && root.im <= y1;
                if inside && !out.iter().any(|p| (p - root).norm() < 1e-7) {
                    out.push(root);
                }
            }
        }
    }
    out.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

fn exponent(m: &Mono, rates: &[Gq]) -> Gq {
    m.e.iter().zip(rates).fold(Gq::int(0), |acc, (&p, w)| acc + Gq::int(p as i64) * w.clone())
}

fn exp_text(z: &Gq, style: Style) -> String {
    let zs = format!("{}", z);
    match style {
        Style::Text => match zs.as_str() {
            "1" => "exp(x)".into(),
            "-1" => "exp(-x)".into(),
            _ => format!("exp({}*x)", zs),
        },
        Style::Latex => {
            let body = match zs.as_str() {
                "1" => "x".to_string(),
                "-1" => "-x".to_string(),
                _ => format!("{}x", latex_scalar(z)),
            };
            format!("e^{{{}}}", body)
        }
    }
}

fn latex_scalar(c: &Gq) -> String {
    format!("{}", c).replace('*', "").replace('(', "\\left(").replace(')', "\\right)")
}

fn pow_text(var: &str, p: u32, style: Style) -> String {
    match (p, style) {
        (1, _) => var.to_string(),
        (_, Style::Text) => format!("{}^{}", var, p),
        (_, Style::Latex) => format!("{}^{{{}}}", var, p),
    }
}

/// Renders an exp-polynomial, grouping monomials with the same exponential.
pub fn render_poly(p: &MPoly, rates: &[Gq], style: Style) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let mut factors: Vec<String> = Vec::new();
        if m.x > 0 {
            factors.push(pow_text("x", m.x, style));
        }
        if m.k > 0 {
            factors.push(pow_text("k", m.k, style));
        }
        let z = exponent(m, rates);
        if !z.is_zero() {
            factors.push(exp_text(&z, style));
        }
        let sep = if style == Style::Text { "*" } else { " " };
        let zero = num_rational::BigRational::from_integer(0.into());
        let negative = (c.im.is_zero() && c.re < zero) || (c.re.is_zero() && c.im < zero);
        let (neg, mag) = if negative {
            (true, -c.clone())
        } else {
            (false, c.clone())
        };
        let cs = match style {
            Style::Text => format!("{}", mag),
            Style::Latex => latex_scalar(&mag),
        };
        let body = if factors.is_empty() {
            cs
        } else if mag.is_one() {
            factors.join(sep)
        } else {
            format!("{}{}{}", cs, sep, factors.join(sep))
        };
        if i == 0 {
            out.push_str(if neg { "-" } else { "" });
            out.push_str(&body);
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

/// Shifts every denominator factor so its exponentials are all `e^{−2ik_j x}`
/// powers (growing to the left for `Im k_j > 0`) with a positive leading
/// coefficient, which is how closed forms are conventionally written.
fn display_form(e: &ExpRational) -> (MPoly, Vec<(MPoly, u32)>) {
    let n = e.rates().len();
    let mut num = e.num().clone();
    let mut den = Vec::new();
    for (f, m) in e.den_factors() {
        let mut maxe = vec![i32::MIN; n];
        for (mono, _) in f.terms() {
            for (a, b) in maxe.iter_mut().zip(&mono.e) {
                *a = (*a).max(*b);
            }
        }
        let neg: Vec<i32> = maxe.iter().map(|a| -a).collect();
        let mut g = f.shift_e(&neg);
        let scaled: Vec<i32> = neg.iter().map(|a| a * *m as i32).collect();
        num = num.shift_e(&scaled);
        let lead = g.terms().next().map(|(_, c)| c.clone()).unwrap_or(Gq::int(1));
        if lead.re < num_rational::BigRational::from_integer(0.into())
            || (lead.re == num_rational::BigRational::from_integer(0.into())
                && lead.im < num_rational::BigRational::from_integer(0.into()))
        {
            g = g.neg();
            if m % 2 == 1 {
                num = num.neg();
            }
        }
        den.push((g, *m));
    }
    (num, den)
}

pub fn render(e: &ExpRational, style: Style) -> String {
    let (num, den) = display_form(e);
    let rates = e.rates();
    let ns = render_poly(&num, rates, style);
    if den.is_empty() {
        return ns;
    }
    match style {
        Style::Text => {
            let ds: Vec<String> = den
                .iter()
                .map(|(f, m)| {
                    let body = format!("({})", render_poly(f, rates, style));
                    if *m == 1 {
                        body
                    } else {
                        format!("{}^{}", body, m)
                    }
                })
                .collect();
            if ds.len() == 1 {
                format!("({})/{}", ns, ds[0])
            } else {
                format!("({})/({})", ns, ds.join("*"))
            }
        }
        Style::Latex => {
            let ds: Vec<String> = den
                .iter()
                .map(|(f, m)| {
                    let body = render_poly(f, rates, style);
                    if *m == 1 && den.len() == 1 {
                        body
                    } else if *m == 1 {
                        format!("\\left({}\\right)", body)
                    } else {
                        format!("\\left({}\\right)^{{{}}}", body, m)
                    }
                })
                .collect();
            format!("\\frac{{{}}}{{{}}}", ns, ds.join(" "))
        }
    }
}

pub fn render_psi(psi: &PsiExpr, style: Style) -> String {
    match style {
        Style::Text => format!("({})*exp(i*k*x)", render(&psi.factor, style)),
        Style::Latex => format!("\\left({}\\right) e^{{ikx}}", render(&psi.factor, style)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_soliton_shape_evaluates() {
        // 1/(1 + E), E = e^{-2x}: equals 1/2 at 0 and tends to 1 far right
        let rates = vec![Gq::int(-2)];
        let f = MPoly::one(1).add(&MPoly::e_pow(1, 0, 1));
        let e = ExpRational::new(rates, MPoly::one(1), vec![(f, 1)]);
        let z = Complex64::new(0.0, 0.0);
        assert!((eval_expr(&e, z, z).value().unwrap().re - 0.5).abs() < 1e-15);
        assert!((eval_expr(&e, Complex64::new(300.0, 0.0), z).value().unwrap().re - 1.0).abs() < 1e-15);
        assert!(eval_expr(&e, Complex64::new(-300.0, 0.0), z).value().unwrap().norm() < 1e-200);
    }

    #[test]
    fn pole_flagged_and_located() {
        // 1/(E − 4): pole where e^{-2x} = 4, x = −ln 2
        let rates = vec![Gq::int(-2)];
        let f = MPoly::e_pow(1, 0, 1).sub(&MPoly::constant(1, Gq::int(4)));
        let e = ExpRational::new(rates, MPoly::one(1), vec![(f, 1)]);
        let p = real_poles(&e, -3.0, 3.0, 101);
        assert_eq!(p.len(), 1);
        assert!((p[0] + 2f64.ln()).abs() < 1e-13);
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(eval_expr(&e, Complex64::new(p[0], 0.0), z), Sample::Pole);
        // e^{-2z} = 4 also at z = −ln 2 ± iπ
        let c = complex_poles(&e, (-2.0, 2.0), (-3.5, 3.5));
        assert_eq!(c.len(), 3);
        assert!((c[2] - Complex64::new(-(2f64.ln()), std::f64::consts::PI)).norm() < 1e-12);
    }

    #[test]
    fn text_uses_growing_exponentials() {
        let rates = vec![Gq::int(-2)];
        let f = MPoly::one(1).add(&MPoly::e_pow(1, 0, 1));
        let e = ExpRational::new(rates, MPoly::one(1), vec![(f, 1)]);
        assert_eq!(render(&e, Style::Text), "(exp(2*x))/(exp(2*x) + 1)");
        assert_eq!(render(&e, Style::Latex), "\\frac{e^{2x}}{e^{2x} + 1}");
    }
}
