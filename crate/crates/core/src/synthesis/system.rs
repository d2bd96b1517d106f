//! The residue linear system for `N_j^r` and the closed forms built from it.

use std::collections::BTreeMap;

use super::exprat::ExpRational;
use super::mpoly::{MPoly, Mono};
use super::spectral::{potential_weights, residue_at, ResidueForm, SpectralData};
use super::SynthesisError;
use crate::exact::{ComplexField, Field, Gq, Poly, RationalFunction};

/// Rates `w_j = 2ik_j`, so `E_j = e^{w_j x} = e^{2ik_j x}`.
pub fn exp_basis(data: &SpectralData) -> Vec<Gq> {
    data.entries.iter().map(|e| Gq::int(2) * Gq::i() * e.k.clone()).collect()
}

/// Row `(i, s)` is the `s`-th `k`-derivative at `k = k_i` of
/// `N(x;k)e^{−2ikx} = 1 − Σ_j Res_j(k)`, multiplied through by `E_i`.
/// Unknowns are ordered `(j, r)` with `j`, then `r`, ascending.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub rates: Vec<Gq>,
    pub unknowns: Vec<(usize, usize)>,
    pub rows: Vec<(usize, usize)>,
    pub matrix: Vec<Vec<MPoly>>,
    pub rhs: Vec<MPoly>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub unknowns: Vec<(usize, usize)>,
    pub values: Vec<ExpRational>,
}

impl Solution {
    pub fn get(&self, j: usize, r: usize) -> Option<&ExpRational> {
        self.unknowns.iter().position(|u| *u == (j, r)).map(|p| &self.values[p])
    }
}

fn binomial(n: usize, r: usize) -> i64 {
    (0..r).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

pub fn residue_forms(data: &SpectralData) -> Result<Vec<ResidueForm>, SynthesisError> {
    (0..data.entries.len()).map(|j| residue_at(j, data)).collect()
}

pub fn assemble_system(data: &SpectralData) -> Result<LinearSystem, SynthesisError> {
    data.validate()?;
    let rates = exp_basis(data);
    let n = rates.len();
    let forms = residue_forms(data)?;
    let unknowns: Vec<(usize, usize)> =
        data.entries.iter().enumerate().flat_map(|(j, e)| (0..e.nu).map(move |r| (j, r))).collect();
    let mut rows = Vec::new();
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for (i, ei) in data.entries.iter().enumerate() {
        let e_i = MPoly::e_pow(n, i, 1);
        for s in 0..ei.nu {
            let mut row = vec![MPoly::zero(n); unknowns.len()];
            for (col, &(j, r)) in unknowns.iter().enumerate() {
                let c = forms[j].coeffs[r].nth_derivative(s).eval(&ei.k)?;
                row[col] = e_i.scale(&c);
                if j == i && r <= s {
                    // ∂_k^s (N e^{−2ikx}) = Σ_t C(s,t) N^{(t)} (−2ix)^{s−t} e^{−2ikx}
                    let p = (s - r) as u32;
                    let coef = Gq::int(binomial(s, r)) * (Gq::int(-2) * Gq::i()).pow(p);
                    let m = Mono { e: vec![0; n], x: p, k: 0 };
                    row[col] = row[col].add(&MPoly::term(m, coef));
                }
            }
            rows.push((i, s));
            matrix.push(row);
            rhs.push(if s == 0 { e_i.clone() } else { MPoly::zero(n) });
        }
    }
    Ok(LinearSystem { rates, unknowns, rows, matrix, rhs })
}

fn det(m: &[Vec<MPoly>], n: usize) -> MPoly {
    match m.len() {
        0 => MPoly::one(n),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MPoly::zero(n);
            for (c, a) in m[0].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(cc, _)| *cc != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = a.mul(&det(&minor, n));
                acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Cramer's rule over the polynomial ring; every entry is polynomial after
/// the row scaling, so each unknown is one determinant ratio.
pub fn solve_system(sys: &LinearSystem) -> Result<Solution, SynthesisError> {
    let n = sys.rates.len();
    let d = det(&sys.matrix, n);
    if d.is_zero() {
        return Err(SynthesisError::Singular);
    }
    let mut values = Vec::with_capacity(sys.unknowns.len());
    for col in 0..sys.unknowns.len() {
        let replaced: Vec<Vec<MPoly>> = sys
            .matrix
            .iter()
            .zip(&sys.rhs)
            .map(|(row, b)| row.iter().enumerate().map(|(c, v)| if c == col { b.clone() } else { v.clone() }).collect())
            .collect();
        let num = det(&replaced, n);
        values.push(ExpRational::new(sys.rates.clone(), num, vec![(d.clone(), 1)]));
    }
    Ok(Solution { unknowns: sys.unknowns.clone(), values })
}

/// `ψ(x;k) = F(x;k)·e^{ikx}` with `F` exp-rational in `x` and rational in `k`.
#[derive(Debug, Clone)]
pub struct PsiExpr {
    pub factor: ExpRational,
}

pub fn jost_psi_expr(data: &SpectralData, sol: &Solution) -> Result<PsiExpr, SynthesisError> {
    let rates = exp_basis(data);
    let forms = residue_forms(data)?;
    let mut f = ExpRational::one(rates.clone());
    for form in &forms {
        for (r, c) in form.coeffs.iter().enumerate() {
            let n = sol.get(form.j, r).ok_or(SynthesisError::Singular)?;
            f = f.sub(&ExpRational::from_k_function(rates.clone(), c).mul(n));
        }
    }
    Ok(PsiExpr { factor: f })
}

/// `u = 2i ∂_x Σ_j Res_{κ=k_j} M(x;κ)/a(κ)`.
pub fn potential_expr(data: &SpectralData, sol: &Solution) -> Result<ExpRational, SynthesisError> {
    let rates = exp_basis(data);
    let mut acc = ExpRational::zero(rates.clone());
    for (j, e) in data.entries.iter().enumerate() {
        for (s, w) in potential_weights(e).iter().enumerate() {
            let n = sol.get(j, s).ok_or(SynthesisError::Singular)?;
            acc = acc.add(&n.scale(w));
        }
    }
    Ok(acc.derivative_x().scale(&(Gq::int(2) * Gq::i())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    PlusInfinity,
    MinusInfinity,
}

/// Dominant part of `p` as `x → ±∞`: exponent class `z`, power of `x`, and the
/// coefficient polynomial in `k`.
fn dominant(p: &MPoly, rates: &[Gq], dir: Direction) -> Result<(Gq, u32, Poly<Gq>), SynthesisError> {
    let mut classes: BTreeMap<String, (Gq, Vec<(&Mono, &Gq)>)> = BTreeMap::new();
    for (m, c) in p.terms() {
        let z = m.e.iter().zip(rates).fold(Gq::int(0), |acc, (&e, w)| acc + Gq::int(e as i64) * w.clone());
        classes.entry(format!("{}", z)).or_insert_with(|| (z.clone(), Vec::new())).1.push((m, c));
    }
    let better = |a: &Gq, b: &Gq| match dir {
        Direction::PlusInfinity => a.re > b.re,
        Direction::MinusInfinity => a.re < b.re,
    };
    let mut best: Option<&(Gq, Vec<(&Mono, &Gq)>)> = None;
    for cl in classes.values() {
        best = match best {
            None => Some(cl),
            Some(b) if better(&cl.0, &b.0) => Some(cl),
            Some(b) => Some(b),
        };
    }
    let (z, terms) = best.ok_or(SynthesisError::NoLimit("zero expression".into()))?;
    if classes.values().filter(|c| c.0.re == z.re).count() > 1 {
        return Err(SynthesisError::NoLimit("oscillating leading exponentials".into()));
    }
    let px = terms.iter().map(|(m, _)| m.x).max().unwrap_or(0);
    let mut coeffs = vec![Gq::int(0); 1 + terms.iter().map(|(m, _)| m.k as usize).max().unwrap_or(0)];
    for (m, c) in terms.iter().filter(|(m, _)| m.x == px) {
        coeffs[m.k as usize] = coeffs[m.k as usize].clone() + (*c).clone();
    }
    Ok((z.clone(), px, Poly::new(coeffs)))
}

/// `lim ψ e^{−ikx}` as `x → ±∞`, a rational function of `k`.
pub fn asymptotic_leading(psi: &PsiExpr, dir: Direction) -> Result<RationalFunction<Gq>, SynthesisError> {
    let f = &psi.factor;
    if f.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let rates = f.rates();
    let (zn, pn, cn) = dominant(f.num(), rates, dir)?;
    let (zd, pd, cd) = dominant(&f.den_expanded(), rates, dir)?;
    if zn == zd && pn == pd {
        return Ok(RationalFunction::normalize(cn, cd)?);
    }
    let vanishes = match dir {
        Direction::PlusInfinity => zn.re < zd.re || (zn.re == zd.re && pn < pd),
        Direction::MinusInfinity => zn.re > zd.re || (zn.re == zd.re && pn < pd),
    };
    if vanishes {
        Ok(RationalFunction::zero())
    } else {
        Err(SynthesisError::NoLimit("expression grows without bound".into()))
    }
}

/// `F'' + 2ikF' + uF` for `ψ = F e^{ikx}`; identically zero when `ψ` solves
/// `ψ'' + (k² + u)ψ = 0`.
pub fn schrodinger_residual(psi: &PsiExpr, u: &ExpRational) -> ExpRational {
    let f = &psi.factor;
    let n = f.rates().len();
    let f1 = f.derivative_x();
    let f2 = f1.derivative_x();
    let two_ik = MPoly::k(n).scale(&(Gq::int(2) * Gq::i()));
    f2.add(&f1.mul_poly(&two_ik)).add(&u.mul(f))
}

/// The full pipeline from spectral data to `(N, ψ, u)`.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub data: SpectralData,
    pub system: LinearSystem,
    pub solution: Solution,
    pub psi: PsiExpr,
    pub potential: ExpRational,
}

pub fn synthesize(data: &SpectralData) -> Result<Synthesis, SynthesisError> {
    let system = assemble_system(data)?;
    let solution = solve_system(&system)?;
    let psi = jost_psi_expr(data, &solution)?;
    let potential = potential_expr(data, &solution)?;
    Ok(Synthesis { data: data.clone(), system, solution, psi, potential })
}
