//! Discrete spectral data and the residue engine.

use super::SynthesisError;
use crate::exact::{Field, Gq, RationalFunction};

/// One bound state: `a` has a zero of order `nu` at `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEntry {
    pub k: Gq,
    pub nu: usize,
    /// `a^{(m)}(k)` for `m = ν, ν+1, …` (at least `ν` values).
    pub a_jet: Vec<Gq>,
    /// `b^{(r)}(k)` for `r = 0 … ν−1`.
    pub b_jet: Vec<Gq>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralData {
    pub entries: Vec<SpectralEntry>,
}

impl SpectralData {
    pub fn new(entries: Vec<SpectralEntry>) -> Result<Self, SynthesisError> {
        let d = SpectralData { entries };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), SynthesisError> {
        for (j, e) in self.entries.iter().enumerate() {
            if e.nu == 0 {
                return Err(SynthesisError::InvalidData(format!("entry {}: multiplicity must be positive", j)));
            }
            if e.k.im <= num_rational::BigRational::from_integer(0.into()) {
                return Err(SynthesisError::InvalidData(format!("entry {}: k = {} is not in the upper half plane", j, e.k)));
            }
            if e.a_jet.len() < e.nu {
                return Err(SynthesisError::InvalidData(format!(
                    "entry {}: a-jet needs {} values (orders {}..{}), got {}",
                    j,
                    e.nu,
                    e.nu,
                    2 * e.nu - 1,
                    e.a_jet.len()
                )));
            }
            if e.b_jet.len() < e.nu {
                return Err(SynthesisError::InvalidData(format!(
                    "entry {}: b-jet needs {} values, got {}",
                    j,
                    e.nu,
                    e.b_jet.len()
                )));
            }
            if e.a_jet[0].is_zero() {
                return Err(SynthesisError::Multiplicity(j));
            }
            for (i, o) in self.entries.iter().enumerate().take(j) {
                if o.k == e.k {
                    return Err(SynthesisError::InvalidData(format!("entries {} and {} share k = {}", i, j, e.k)));
                }
            }
        }
        Ok(())
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.nu).sum()
    }
}

/// Residue of `M(x;κ)/((k+κ)a(κ))` at `κ = k_j`, as a linear form in the
/// unknowns `N_j^r = ∂_k^r N(x;k_j)`. There is no inhomogeneous part.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueForm {
    pub j: usize,
    /// Coefficient of `N_j^r`, rational in `k`, for `r = 0 … ν_j−1`.
    pub coeffs: Vec<RationalFunction<Gq>>,
}

impl ResidueForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

fn factorial(n: usize) -> Gq {
    (1..=n as i64).fold(Gq::int(1), |acc, m| acc * Gq::int(m))
}

fn binomial(n: usize, r: usize) -> Gq {
    factorial(n) / (factorial(r) * factorial(n - r))
}

/// Taylor coefficients of `ε^ν / a(k_j + ε)` through order `ν − 1`.
fn inverse_a_series(e: &SpectralEntry) -> Vec<Gq> {
    let nu = e.nu;
    let a: Vec<Gq> = (0..nu).map(|n| e.a_jet[n].clone() / factorial(nu + n)).collect();
    let mut h = vec![a[0].inv()];
    for m in 1..nu {
        let s = (1..=m).fold(Gq::int(0), |acc, n| acc + a[n].clone() * h[m - n].clone());
        h.push(-(s / a[0].clone()));
    }
    h
}

/// Contracts a series `g_0 + g_1 ε + …` against the Taylor jet of
/// `M = b·N + O(ε^ν)`: the coefficient of `N^s` in the `ε^{−1}` term of
/// `M·g/ε^ν`.
fn contract<T: Clone>(e: &SpectralEntry, g: &[T], zero: T, mul: impl Fn(&Gq, &T) -> T, add: impl Fn(T, T) -> T) -> Vec<T> {
    let nu = e.nu;
    (0..nu)
        .map(|s| {
            (s..nu).fold(zero.clone(), |acc, r| {
                let c = binomial(r, s) * e.b_jet[r - s].clone() / factorial(r);
                add(acc, mul(&c, &g[nu - 1 - r]))
            })
        })
        .collect()
}

pub fn residue_at(j: usize, data: &SpectralData) -> Result<ResidueForm, SynthesisError> {
    let e = data.entries.get(j).ok_or_else(|| SynthesisError::InvalidData(format!("no entry {}", j)))?;
    if e.a_jet.first().is_none_or(|a| a.is_zero()) {
        return Err(SynthesisError::Multiplicity(j));
    }
    let h = inverse_a_series(e);
    // 1/(k + k_j + ε) = Σ (−1)^n ε^n / (k + k_j)^{n+1}
    let kernel: Vec<RationalFunction<Gq>> = (0..e.nu)
        .map(|n| RationalFunction::pole_term(Gq::int(if n % 2 == 0 { 1 } else { -1 }), -e.k.clone(), n as u32 + 1))
        .collect();
    let g: Vec<RationalFunction<Gq>> = (0..e.nu)
        .map(|m| {
            (0..=m).fold(RationalFunction::zero(), |acc, n| &acc + &kernel[n].scale(&h[m - n]))
        })
        .collect();
    let coeffs = contract(e, &g, RationalFunction::zero(), |c, f| f.scale(c), |a, b| &a + &b);
    Ok(ResidueForm { j, coeffs })
}

/// Residue of `M(x;κ)/a(κ)` at `κ = k_j` (no kernel): the weights of
/// `N_j^s` in the potential.
pub fn potential_weights(e: &SpectralEntry) -> Vec<Gq> {
    let h = inverse_a_series(e);
    contract(e, &h, Gq::int(0), |c, v| c.clone() * v.clone(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ComplexField;

    fn entry(k: Gq, a: Vec<Gq>, b: Vec<Gq>) -> SpectralEntry {
        SpectralEntry { k, nu: a.len(), a_jet: a, b_jet: b }
    }

    #[test]
    fn simple_zero_residue() {
        // b/((k + k_j) a_k)
        let d = SpectralData::new(vec![entry(Gq::i(), vec![Gq::cplx((0, 1), (-1, 2))], vec![Gq::int(1)])]).unwrap();
        let r = residue_at(0, &d).unwrap();
        let want = RationalFunction::pole_term(Gq::cplx((0, 1), (2, 1)), -Gq::i(), 1);
        assert_eq!(r.coeffs, vec![want]);
        assert_eq!(potential_weights(&d.entries[0]), vec![Gq::cplx((0, 1), (2, 1))]);
    }

    #[test]
    fn zero_b_jet_gives_zero_form() {
        let d = SpectralData::new(vec![entry(Gq::i(), vec![Gq::int(3), Gq::int(1)], vec![Gq::int(0), Gq::int(0)])])
            .unwrap();
        assert!(residue_at(0, &d).unwrap().is_zero());
    }

    #[test]
    fn invalid_data_rejected() {
        assert!(SpectralData::new(vec![entry(Gq::int(1), vec![Gq::int(1)], vec![Gq::int(1)])]).is_err());
        assert_eq!(
            SpectralData::new(vec![entry(Gq::i(), vec![Gq::int(0)], vec![Gq::int(1)])]).unwrap_err(),
            SynthesisError::Multiplicity(0)
        );
    }
}
