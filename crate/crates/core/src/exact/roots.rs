//! Roots of univariate polynomials with multiplicities.
//!
//! Multiplicities of exact polynomials come from an exact square-free
//! decomposition. Each square-free factor is then solved exactly when it is
//! linear or a quadratic with a rational discriminant root; otherwise its
//! roots are approximated numerically, rationalized, and kept as exact only
//! if the rational candidate is verified to be a root.

use num_complex::Complex64;

use super::poly::Poly;
use super::scalar::{ComplexField, Field, Gq};

/// Default tolerance for merging numerically computed roots.
pub const CLUSTER_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum PoleLocation {
    Exact(Gq),
    Approx(Complex64),
}

impl PoleLocation {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            PoleLocation::Exact(g) => g.to_c64(),
            PoleLocation::Approx(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&Gq> {
        match self {
            PoleLocation::Exact(g) => Some(g),
            PoleLocation::Approx(_) => None,
        }
    }
}

/// Roots of `p` with multiplicities, exact wherever they can be certified.
pub fn find_poles(p: &Poly<Gq>) -> Vec<(PoleLocation, usize)> {
    let mut out = Vec::new();
    for (factor, mult) in p.square_free() {
        for r in squarefree_roots(&factor) {
            out.push((r, mult));
        }
    }
    out
}

fn squarefree_roots(f: &Poly<Gq>) -> Vec<PoleLocation> {
    let f = f.monic();
    match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![PoleLocation::Exact(-f.coeff(0))],
        Some(2) => {
            // x² + bx + c
            let b = f.coeff(1);
            let c = f.coeff(0);
            let disc = b.clone() * b.clone() - Gq::int(4) * c;
            if let Some(s) = disc.sqrt_exact() {
                let two = Gq::int(2);
                return vec![
                    PoleLocation::Exact((-b.clone() + s.clone()) / two.clone()),
                    PoleLocation::Exact((-b - s) / two),
                ];
            }
        }
        _ => {}
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    for z in numeric_roots(&f.to_c64()) {
        for max_den in [1_000i64, 1_000_000, 1_000_000_000] {
            let cand = Gq::rationalize(z, max_den);
            if rest.eval(&cand).is_zero() {
                let (q, _) = rest.div_rem(&Poly::linear_root(cand.clone()));
                rest = q;
                out.push(PoleLocation::Exact(cand));
                break;
            }
        }
    }
    // whatever was not certified stays approximate
    if rest.degree().unwrap_or(0) > 0 {
        for z in numeric_roots(&rest.to_c64()) {
            out.push(PoleLocation::Approx(z));
        }
    }
    out
}

/// All complex roots of a floating polynomial (Aberth–Ehrlich iteration with
/// Newton polishing), without multiplicity handling.
pub fn numeric_roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    let n = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let lc = p.leading();
    let c: Vec<Complex64> = p.coeffs().iter().map(|a| a / lc).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    // Cauchy bound for the initial circle.
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / n as f64))
        .collect();
    let dp = p.derivative();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pv = p.eval_c64(z[i]);
            let dv = dp.eval_c64(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dv = dp.eval_c64(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let step = p.eval_c64(*zi) / dv;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Numerical roots with multiplicities obtained by clustering within `tol`
/// (relative to `1 + |z|`).
pub fn numeric_roots_with_multiplicity(p: &Poly<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for z in numeric_roots(p) {
        if let Some(e) = out.iter_mut().find(|(c, _)| (*c - z).norm() <= tol * (1.0 + z.norm())) {
            let m = e.1 as f64;
            e.0 = (e.0 * m + z) / (m + 1.0);
            e.1 += 1;
        } else {
            out.push((z, 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Poly<Gq> {
        Poly::new(v.iter().map(|&n| Gq::int(n)).collect())
    }

    #[test]
    fn exact_poles_with_multiplicity() {
        // x²(x−1)²
        let d = &p(&[0, 1]).pow(2) * &p(&[-1, 1]).pow(2);
        let mut poles = find_poles(&d);
        poles.sort_by(|a, b| a.0.to_c64().re.partial_cmp(&b.0.to_c64().re).unwrap());
        assert_eq!(poles, vec![(PoleLocation::Exact(Gq::int(0)), 2), (PoleLocation::Exact(Gq::int(1)), 2)]);
    }

    #[test]
    fn cubic_rational_roots_certified() {
        // (2x−1)(3x+2)(x−5)
        let f = &(&p(&[-1, 2]) * &p(&[2, 3])) * &p(&[-5, 1]);
        let poles = find_poles(&f);
        assert_eq!(poles.len(), 3);
        assert!(poles.iter().all(|(l, m)| l.exact().is_some() && *m == 1));
        assert!(poles.iter().any(|(l, _)| l.exact() == Some(&Gq::frac(-2, 3))));
    }

    #[test]
    fn irrational_roots_stay_approximate() {
        // x³ − 2
        let poles = find_poles(&p(&[-2, 0, 0, 1]));
        assert_eq!(poles.len(), 3);
        assert!(poles.iter().all(|(l, _)| l.exact().is_none()));
        assert!(poles.iter().any(|(l, _)| (l.to_c64() - Complex64::new(2f64.cbrt(), 0.0)).norm() < 1e-12));
    }

    #[test]
    fn gaussian_quadratic() {
        // x² + 1 → ±i
        let poles = find_poles(&p(&[1, 0, 1]));
        assert!(poles.contains(&(PoleLocation::Exact(Gq::cplx((0, 1), (1, 1))), 1)));
        assert!(poles.contains(&(PoleLocation::Exact(Gq::cplx((0, 1), (-1, 1))), 1)));
    }

    #[test]
    fn clustering_merges_close_roots() {
        let f = Poly::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let r = numeric_roots_with_multiplicity(&f, CLUSTER_TOL);
        assert_eq!(r.len(), 2);
    }
}
