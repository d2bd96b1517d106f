use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{Check, HarnessError};
use crate::exact::{Gq, RationalFunction};
use crate::kovacic::{solvability_scan, KSet, Verdict};
use crate::scattering::ScatteringRecord;

/// Relative mismatch allowed when pairing `k` with `−k` on a grid.
const MIRROR_TOL: f64 = 1e-12;

/// `max |a(k)a(−k) − b(k)b(−k) − 1|` over a grid that is symmetric under `k ↦ −k`.
pub fn check_unitarity(rec: &ScatteringRecord, tol: f64) -> Result<Check, HarnessError> {
    let g = &rec.k_grid;
    let symmetric = g.iter().all(|k| g.iter().any(|m| (m + k).abs() <= MIRROR_TOL * (1.0 + k.abs())));
    if !symmetric {
        return Err(HarnessError::AsymmetricGrid);
    }
    let res = (0..g.len())
        .map(|i| (rec.a_values[i] * rec.a_reflected[i] - rec.b_values[i] * rec.b_reflected[i] - 1.0).norm())
        .fold(0.0, f64::max);
    Ok(Check::new("unitarity", "a(k)a(-k) - b(k)b(-k) = 1", res, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StokesMatrices {
    pub minus: Matrix2<Complex64>,
    pub plus: Matrix2<Complex64>,
}

pub fn stokes_matrices(a: Complex64, b: Complex64, b_neg: Complex64, a_neg: Complex64) -> StokesMatrices {
    StokesMatrices {
        minus: Matrix2::new(a, b_neg, b, a_neg),
        plus: Matrix2::new(a_neg, -b_neg, -b, a),
    }
}

/// `det S₋ = 1` and `S₊S₋ = I` at one real `k`.
pub fn check_stokes(a: Complex64, (b, b_neg): (Complex64, Complex64), a_neg: Complex64, tol: f64) -> Check {
    let s = stokes_matrices(a, b, b_neg, a_neg);
    let det = (s.minus.determinant() - 1.0).norm();
    let prod = (s.plus * s.minus - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Check::new("stokes", "det S- = 1 and S+ S- = I", det.max(prod), tol)
        .with_detail(format!("|det S- - 1| = {:.3e}, max|S+S- - I| = {:.3e}", det, prod))
}

/// On a grid of real `k`, every point is `NotSolvable` except those inside a
/// flagged exceptional interval, and each such interval is narrower than
/// `max_width`. Requires `u ~ c/x` at infinity.
pub fn check_kovacic_consistency(
    u: &RationalFunction<Gq>,
    (lo, hi, n): (f64, f64, usize),
    max_width: f64,
) -> Result<Check, HarnessError> {
    if u.order_at_infinity() != 1 {
        return Err(HarnessError::Precondition(format!(
            "u must decay like 1/x (order at infinity {})",
            u.order_at_infinity()
        )));
    }
    let out = solvability_scan(u, &KSet::Grid { lo, hi, n })?;
    let inside = |k: f64| out.exceptional.iter().any(|e| e.interval.0 <= k && k <= e.interval.1);
    let violations: Vec<f64> = out
        .points
        .iter()
        .filter_map(|p| {
            let k = p.k?;
            (p.report.verdict != Verdict::NotSolvable && !inside(k)).then_some(k)
        })
        .collect();
    let widest = out.exceptional.iter().map(|e| e.interval.1 - e.interval.0).fold(0.0, f64::max);
    let flagged: Vec<String> =
        out.exceptional.iter().map(|e| format!("{:.10} (width {:.1e})", e.k, e.interval.1 - e.interval.0)).collect();
    let mut c = Check::new(
        "quadrature-scan",
        "NotSolvable on the grid except at isolated flagged k",
        violations.len() as f64,
        0.0,
    )
    .with_detail(format!("{} points, flagged [{}], offending {:?}", out.points.len(), flagged.join(", "), violations));
    if widest >= max_width {
        c.passed = false;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{scan_reflection, symmetric_grid, Contour, PotentialEval};

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    #[test]
    fn stokes_for_free_and_soliton() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = stokes_matrices(one, zero, zero, one);
        assert_eq!(s.minus, Matrix2::identity());
        let k = 1.0;
        let a = (k - I) / (k + I);
        let a_neg = (-k - I) / (-k + I);
        let s = stokes_matrices(a, zero, zero, a_neg);
        assert!((s.minus[(0, 0)] + I).norm() < 1e-15 && (s.minus[(1, 1)] - I).norm() < 1e-15);
        assert!(check_stokes(a, (zero, zero), a_neg, 1e-14).passed);
        assert!(!check_stokes(2.0 * one, (zero, zero), one, 1e-6).passed);
    }

    #[test]
    fn unitarity_needs_mirrored_grid() {
        let u = PotentialEval::zero();
        let c = Contour::real_line(5.0);
        let rec = scan_reflection(&u, &symmetric_grid(0.5, 2.0, 3), &c, 1e-10, 1e-6).unwrap();
        let chk = check_unitarity(&rec, 1e-12).unwrap();
        assert_eq!(chk.residual, 0.0);
        let one_sided = scan_reflection(&u, &[0.5, 1.0], &c, 1e-10, 1e-6).unwrap();
        assert_eq!(check_unitarity(&one_sided, 1e-6), Err(HarnessError::AsymmetricGrid));
    }

    #[test]
    fn scan_precondition() {
        let u = RationalFunction::pole_term(Gq::int(1), Gq::int(0), 2);
        assert!(matches!(check_kovacic_consistency(&u, (0.5, 1.5, 3), 1e-6), Err(HarnessError::Precondition(_))));
    }
}
