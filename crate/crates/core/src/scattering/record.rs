use num_complex::Complex64;
use rayon::prelude::*;

use super::bound::{extract_jets, find_bound_states, BoundState, Jets, SearchBox};
use super::contour::Contour;
use super::jost::{scattering_coeffs, wronskian_residual};
use super::potential::PotentialEval;
use super::ScatteringError;

/// Reflectionless cutoff on `max |ρ|`.
pub const DEFAULT_REFLECTIONLESS_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Reflectionless,
    Reflecting,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// `max |a(k)a(−k) − b(k)b(−k) − 1|` over the grid.
    pub unitarity_residual: f64,
    /// `max |W(φ(k), φ(−k))/2ik − 1|` along the path, over the grid.
    pub wronskian_residual: f64,
    pub max_rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringRecord {
    pub contour: Contour,
    pub k_grid: Vec<f64>,
    pub a_values: Vec<Complex64>,
    pub b_values: Vec<Complex64>,
    /// `b/a`, absent where `a` vanishes.
    pub rho_values: Vec<Option<Complex64>>,
    /// `a(−k)` and `b(−k)` on the same grid, kept for the unitarity check.
    pub a_reflected: Vec<Complex64>,
    pub b_reflected: Vec<Complex64>,
    pub bound_states: Vec<BoundState>,
    pub jets: Vec<Jets>,
    pub verdict: Verdict,
    pub threshold: f64,
    pub diagnostics: Diagnostics,
}

impl ScatteringRecord {
    pub fn is_reflectionless(&self) -> bool {
        self.verdict == Verdict::Reflectionless
    }
}

/// Samples `n` evenly spaced points of `[a, b]`.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` points on `[lo, hi]` together with their mirror images.
pub fn symmetric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let pos = linear_grid(lo, hi, n);
    let mut g: Vec<f64> = pos.iter().rev().map(|k| -k).collect();
    g.extend(pos);
    g
}

/// `a, b` on a real grid with the reflectionless verdict and diagnostics.
pub fn scan_reflection(
    u: &PotentialEval,
    k_grid: &[f64],
    contour: &Contour,
    tol: f64,
    threshold: f64,
) -> Result<ScatteringRecord, ScatteringError> {
    if let Some(k) = k_grid.iter().find(|k| **k == 0.0 || !k.is_finite()) {
        return Err(ScatteringError::Invalid(format!("grid point {} is not a nonzero real", k)));
    }
    let rows: Vec<(Complex64, Complex64, Complex64, Complex64, f64)> = k_grid
        .par_iter()
        .map(|&k| {
            let p = scattering_coeffs(u, k, contour, tol)?;
            let m = scattering_coeffs(u, -k, contour, tol)?;
            let w = if u.is_zero() { 0.0 } else { wronskian_residual(u, k, contour, tol, 41)? };
            Ok((p.a, p.b, m.a, m.b, w))
        })
        .collect::<Result<_, ScatteringError>>()?;
    let a_values: Vec<Complex64> = rows.iter().map(|r| r.0).collect();
    let b_values: Vec<Complex64> = rows.iter().map(|r| r.1).collect();
    let rho_values: Vec<Option<Complex64>> =
        rows.iter().map(|r| if r.0.norm() > 0.0 { Some(r.1 / r.0) } else { None }).collect();
    let max_rho = rho_values.iter().map(|r| r.map_or(f64::INFINITY, |v| v.norm())).fold(0.0, f64::max);
    let unitarity = rows.iter().map(|r| (r.0 * r.2 - r.1 * r.3 - 1.0).norm()).fold(0.0, f64::max);
    let wr = rows.iter().map(|r| r.4).fold(0.0, f64::max);
    Ok(ScatteringRecord {
        contour: *contour,
        k_grid: k_grid.to_vec(),
        a_values,
        b_values,
        rho_values,
        a_reflected: rows.iter().map(|r| r.2).collect(),
        b_reflected: rows.iter().map(|r| r.3).collect(),
        bound_states: Vec::new(),
        jets: Vec::new(),
        verdict: if max_rho < threshold { Verdict::Reflectionless } else { Verdict::Reflecting },
        threshold,
        diagnostics: Diagnostics { unitarity_residual: unitarity, wronskian_residual: wr, max_rho },
    })
}

/// The full record: grid scan, bound states in `bx`, and their jets.
pub fn analyze(
    u: &PotentialEval,
    k_grid: &[f64],
    contour: &Contour,
    bx: SearchBox,
    tol: f64,
    threshold: f64,
) -> Result<ScatteringRecord, ScatteringError> {
    let mut rec = scan_reflection(u, k_grid, contour, tol, threshold)?;
    rec.bound_states = find_bound_states(u, contour, bx, tol)?;
    rec.jets = rec
        .bound_states
        .iter()
        .map(|z| extract_jets(u, z.k, z.nu, None, contour, tol))
        .collect::<Result<_, _>>()?;
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighKRecord {
    /// `(k, a(k), b(k), contour height used)`.
    pub ladder: Vec<(f64, Complex64, Complex64, f64)>,
    /// Least-squares slope of `log|a − 1|` against `log k`; `None` when `a ≡ 1`.
    pub a_rate: Option<f64>,
    pub b_rate: Option<f64>,
}

pub const HIGH_K_LADDER: [f64; 5] = [5.0, 10.0, 20.0, 35.0, 50.0];

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 1e-13).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(num / den)
}

/// `a` and `b` on an increasing ladder of `k`. Deformed paths are lowered to
/// height about `2/k` (never below what the real poles need) because the
/// conditioning degrades like `e^{2kc}`.
pub fn high_k_limits(u: &PotentialEval, contour: &Contour, tol: f64) -> Result<HighKRecord, ScatteringError> {
    let ladder: Vec<(f64, Complex64, Complex64, f64)> = HIGH_K_LADDER
        .par_iter()
        .map(|&k| {
            let c = contour.with_height_cap(u, 2.0 / k);
            let co = scattering_coeffs(u, k, &c, tol)?;
            Ok((k, co.a, co.b, c.height()))
        })
        .collect::<Result<_, ScatteringError>>()?;
    let a_rate = slope(&ladder.iter().map(|r| (r.0, (r.1 - 1.0).norm())).collect::<Vec<_>>());
    let b_rate = slope(&ladder.iter().map(|r| (r.0, r.2.norm())).collect::<Vec<_>>());
    Ok(HighKRecord { ladder, a_rate, b_rate })
}
