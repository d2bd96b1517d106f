//! Jost solutions and the scattering coefficients.
//!
//! The solutions are carried in factored form so that nothing grows
//! exponentially along the path:
//!
//! * `m = ψ(z;k)e^{−ikz}` solves `m'' + 2ikm' + um = 0`, seeded at `+L`;
//! * `n = φ(z;k)e^{ikz}` solves `n'' − 2ikn' + un = 0`, seeded at `−L`.
//!
//! Replacing `k` by `−k` gives the partners used for `b` and for the
//! Wronskian check. All four share `y'' + 2iσky' + uy = 0` with `σ = ±1`.

use num_complex::Complex64;

use super::contour::{Contour, ContourKind};
use super::ode::{integrate, StepControl};
use super::potential::PotentialEval;
use super::ScatteringError;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Left,
    Right,
}

/// One factored solution: `σ`, the end it is seeded at, and the spectral value.
#[derive(Debug, Clone, Copy)]
pub struct Factored {
    pub sigma: f64,
    pub from: End,
}

pub const PSI: Factored = Factored { sigma: 1.0, from: End::Right };
pub const PSI_MINUS: Factored = Factored { sigma: -1.0, from: End::Right };
pub const PHI: Factored = Factored { sigma: -1.0, from: End::Left };
pub const PHI_MINUS: Factored = Factored { sigma: 1.0, from: End::Left };

/// Values `(y, y_z)` of a factored solution at the requested parameters `ξ`,
/// returned in the order given.
pub fn trace(
    u: &PotentialEval,
    k: Complex64,
    contour: &Contour,
    tol: f64,
    which: Factored,
    stops: &[f64],
) -> Result<Vec<[Complex64; 2]>, ScatteringError> {
    if k.norm() == 0.0 {
        return Err(ScatteringError::ZeroK);
    }
    let l = contour.half_length;
    let s = which.sigma;
    let (xi0, side) = match which.from {
        End::Right => (l, 1),
        End::Left => (-l, -1),
    };
    let (z0, _) = contour.point(xi0);
    let u0 = u.eval(z0).ok_or(ScatteringError::Singularity(xi0))?;
    let tail = u.tail_integral(z0, side);
    // two-term WKB: log y = ∓(iσ/2k)∫u − u/(4k²), (log y)' = (iσ/2k)u − u'/(4k²)
    let w = I * s / (2.0 * k);
    let q = 1.0 / (4.0 * k * k);
    let phase = if side > 0 { -w * tail } else { w * tail };
    let y0 = (phase - q * u0).exp();
    let seed = [y0, (w * u0 - q * u.tail_derivative(z0)) * y0];
    if u.is_zero() {
        return Ok(vec![seed; stops.len()]);
    }
    let two_isk = 2.0 * I * s * k;
    let f = |xi: f64, y: &[Complex64; 2]| {
        let (z, dz) = contour.point(xi);
        let uz = u.eval(z)?;
        Some([dz * y[1], dz * (-two_isk * y[1] - uz * y[0])])
    };
    let ctl = StepControl::new(tol);
    let mut order: Vec<usize> = (0..stops.len()).collect();
    match which.from {
        End::Right => order.sort_by(|&a, &b| stops[b].total_cmp(&stops[a])),
        End::Left => order.sort_by(|&a, &b| stops[a].total_cmp(&stops[b])),
    }
    let mut out = vec![seed; stops.len()];
    let (mut t, mut y) = (xi0, seed);
    for idx in order {
        y = integrate(&f, t, stops[idx], y, &ctl)?;
        t = stops[idx];
        out[idx] = y;
    }
    Ok(out)
}

/// Where `a` is matched on a deformed path: far out on the side where
/// `Im z` is negligible and the integration toward it is stable.
fn a_matching_point(contour: &Contour, k: Complex64) -> f64 {
    match contour.kind {
        ContourKind::RealLine => 0.0,
        ContourKind::Deformed { c } => {
            let xm = (0.5 * contour.half_length).min((c / 1e-4).max(1.0).acosh());
            if k.re >= 0.0 {
                -xm
            } else {
                xm
            }
        }
    }
}

/// `a(k) = W(φ, ψ)/2ik` for any `k ≠ 0` with `Im k ≥ 0`.
pub fn a_coefficient(u: &PotentialEval, k: Complex64, contour: &Contour, tol: f64) -> Result<Complex64, ScatteringError> {
    a_at(u, k, contour, tol, a_matching_point(contour, k))
}

/// `a(k)` matched at an explicit parameter `ξ`.
pub fn a_at(u: &PotentialEval, k: Complex64, contour: &Contour, tol: f64, xi: f64) -> Result<Complex64, ScatteringError> {
    if u.is_zero() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let m = trace(u, k, contour, tol, PSI, &[xi])?[0];
    let n = trace(u, k, contour, tol, PHI, &[xi])?[0];
    Ok((n[0] * m[1] - n[1] * m[0] + 2.0 * I * k * n[0] * m[0]) / (2.0 * I * k))
}

/// `b(k) = −W(φ(k), ψ(−k))/2ik` matched at `ξ`.
pub fn b_at(u: &PotentialEval, k: Complex64, contour: &Contour, tol: f64, xi: f64) -> Result<Complex64, ScatteringError> {
    if u.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let p = trace(u, k, contour, tol, PSI_MINUS, &[xi])?[0];
    let n = trace(u, k, contour, tol, PHI, &[xi])?[0];
    let (z, _) = contour.point(xi);
    Ok((-2.0 * I * k * z).exp() * (p[0] * n[1] - p[1] * n[0]) / (2.0 * I * k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: Complex64,
    pub b: Complex64,
}

/// `(a(k), b(k))` at real `k ≠ 0`.
pub fn scattering_coeffs(u: &PotentialEval, k: f64, contour: &Contour, tol: f64) -> Result<Coefficients, ScatteringError> {
    let kc = Complex64::new(k, 0.0);
    Ok(Coefficients { a: a_coefficient(u, kc, contour, tol)?, b: b_at(u, kc, contour, tol, 0.0)? })
}

/// `φ(z;k)/ψ(z;k)` at `ξ`; at a bound state this is the connection constant.
pub fn phi_psi_ratio(u: &PotentialEval, k: Complex64, contour: &Contour, tol: f64, xi: f64) -> Result<Complex64, ScatteringError> {
    let m = trace(u, k, contour, tol, PSI, &[xi])?[0];
    let n = trace(u, k, contour, tol, PHI, &[xi])?[0];
    let (z, _) = contour.point(xi);
    Ok(n[0] / m[0] * (-2.0 * I * k * z).exp())
}

/// Among `ξ ∈ {−3, −2.5, …, 3}`, the point where `|ψ(z;k)|` is largest.
pub fn best_ratio_point(u: &PotentialEval, k: Complex64, contour: &Contour, tol: f64) -> Result<f64, ScatteringError> {
    let stops: Vec<f64> = (-6..=6).map(|i| 0.5 * i as f64).filter(|x| x.abs() < contour.half_length).collect();
    let m = trace(u, k, contour, tol, PSI, &stops)?;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (xi, y) in stops.iter().zip(&m) {
        let (z, _) = contour.point(*xi);
        let v = (y[0] * (I * k * z).exp()).norm();
        if v > best.0 {
            best = (v, *xi);
        }
    }
    Ok(best.1)
}

/// Values of `ψ, ψ_z, φ, φ_z` at one point of the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostPoint {
    pub xi: f64,
    pub z: Complex64,
    pub psi: Complex64,
    pub dpsi: Complex64,
    pub phi: Complex64,
    pub dphi: Complex64,
}

/// `ψ` and `φ` (unfactored) at the given parameters.
pub fn jost_profile(
    u: &PotentialEval,
    k: Complex64,
    contour: &Contour,
    tol: f64,
    xis: &[f64],
) -> Result<Vec<JostPoint>, ScatteringError> {
    let m = trace(u, k, contour, tol, PSI, xis)?;
    let n = trace(u, k, contour, tol, PHI, xis)?;
    Ok(xis
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let (z, _) = contour.point(xi);
            let ep = (I * k * z).exp();
            let em = (-I * k * z).exp();
            JostPoint {
                xi,
                z,
                psi: m[i][0] * ep,
                dpsi: (m[i][1] + I * k * m[i][0]) * ep,
                phi: n[i][0] * em,
                dphi: (n[i][1] - I * k * n[i][0]) * em,
            }
        })
        .collect())
}

/// Boundary data: `ψ` at the left end after integrating from the right, and
/// `φ` at the right end after integrating from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostSolutions {
    pub k: Complex64,
    pub left: JostPoint,
    pub right: JostPoint,
}

pub fn jost_solutions(u: &PotentialEval, k: Complex64, contour: &Contour, tol: f64) -> Result<JostSolutions, ScatteringError> {
    let l = contour.half_length;
    let p = jost_profile(u, k, contour, tol, &[-l, l])?;
    Ok(JostSolutions { k, left: p[0], right: p[1] })
}

/// `max |W(φ(k), φ(−k))/2ik − 1|` over `samples` points of the path.
pub fn wronskian_residual(u: &PotentialEval, k: f64, contour: &Contour, tol: f64, samples: usize) -> Result<f64, ScatteringError> {
    let kc = Complex64::new(k, 0.0);
    let l = contour.half_length;
    let xis: Vec<f64> = (0..samples).map(|i| -l + 2.0 * l * i as f64 / (samples - 1).max(1) as f64).collect();
    let n = trace(u, kc, contour, tol, PHI, &xis)?;
    let q = trace(u, kc, contour, tol, PHI_MINUS, &xis)?;
    Ok(n.iter()
        .zip(&q)
        .map(|(n, q)| ((n[0] * q[1] - n[1] * q[0] + 2.0 * I * kc * n[0] * q[0]) / (2.0 * I * kc) - 1.0).norm())
        .fold(0.0, f64::max))
}
