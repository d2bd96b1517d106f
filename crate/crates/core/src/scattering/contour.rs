use num_complex::Complex64;

use super::potential::PotentialEval;
use super::ScatteringError;

/// Minimum distance between the path and any pole of `u`.
pub const DEFAULT_CLEARANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind {
    RealLine,
    /// `γ(ξ) = ξ + i·c·sech ξ`.
    Deformed { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub kind: ContourKind,
    pub half_length: f64,
}

impl Contour {
    pub fn real_line(half_length: f64) -> Self {
        Contour { kind: ContourKind::RealLine, half_length }
    }

    pub fn deformed(c: f64, half_length: f64) -> Self {
        Contour { kind: ContourKind::Deformed { c }, half_length }
    }

    pub fn height(&self) -> f64 {
        match self.kind {
            ContourKind::RealLine => 0.0,
            ContourKind::Deformed { c } => c,
        }
    }

    /// `(γ, γ_ξ)` at `ξ`.
    pub fn point(&self, xi: f64) -> (Complex64, Complex64) {
        match self.kind {
            ContourKind::RealLine => (Complex64::new(xi, 0.0), Complex64::new(1.0, 0.0)),
            ContourKind::Deformed { c } => {
                let s = 1.0 / xi.cosh();
                let t = xi.tanh();
                (Complex64::new(xi, c * s), Complex64::new(1.0, -c * s * t))
            }
        }
    }

    pub fn second_derivative(&self, xi: f64) -> Complex64 {
        match self.kind {
            ContourKind::RealLine => Complex64::new(0.0, 0.0),
            ContourKind::Deformed { c } => {
                let s = 1.0 / xi.cosh();
                let t = xi.tanh();
                Complex64::new(0.0, c * (s * t * t - s * s * s))
            }
        }
    }

    /// Distance from `p` to the path, by sampling and local refinement.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let l = self.half_length;
        let n = 4000;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=n {
            let xi = -l + 2.0 * l * i as f64 / n as f64;
            let d = (self.point(xi).0 - p).norm();
            if d < best.0 {
                best = (d, xi);
            }
        }
        let (mut lo, mut hi) = (best.1 - 2.0 * l / n as f64, best.1 + 2.0 * l / n as f64);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if (self.point(m1).0 - p).norm() < (self.point(m2).0 - p).norm() {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best.0.min((self.point(0.5 * (lo + hi)).0 - p).norm())
    }

    /// Rejects a path that comes closer than `clearance` to a pole of `u`.
    pub fn check_clearance(&self, u: &PotentialEval, clearance: f64) -> Result<(), ScatteringError> {
        for (p, _) in &u.poles {
            if p.re.abs() > self.half_length + clearance {
                continue;
            }
            let d = self.distance_to(*p);
            if d < clearance {
                return Err(ScatteringError::Clearance { pole: *p, distance: d });
            }
        }
        Ok(())
    }

    /// The real line when `u` has no real poles, otherwise a deformation
    /// running below the upper-half-plane poles.
    pub fn auto(u: &PotentialEval, half_length: Option<f64>) -> Result<Self, ScatteringError> {
        let l = half_length.unwrap_or_else(|| u.default_half_length());
        if u.real_poles().is_empty() {
            return Ok(Contour::real_line(l));
        }
        let contour = Contour::deformed(auto_height(u), l);
        contour.check_clearance(u, DEFAULT_CLEARANCE)?;
        Ok(contour)
    }

    /// A contour of the same kind with its height capped; deformed paths pay
    /// a factor `e^{2|k|c}` in conditioning, so large `|k|` wants small `c`.
    pub fn with_height_cap(&self, u: &PotentialEval, cap: f64) -> Self {
        match self.kind {
            ContourKind::RealLine => *self,
            ContourKind::Deformed { c } => {
                let floor = u
                    .real_poles()
                    .iter()
                    .map(|p| 2.0 * DEFAULT_CLEARANCE * p.cosh())
                    .fold(0.0, f64::max);
                Contour::deformed(c.min(cap.max(floor)), self.half_length)
            }
        }
    }
}

/// Half the largest height that keeps every upper-half-plane pole above the
/// path, capped at 1.
pub fn auto_height(u: &PotentialEval) -> f64 {
    let limit = u
        .poles
        .iter()
        .filter(|(p, _)| p.im > 1e-9)
        .map(|(p, _)| p.im * p.re.cosh())
        .fold(f64::INFINITY, f64::min);
    (0.5 * limit).min(1.0)
}
