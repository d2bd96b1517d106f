//! Symbolic-numeric toolkit for the one-dimensional Schrödinger spectral problem
//! `v'' + (k² + u(x)) v = 0`.
//!
//! * [`exact`]: arithmetic over ℚ(i) (polynomials, rational functions, Laurent series).
//! * [`kovacic`]: solvability-by-quadrature analysis for rational potentials.
//! * [`scattering`]: numerical Jost solutions, scattering coefficients and bound states.
//! * [`synthesis`]: closed-form reflectionless potentials from discrete spectral data.
//! * [`harness`]: cross-pipeline identity checks.
//! * [`io`]: potential grammar, file formats and emitters.

pub mod exact;
pub mod harness;
pub mod io;
pub mod kovacic;
pub mod scattering;
pub mod synthesis;

/// Default relative tolerance for numerical integration.
pub const DEFAULT_TOL: f64 = 1e-10;
