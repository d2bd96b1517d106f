//! Numerical scattering data for decaying meromorphic potentials.
//!
//! Jost solutions are integrated along the real line, or along
//! `γ(ξ) = ξ + ic·sech ξ` when `u` has real poles; `a` and `b` come from
//! Wronskians at a matching point, zeros of `a` from the argument principle,
//! and jets from Cauchy integrals on small circles.

mod bound;
mod contour;
mod jost;
mod ode;
mod potential;
mod record;

pub use bound::{extract_jets, find_bound_states, BoundState, Jets, SearchBox, CIRCLE_NODES, JET_RADIUS_FRACTION};
pub use contour::{auto_height, Contour, ContourKind, DEFAULT_CLEARANCE};
pub use jost::{
    a_at, a_coefficient, b_at, best_ratio_point, jost_profile, jost_solutions, phi_psi_ratio, scattering_coeffs,
    trace, wronskian_residual, Coefficients, End, Factored, JostPoint, JostSolutions, PHI, PHI_MINUS, PSI, PSI_MINUS,
};
pub use ode::{integrate, StepControl};
pub use potential::{Decay, PotentialEval};
pub use record::{
    analyze, high_k_limits, linear_grid, scan_reflection, symmetric_grid, Diagnostics, HighKRecord, ScatteringRecord,
    Verdict, DEFAULT_REFLECTIONLESS_THRESHOLD, HIGH_K_LADDER,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("tail decays like x^-{0}; at least x^-2 is needed")]
    SlowTail(i64),
    #[error("k = 0 is excluded")]
    ZeroK,
    #[error("potential undefined on the path at parameter {0}")]
    Singularity(f64),
    #[error("step size underflow at parameter {0}; an unlisted singularity is likely nearby")]
    StepUnderflow(f64),
    #[error("path passes within {distance:.3e} of the pole at {pole}")]
    Clearance { pole: Complex64, distance: f64 },
    #[error("a(k) vanishes on the search boundary")]
    BoundaryZero,
    #[error("leading a-derivative at {k} does not confirm multiplicity {nu}")]
    Multiplicity { k: Complex64, nu: usize },
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
