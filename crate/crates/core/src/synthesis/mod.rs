//! Closed-form reflectionless potentials and Jost solutions from discrete
//! spectral data.
//!
//! Each bound state `k_j` with multiplicity `ν_j` contributes the unknowns
//! `N_j^r(x) = ∂_k^r N(x;k_j)`, `r < ν_j`. Resolving the circle integrals by
//! residues gives a square linear system over polynomials in `x` and
//! `E_j = e^{2ik_j x}`; its solution yields `ψ(x;k)` and `u(x)` as
//! [`ExpRational`] expressions, exactly when the jets are Gaussian rationals.

mod exprat;
mod mpoly;
mod render;
mod spectral;
mod system;

pub use exprat::ExpRational;
pub use mpoly::{MPoly, Mono};
pub use render::{complex_poles, eval_expr, eval_psi, real_poles, render, render_poly, render_psi, Sample, Style, POLE_TOL};
pub use spectral::{potential_weights, residue_at, ResidueForm, SpectralData, SpectralEntry};
pub use system::{
    asymptotic_leading, assemble_system, exp_basis, jost_psi_expr, potential_expr, residue_forms,
    schrodinger_residual, solve_system, synthesize, Direction, LinearSystem, PsiExpr, Solution, Synthesis,
};

use thiserror::Error;

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("invalid spectral data: {0}")]
    InvalidData(String),
    #[error("entry {0}: leading a-jet value is zero, multiplicity is not as declared")]
    Multiplicity(usize),
    #[error("residue system is singular; the spectral data are inconsistent")]
    Singular,
    #[error("no limit: {0}")]
    NoLimit(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
