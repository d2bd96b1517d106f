//! Potential grammar, JSON input files and CSV/JSON emitters.

mod csv;
mod files;
mod grammar;

pub use csv::{coefficients_csv, potential_csv, COEFFICIENT_HEADER, POTENTIAL_HEADER};
pub use files::{
    jets_to_json, load_potential, load_spectral, parse_constant, record_to_json, spectral_to_json, PotentialFile,
    PotentialSpec, SpectralFile,
};
pub use grammar::{generator_basis, parse_expr, parse_potential, parse_rational_potential, Expr, ParsedPotential};

use thiserror::Error;

use crate::exact::ExactError;
use crate::scattering::ScatteringError;
use crate::synthesis::SynthesisError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("exponential atoms are not allowed here; this input must be a rational function of x")]
    ExpNotAllowed,
    #[error("inexact number {0} in an exact file; quote it as a string or set \"exact\": false")]
    InexactNumber(f64),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
}
