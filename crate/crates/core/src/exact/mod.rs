//! Exact arithmetic over the Gaussian rationals ℚ(i): scalars, polynomials,
//! rational functions, truncated Laurent series, surds and linear solving.

pub mod linsolve;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod surd;

pub use linsolve::{solve_linear_exact, SolutionSet};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use roots::{find_poles, PoleLocation};
pub use scalar::{rat, ComplexField, Field, Gq};
pub use series::{laurent_expand, series_sqrt, Center, LaurentSeries};
pub use surd::Surd;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole")]
    PoleEvaluation,
    #[error("non-finite floating value cannot be converted exactly")]
    NonFinite,
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("series known only through order {available}, order {needed} requested")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("odd leading order {0}: no square root in the Laurent field")]
    OddLeadingOrder(i64),
    #[error("square root of {0} is not in the coefficient field")]
    NoExactSqrt(String),
    #[error("series is identically zero through its truncation order")]
    ZeroSeries,
    #[error("center mismatch between series operands")]
    CenterMismatch,
}
