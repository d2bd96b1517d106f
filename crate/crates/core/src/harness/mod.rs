//! Cross-pipeline verification: scattering identities, the Stokes-matrix
//! relation, the synthesis/scattering round trip and the quadrature scan
//! pattern, collected into a deterministic [`VerificationReport`].

mod identities;
mod oracle;
mod roundtrip;
mod suites;

pub use identities::{check_kovacic_consistency, check_stokes, check_unitarity, stokes_matrices, StokesMatrices};
pub use oracle::{polar_part, reflectionless_oracle};
pub use roundtrip::{corpus, corpus_report, roundtrip, CorpusEntry, RoundtripTolerances};
pub use suites::{run_suite, SUITES};

use serde_json::{json, Value};
use thiserror::Error;

use crate::kovacic::KovacicError;
use crate::scattering::ScatteringError;
use crate::synthesis::SynthesisError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("grid is not symmetric under k -> -k")]
    AsymmetricGrid,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Kovacic(#[from] KovacicError),
}

/// One verified identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// The identity being tested, in words or symbols.
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, identity: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            identity: identity.to_string(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
            detail: None,
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// A check that could not be evaluated because a pipeline stage failed.
    pub fn failed_stage(name: &str, stage: &str, err: &dyn std::fmt::Display) -> Self {
        Check {
            name: name.to_string(),
            identity: format!("stage `{}` completes", stage),
            residual: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
            detail: Some(format!("{}: {}", stage, err)),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "identity": self.identity,
            "residual": if self.residual.is_finite() { json!(self.residual) } else { Value::Null },
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub suite: String,
    /// Human-readable descriptions of the inputs.
    pub inputs: Vec<String>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport { suite: suite.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.inputs.extend(other.inputs);
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "inputs": self.inputs,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {}: {}\n", self.suite, if self.passed() { "PASS" } else { "FAIL" });
        for c in &self.checks {
            s.push_str(&format!(
                "  [{}] {:<40} residual {:>10.3e}  tol {:.1e}  ({})\n",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance,
                c.identity
            ));
            if let Some(d) = &c.detail {
                s.push_str(&format!("         {}\n", d));
            }
        }
        s
    }
}
