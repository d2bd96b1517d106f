//! Solvability by quadrature of `v'' = r(x) v` with `r = −k² − u(x)` and rational `u`.
//!
//! The analysis follows the Kovacic recipes restricted to the setting where `r`
//! has order zero at infinity: necessary conditions from the pole profile, the
//! `d_c` screen for case (a) and the complete case (b) search for a monic
//! polynomial `P`. Case (a) is never completed, so passing its screen yields
//! `Inconclusive` rather than a claim either way.

mod case_a;
mod case_b;
mod profile;
mod scan;

pub use case_a::{case_a_screen, CaseAScreen, CaseAVerdict, KappaPair, PointLabel, Sign};
pub use case_b::{
    asymptotic_exponents, case_b_candidates, case_b_families, case_b_solve, eq_p_system, AsymptoticExponent,
    CaseBCandidate, CaseBResult, CaseBSolution, EqPSystem,
};
pub use profile::{necessary_conditions, pole_profile, NecessaryConditions, PoleProfile};
pub use scan::{solvability_scan, ExceptionalK, KSet, ScanOutcome, ScanPoint};

use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{ExactError, Field, Gq, Poly, RationalFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KovacicError {
    #[error("r(x) is constant; the recipes need r ∈ ℂ(x)∖ℂ")]
    ConstantR,
    #[error("pole near {0} could not be located exactly")]
    InexactPole(String),
    #[error("order of r at infinity is {0}; only order zero is supported")]
    UnsupportedOrderAtInfinity(i64),
    #[error("pole of odd order {0} > 1 has no κ recipe")]
    UnsupportedOddPole(u32),
    #[error("potential does not decay at infinity (deg num ≥ deg den)")]
    NonDecaying,
    #[error("k must be nonzero")]
    ZeroK,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SolvableCaseB,
    NotSolvable,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::SolvableCaseB => "SolvableCaseB",
            Verdict::NotSolvable => "NotSolvable",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct KovacicReport {
    pub k2: Gq,
    pub profile: PoleProfile,
    pub necessary: NecessaryConditions,
    /// `None` when condition (a) fails, which already rules case (a) out.
    pub case_a: Option<CaseAScreen>,
    /// `None` when condition (b) fails.
    pub case_b: Option<CaseBResult>,
    pub verdict: Verdict,
}

/// `r = −k² − u`.
pub fn r_of(u: &RationalFunction<Gq>, k2: &Gq) -> RationalFunction<Gq> {
    &RationalFunction::constant(-k2.clone()) - u
}

/// Full analysis of `v'' = (−k² − u) v` at an exact value of `k²`.
pub fn analyze(u: &RationalFunction<Gq>, k2: &Gq) -> Result<KovacicReport, KovacicError> {
    if k2.is_zero() {
        return Err(KovacicError::ZeroK);
    }
    let r = r_of(u, k2);
    let profile = pole_profile(&r)?;
    let necessary = necessary_conditions(&profile);
    let case_a = if necessary.a { Some(case_a_screen(&r, &profile)?) } else { None };
    let case_b = if necessary.b {
        let families = case_b_families(&r, &profile)?;
        let candidates = case_b_candidates(&profile, &families);
        let solution = candidates.iter().find_map(|c| case_b_solve(&r, c).transpose()).transpose()?;
        Some(CaseBResult { families, candidates, solution })
    } else {
        None
    };
    let verdict = decide(&necessary, case_a.as_ref(), case_b.as_ref());
    Ok(KovacicReport { k2: k2.clone(), profile, necessary, case_a, case_b, verdict })
}

fn decide(n: &NecessaryConditions, a: Option<&CaseAScreen>, b: Option<&CaseBResult>) -> Verdict {
    if b.is_some_and(|b| b.solution.is_some()) {
        return Verdict::SolvableCaseB;
    }
    let a_excluded = match a {
        None => true,
        Some(s) => s.verdict == CaseAVerdict::Excluded,
    };
    if a_excluded && !n.c {
        Verdict::NotSolvable
    } else {
        Verdict::Inconclusive
    }
}

pub(crate) fn poly_json(p: &Poly<Gq>) -> Value {
    json!(format!("{}", p))
}

impl KovacicReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k2": format!("{}", self.k2),
            "profile": self.profile.to_json(),
            "necessary": { "a": self.necessary.a, "b": self.necessary.b, "c": self.necessary.c },
            "case_a": self.case_a.as_ref().map(|s| s.to_json()),
            "case_b": self.case_b.as_ref().map(|s| s.to_json()),
            "verdict": self.verdict.as_str(),
        })
    }
}
