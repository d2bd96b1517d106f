//! JSON input files for potentials and spectral data, and JSON output of results.
//!
//! Numbers may be given as strings in the potential grammar (`"-5/16"`,
//! `"(1/2+i)"`, `"0.25"`), as JSON integers, or as `[re, im]` pairs. Binary
//! floats such as `0.1` are accepted only when the file sets `"exact": false`,
//! and are then converted by their exact binary expansion.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use super::grammar::{parse_expr, parse_potential, to_exp_rational, ParsedPotential};
use super::IoError;
use crate::exact::{ComplexField, Field, Gq, Poly, RationalFunction};
use crate::scattering::{Contour, ContourKind, Jets, PotentialEval, ScatteringRecord};
use crate::synthesis::{ExpRational, SpectralData, SpectralEntry};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Number(serde_json::Number),
    Pair(Vec<Num>),
}

fn yes() -> bool {
    true
}

/// Evaluates a constant expression such as `"-5/16"` or `"(1/2 - 3*i)"`.
pub fn parse_constant(s: &str) -> Result<Gq, IoError> {
    let e = parse_expr(s)?;
    let v = to_exp_rational(&e, &[])?;
    let c = v.num().as_constant().zip(v.den_expanded().as_constant());
    match c {
        Some((n, d)) if !d.is_zero() => Ok(n / d),
        _ => Err(IoError::Semantic(format!("`{}` is not a constant", s))),
    }
}

impl Num {
    fn to_gq(&self, exact: bool) -> Result<Gq, IoError> {
        match self {
            Num::Text(s) => parse_constant(s),
            Num::Number(n) => {
                if let Some(i) = n.as_i64() {
                    return Ok(Gq::int(i));
                }
                let f = n.as_f64().ok_or_else(|| IoError::Format(format!("number {} out of range", n)))?;
                if exact {
                    return Err(IoError::InexactNumber(f));
                }
                Ok(Gq::from_f64_exact(f, 0.0)?)
            }
            Num::Pair(v) => {
                if v.len() != 2 {
                    return Err(IoError::Format("complex pairs must have exactly two entries".into()));
                }
                let re = v[0].to_gq(exact)?;
                let im = v[1].to_gq(exact)?;
                Ok(re + im * Gq::i())
            }
        }
    }
}

fn all_gq(v: &[Num], exact: bool) -> Result<Vec<Gq>, IoError> {
    v.iter().map(|n| n.to_gq(exact)).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialFraction {
    pole: Num,
    order: u32,
    coeff: Num,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootFactor {
    root: Num,
    #[serde(default = "one_u32")]
    multiplicity: u32,
}

fn one_u32() -> u32 {
    1
}

/// Coefficients in ascending powers of `x`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalBlock {
    num: Vec<Num>,
    den: Option<Vec<Num>>,
    den_factors: Option<Vec<RootFactor>>,
}

/// A potential file. Exactly one of the source fields must be present.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    #[serde(default = "yes")]
    exact: bool,
    #[serde(default)]
    name: Option<String>,
    expression: Option<String>,
    partial_fractions: Option<Vec<PartialFraction>>,
    rational: Option<RationalBlock>,
    /// `"sech2"`, `"gaussian"` or `"zero"`.
    builtin: Option<String>,
    basis: Option<Vec<Num>>,
}

/// A loaded potential.
#[derive(Debug, Clone)]
pub enum PotentialSpec {
    Rational(RationalFunction<Gq>),
    Exp(ExpRational),
    Builtin(String),
}

impl PotentialSpec {
    pub fn from_parsed(p: ParsedPotential) -> Self {
        match p {
            ParsedPotential::Rational(r) => PotentialSpec::Rational(r),
            ParsedPotential::Exp(e) => PotentialSpec::Exp(e),
        }
    }

    /// The rational form needed by the quadrature analysis.
    pub fn rational(&self) -> Result<&RationalFunction<Gq>, IoError> {
        match self {
            PotentialSpec::Rational(r) => Ok(r),
            PotentialSpec::Builtin(b) if b == "zero" => Err(IoError::Semantic(
                "use the expression \"0\" for the zero potential in rational contexts".into(),
            )),
            _ => Err(IoError::ExpNotAllowed),
        }
    }

    /// Numerical evaluator for the scattering solver.
    pub fn to_eval(&self, span: f64) -> Result<PotentialEval, IoError> {
        Ok(match self {
            PotentialSpec::Rational(r) => PotentialEval::from_rational(r)?,
            PotentialSpec::Exp(e) => PotentialEval::from_exp_rational(e, span)?,
            PotentialSpec::Builtin(b) => builtin(b)?,
        })
    }
}

fn builtin(name: &str) -> Result<PotentialEval, IoError> {
    match name {
        "sech2" => Ok(PotentialEval::sech2()),
        "gaussian" => Ok(PotentialEval::gaussian()),
        "zero" => Ok(PotentialEval::zero()),
        _ => Err(IoError::Format(format!("unknown builtin potential `{}`", name))),
    }
}

impl PotentialFile {
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn into_spec(self) -> Result<PotentialSpec, IoError> {
        let given = [
            self.expression.is_some(),
            self.partial_fractions.is_some(),
            self.rational.is_some(),
            self.builtin.is_some(),
        ];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(IoError::Format(
                "give exactly one of `expression`, `partial_fractions`, `rational`, `builtin`".into(),
            ));
        }
        let exact = self.exact;
        if let Some(b) = self.builtin {
            builtin(&b)?;
            return Ok(PotentialSpec::Builtin(b));
        }
        if let Some(src) = self.expression {
            let basis = self.basis.as_deref().map(|b| all_gq(b, exact)).transpose()?;
            return Ok(PotentialSpec::from_parsed(parse_potential(&src, basis.as_deref())?));
        }
        if self.basis.is_some() {
            return Err(IoError::Format("`basis` only applies to expressions".into()));
        }
        if let Some(pf) = self.partial_fractions {
            let terms = pf
                .iter()
                .map(|t| {
                    if t.order == 0 {
                        return Err(IoError::Format("partial-fraction order must be positive".into()));
                    }
                    Ok((t.pole.to_gq(exact)?, t.order, t.coeff.to_gq(exact)?))
                })
                .collect::<Result<Vec<_>, IoError>>()?;
            return Ok(PotentialSpec::Rational(RationalFunction::from_partial_fractions(&terms)));
        }
        let r = self.rational.expect("one source is present");
        let num = Poly::new(all_gq(&r.num, exact)?);
        let den = match (r.den, r.den_factors) {
            (Some(d), None) => Poly::new(all_gq(&d, exact)?),
            (None, Some(fs)) => fs.iter().try_fold(Poly::one(), |acc, f| {
                Ok::<_, IoError>(acc * Poly::linear_root(f.root.to_gq(exact)?).pow(f.multiplicity))
            })?,
            (None, None) => Poly::one(),
            (Some(_), Some(_)) => return Err(IoError::Format("give `den` or `den_factors`, not both".into())),
        };
        Ok(PotentialSpec::Rational(RationalFunction::normalize(num, den)?))
    }
}

/// Reads a potential file from its JSON text.
pub fn load_potential(text: &str) -> Result<PotentialSpec, IoError> {
    serde_json::from_str::<PotentialFile>(text)?.into_spec()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundStateEntry {
    k: Num,
    multiplicity: usize,
    a_jet: Vec<Num>,
    b_jet: Vec<Num>,
}

/// A spectral-data file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralFile {
    #[serde(default = "yes")]
    exact: bool,
    #[serde(default)]
    name: Option<String>,
    bound_states: Vec<BoundStateEntry>,
}

impl SpectralFile {
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn into_data(self) -> Result<SpectralData, IoError> {
        let entries = self
            .bound_states
            .iter()
            .map(|b| {
                Ok(SpectralEntry {
                    k: b.k.to_gq(self.exact)?,
                    nu: b.multiplicity,
                    a_jet: all_gq(&b.a_jet, self.exact)?,
                    b_jet: all_gq(&b.b_jet, self.exact)?,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(SpectralData::new(entries)?)
    }
}

pub fn load_spectral(text: &str) -> Result<SpectralData, IoError> {
    serde_json::from_str::<SpectralFile>(text)?.into_data()
}

fn gq_strings(v: &[Gq]) -> Vec<String> {
    v.iter().map(|g| g.to_string()).collect()
}

/// Writes spectral data in the same format [`load_spectral`] reads.
pub fn spectral_to_json(d: &SpectralData) -> Value {
    let states: Vec<Value> = d
        .entries
        .iter()
        .map(|e| {
            json!({
                "k": e.k.to_string(),
                "multiplicity": e.nu,
                "a_jet": gq_strings(&e.a_jet),
                "b_jet": gq_strings(&e.b_jet),
            })
        })
        .collect();
    json!({ "exact": true, "bound_states": states })
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn contour_json(ct: &Contour) -> Value {
    match ct.kind {
        ContourKind::RealLine => json!({ "kind": "real_line", "half_length": ct.half_length }),
        ContourKind::Deformed { c } => json!({ "kind": "deformed", "height": c, "half_length": ct.half_length }),
    }
}

pub fn jets_to_json(j: &Jets) -> Value {
    json!({
        "k": c(j.k),
        "multiplicity": j.nu,
        "a_jet": j.a_jet.iter().map(|z| c(*z)).collect::<Vec<_>>(),
        "b_jet": j.b_jet.iter().map(|z| c(*z)).collect::<Vec<_>>(),
    })
}

/// The full scattering record; complex numbers are `[re, im]` pairs.
pub fn record_to_json(r: &ScatteringRecord) -> Value {
    json!({
        "contour": contour_json(&r.contour),
        "verdict": if r.is_reflectionless() { "reflectionless" } else { "reflecting" },
        "threshold": r.threshold,
        "k": r.k_grid,
        "a": r.a_values.iter().map(|z| c(*z)).collect::<Vec<_>>(),
        "b": r.b_values.iter().map(|z| c(*z)).collect::<Vec<_>>(),
        "rho": r.rho_values.iter().map(|z| z.map(c).unwrap_or(Value::Null)).collect::<Vec<_>>(),
        "bound_states": r.bound_states.iter().map(|b| json!({ "k": c(b.k), "multiplicity": b.nu })).collect::<Vec<_>>(),
        "jets": r.jets.iter().map(jets_to_json).collect::<Vec<_>>(),
        "diagnostics": {
            "unitarity_residual": r.diagnostics.unitarity_residual,
            "wronskian_residual": r.diagnostics.wronskian_residual,
            "max_rho": r.diagnostics.max_rho,
        },
    })
}
