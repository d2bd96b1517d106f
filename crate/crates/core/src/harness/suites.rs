//! Named verification suites.

use super::roundtrip::corpus_report;
use super::{check_kovacic_consistency, check_stokes, check_unitarity, corpus, HarnessError, RoundtripTolerances, VerificationReport};
use crate::exact::{Gq, RationalFunction};
use crate::scattering::{scan_reflection, scattering_coeffs, symmetric_grid, Contour, PotentialEval};

pub const SUITES: [&str; 4] = ["identities", "roundtrip", "quadrature", "all"];

/// The rational potential with double and simple poles at 0 and 1 and tail `−2/(3x)`.
fn two_pole_potential() -> RationalFunction<Gq> {
    RationalFunction::from_partial_fractions(&[
        (Gq::int(0), 2, Gq::frac(-5, 16)),
        (Gq::int(1), 2, Gq::frac(-5, 16)),
        (Gq::int(0), 1, Gq::frac(-7, 8)),
        (Gq::int(1), 1, Gq::frac(5, 24)),
    ])
}

fn identities(tol: f64) -> Result<VerificationReport, HarnessError> {
    let mut rep = VerificationReport::new("identities");
    let cases: [(&str, PotentialEval, f64); 3] = [
        ("zero", PotentialEval::zero(), 1e-12),
        ("2 sech^2 x", PotentialEval::sech2(), 1e-6),
        ("exp(-x^2)", PotentialEval::gaussian(), 1e-6),
    ];
    for (name, u, bound) in cases {
        rep.inputs.push(format!("{}: real line, L = 20", name));
        let c = Contour::real_line(20.0);
        let rec = scan_reflection(&u, &symmetric_grid(0.3, 3.0, 11), &c, tol, 1e-6)?;
        let mut chk = check_unitarity(&rec, bound)?;
        chk.name = format!("{}: unitarity", name);
        rep.push(chk);
        let p = scattering_coeffs(&u, 1.0, &c, tol)?;
        let m = scattering_coeffs(&u, -1.0, &c, tol)?;
        let mut chk = check_stokes(p.a, (p.b, m.b), m.a, bound);
        chk.name = format!("{}: stokes at k = 1", name);
        rep.push(chk);
    }
    Ok(rep)
}

fn quadrature() -> Result<VerificationReport, HarnessError> {
    let mut rep = VerificationReport::new("quadrature");
    let coulomb = RationalFunction::pole_term(Gq::int(1), Gq::int(0), 1);
    for (name, u) in [("two-pole potential", two_pole_potential()), ("1/x", coulomb)] {
        rep.inputs.push(format!("{}: u = {}, k in [0.5, 1.5], 101 points", name, u));
        let mut chk = check_kovacic_consistency(&u, (0.5, 1.5, 101), 1e-6)?;
        chk.name = format!("{}: quadrature scan", name);
        rep.push(chk);
    }
    Ok(rep)
}

fn roundtrips(tol: f64) -> VerificationReport {
    let t = RoundtripTolerances { tol, ..Default::default() };
    let mut rep = VerificationReport::new("roundtrip");
    for e in corpus() {
        rep.extend(corpus_report(&e, &t));
    }
    rep.extend(super::roundtrip("empty", &Default::default(), &t));
    rep
}

/// Runs a suite by name; see [`SUITES`].
pub fn run_suite(name: &str, tol: f64) -> Result<VerificationReport, HarnessError> {
    match name {
        "identities" => identities(tol),
        "roundtrip" => Ok(roundtrips(tol)),
        "quadrature" => quadrature(),
        "all" => {
            let mut rep = VerificationReport::new("all");
            rep.extend(identities(tol)?);
            rep.extend(quadrature()?);
            rep.extend(roundtrips(tol));
            Ok(rep)
        }
        _ => Err(HarnessError::UnknownSuite(name.to_string())),
    }
}
