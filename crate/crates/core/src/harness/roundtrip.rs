//! Spectral data → closed-form potential → numerical scattering → spectral data.

use num_complex::Complex64;

use super::oracle::{polar_part, reflectionless_oracle};
use super::{check_unitarity, Check, VerificationReport};
use crate::exact::{ComplexField, Gq};
use crate::scattering::{
    extract_jets, find_bound_states, jost_profile, scan_reflection, symmetric_grid, Contour, ContourKind,
    PotentialEval, SearchBox,
};
use crate::synthesis::{eval_psi, synthesize, SpectralData, SpectralEntry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundtripTolerances {
    /// Integration tolerance.
    pub tol: f64,
    pub reflectionless: f64,
    pub unitarity_real: f64,
    pub unitarity_deformed: f64,
    pub bound_state: f64,
    pub jet: f64,
    pub psi: f64,
    pub oracle: f64,
    /// Positive half of the symmetric `k` grid: `(lo, hi, n)`.
    pub grid: (f64, f64, usize),
}

impl Default for RoundtripTolerances {
    fn default() -> Self {
        RoundtripTolerances {
            tol: 1e-10,
            reflectionless: 1e-6,
            unitarity_real: 1e-6,
            unitarity_deformed: 1e-4,
            bound_state: 1e-5,
            jet: 1e-4,
            psi: 1e-6,
            oracle: 1e-8,
            grid: (0.3, 3.0, 6),
        }
    }
}

/// Sample points (on the path parameter) where the closed forms are compared.
const PROFILE_POINTS: [f64; 6] = [-3.0, -1.2, -0.4, 0.0, 0.6, 2.5];
/// Real `k` at which `ψ` is compared.
const PROFILE_K: f64 = 0.7;

fn c(g: &Gq) -> Complex64 {
    g.to_c64()
}

fn search_box(data: &SpectralData) -> SearchBox {
    let ks: Vec<Complex64> = data.entries.iter().map(|e| c(&e.k)).collect();
    let re = ks.iter().map(|k| k.re.abs()).fold(0.0, f64::max) + 1.5;
    let im_lo = ks.iter().map(|k| 0.5 * k.im).fold(0.1, f64::min);
    let im_hi = ks.iter().map(|k| k.im).fold(0.0, f64::max) + 1.0;
    SearchBox::new((-re, re), (im_lo, im_hi))
}

fn relative(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / (1.0 + y.norm())
}

/// Runs the loop on `data` and reports every comparison. Stage failures
/// become failed checks naming the stage; they never panic or abort the report.
pub fn roundtrip(name: &str, data: &SpectralData, t: &RoundtripTolerances) -> VerificationReport {
    let mut rep = VerificationReport::new(name);
    rep.inputs.push(describe(name, data));
    let syn = match synthesize(data) {
        Ok(s) => s,
        Err(e) => {
            rep.push(Check::failed_stage(&format!("{}: synthesis", name), "synthesis", &e));
            return rep;
        }
    };
    if data.entries.is_empty() {
        let zero = if syn.potential.is_zero() { 0.0 } else { 1.0 };
        rep.push(Check::new(&format!("{}: empty data", name), "no bound states gives u = 0", zero, 0.0));
        return rep;
    }
    let u = match PotentialEval::from_exp_rational(&syn.potential, 20.0) {
        Ok(u) => u,
        Err(e) => {
            rep.push(Check::failed_stage(&format!("{}: evaluator", name), "evaluator", &e));
            return rep;
        }
    };
    let contour = match Contour::auto(&u, None) {
        Ok(c) => c,
        Err(e) => {
            rep.push(Check::failed_stage(&format!("{}: contour", name), "contour", &e));
            return rep;
        }
    };
    rep.inputs.push(format!("{}: contour {:?}, u = {}", name, contour.kind, u.label));

    let (lo, hi, n) = t.grid;
    match scan_reflection(&u, &symmetric_grid(lo, hi, n), &contour, t.tol, t.reflectionless) {
        Ok(rec) => {
            rep.push(Check::new(
                &format!("{}: reflectionless", name),
                "max |b/a| on the real grid vanishes",
                rec.diagnostics.max_rho,
                t.reflectionless,
            ));
            let tol = match contour.kind {
                ContourKind::RealLine => t.unitarity_real,
                ContourKind::Deformed { .. } => t.unitarity_deformed,
            };
            if let Ok(mut chk) = check_unitarity(&rec, tol) {
                chk.name = format!("{}: unitarity", name);
                rep.push(chk);
            }
        }
        Err(e) => rep.push(Check::failed_stage(&format!("{}: scan", name), "scattering scan", &e)),
    }

    bound_state_checks(name, data, &u, &contour, t, &mut rep);

    let k = Complex64::new(PROFILE_K, 0.0);
    match jost_profile(&u, k, &contour, t.tol.min(1e-11), &PROFILE_POINTS) {
        Ok(pts) => {
            let res = pts
                .iter()
                .map(|p| match eval_psi(&syn.psi, p.z, k).value() {
                    Some(want) => relative(p.psi, want),
                    None => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            rep.push(Check::new(&format!("{}: jost solution", name), "closed-form psi equals integrated psi", res, t.psi));
        }
        Err(e) => rep.push(Check::failed_stage(&format!("{}: jost profile", name), "jost profile", &e)),
    }

    if data.entries.iter().all(|e| e.nu == 1) {
        let states: Vec<_> = data.entries.iter().map(|e| (c(&e.k), c(&e.a_jet[0]), c(&e.b_jet[0]))).collect();
        let res = PROFILE_POINTS
            .iter()
            .map(|&xi| {
                let z = contour.point(xi).0;
                match (u.eval(z), reflectionless_oracle(&states, z)) {
                    (Some(p), Some(q)) => relative(p, q),
                    _ => f64::INFINITY,
                }
            })
            .fold(0.0, f64::max);
        rep.push(Check::new(
            &format!("{}: determinant oracle", name),
            "u equals 2 (log det(I + A))''",
            res,
            t.oracle,
        ));
    }
    rep
}

fn bound_state_checks(
    name: &str,
    data: &SpectralData,
    u: &PotentialEval,
    contour: &Contour,
    t: &RoundtripTolerances,
    rep: &mut VerificationReport,
) {
    let found = match find_bound_states(u, contour, search_box(data), t.tol) {
        Ok(f) => f,
        Err(e) => {
            rep.push(Check::failed_stage(&format!("{}: bound states", name), "bound-state search", &e));
            return;
        }
    };
    let mut loc = 0.0f64;
    let mut matched = Vec::new();
    let mut mult_ok = found.len() == data.entries.len();
    for e in &data.entries {
        let k = c(&e.k);
        match found.iter().min_by(|p, q| (p.k - k).norm().total_cmp(&(q.k - k).norm())) {
            Some(f) => {
                loc = loc.max((f.k - k).norm());
                mult_ok &= f.nu == e.nu;
                matched.push((e, f.k));
            }
            None => loc = f64::INFINITY,
        }
    }
    let found_text: Vec<String> = found.iter().map(|b| format!("({:.8}, {})", b.k, b.nu)).collect();
    let mut chk = Check::new(&format!("{}: bound states", name), "zeros of a and their orders", loc, t.bound_state)
        .with_detail(format!("found [{}]", found_text.join(", ")));
    if !mult_ok {
        chk.passed = false;
    }
    rep.push(chk);
    if !mult_ok {
        return;
    }
    for (e, k) in matched {
        jet_checks(name, e, k, u, contour, t, rep);
    }
}

fn jet_checks(
    name: &str,
    e: &SpectralEntry,
    k: Complex64,
    u: &PotentialEval,
    contour: &Contour,
    t: &RoundtripTolerances,
    rep: &mut VerificationReport,
) {
    let tag = format!("{}: k = {}", name, e.k);
    let j = match extract_jets(u, k, e.nu, None, contour, t.tol) {
        Ok(j) => j,
        Err(err) => {
            rep.push(Check::failed_stage(&format!("{} jets", tag), "jet extraction", &err));
            return;
        }
    };
    let a0 = relative(j.a_jet[0], c(&e.a_jet[0]));
    let b0 = relative(j.b_jet[0], c(&e.b_jet[0]));
    rep.push(Check::new(&format!("{} leading jets", tag), "leading a- and b-jet values", a0.max(b0), t.jet));
    let want = polar_part(
        e.nu,
        &e.a_jet.iter().map(c).collect::<Vec<_>>(),
        &e.b_jet.iter().map(c).collect::<Vec<_>>(),
    );
    let got = polar_part(e.nu, &j.a_jet, &j.b_jet);
    let res = got.iter().zip(&want).map(|(g, w)| relative(*g, *w)).fold(0.0, f64::max);
    rep.push(Check::new(&format!("{} principal part", tag), "principal part of b/a", res, t.jet));
}

fn describe(name: &str, data: &SpectralData) -> String {
    let parts: Vec<String> = data
        .entries
        .iter()
        .map(|e| {
            let a: Vec<String> = e.a_jet.iter().map(|g| g.to_string()).collect();
            let b: Vec<String> = e.b_jet.iter().map(|g| g.to_string()).collect();
            format!("k = {}, nu = {}, a-jet [{}], b-jet [{}]", e.k, e.nu, a.join(", "), b.join(", "))
        })
        .collect();
    format!("{}: {}", name, if parts.is_empty() { "no bound states".to_string() } else { parts.join("; ") })
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub data: SpectralData,
    /// An independent closed form for `u` on the real line, when known.
    pub reference: Option<fn(f64) -> f64>,
}

fn entry(k: Gq, a: Vec<Gq>, b: Vec<Gq>) -> SpectralEntry {
    SpectralEntry { k, nu: a.len(), a_jet: a, b_jet: b }
}

fn sech2(x: f64) -> f64 {
    2.0 / x.cosh().powi(2)
}

/// The bundled data sets: a double zero at `i`, the one-soliton, and two
/// simple zeros at `i, 2i` taken from `a = (k−i)(k−2i)/((k+i)(k+2i))` with `b = 1` at both.
pub fn corpus() -> Vec<CorpusEntry> {
    let i = Gq::i();
    let two_i = Gq::cplx((0, 1), (2, 1));
    vec![
        CorpusEntry {
            name: "double-zero",
            data: SpectralData::new(vec![entry(i.clone(), vec![Gq::frac(-1, 2), Gq::int(0)], vec![Gq::int(1), Gq::int(0)])])
                .expect("valid"),
            reference: None,
        },
        CorpusEntry {
            name: "one-soliton",
            data: SpectralData::new(vec![entry(i.clone(), vec![Gq::cplx((0, 1), (-1, 2))], vec![Gq::int(1)])])
                .expect("valid"),
            reference: Some(sech2),
        },
        CorpusEntry {
            name: "two-state",
            data: SpectralData::new(vec![
                entry(i, vec![Gq::cplx((0, 1), (1, 6))], vec![Gq::int(1)]),
                entry(two_i, vec![Gq::cplx((0, 1), (-1, 12))], vec![Gq::int(1)]),
            ])
            .expect("valid"),
            reference: None,
        },
    ]
}

/// Round trip plus, when available, a comparison with the reference closed form.
pub fn corpus_report(e: &CorpusEntry, t: &RoundtripTolerances) -> VerificationReport {
    let mut rep = roundtrip(e.name, &e.data, t);
    if let Some(f) = e.reference {
        match synthesize(&e.data) {
            Ok(s) => {
                let res = (0..=40)
                    .map(|j| {
                        let x = -5.0 + 0.25 * j as f64;
                        match crate::synthesis::eval_expr(&s.potential, x.into(), Complex64::new(0.0, 0.0)).value() {
                            Some(v) => (v - f(x)).norm(),
                            None => f64::INFINITY,
                        }
                    })
                    .fold(0.0, f64::max);
                rep.push(Check::new(&format!("{}: reference", e.name), "u equals its known closed form", res, 1e-10));
            }
            Err(err) => rep.push(Check::failed_stage(&format!("{}: reference", e.name), "synthesis", &err)),
        }
    }
    rep
}
