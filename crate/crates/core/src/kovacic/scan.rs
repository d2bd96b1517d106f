use rayon::prelude::*;
use serde_json::{json, Value};

use super::case_b::{case_b_candidates, case_b_families, eq_p_system};
use super::{analyze, pole_profile, r_of, KovacicError, KovacicReport};
use crate::exact::scalar::rationalize_f64;
use crate::exact::{Gq, RationalFunction};

/// Flag threshold on `σ_min/σ_max` of the eq (P) system.
pub const NEAR_SOLVABLE_RATIO: f64 = 1e-8;
/// Target width of refined exceptional-k intervals.
pub const REFINE_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone)]
pub enum KSet {
    /// Exact values of `k²`.
    Exact(Vec<Gq>),
    /// `n` equally spaced real `k` in `[lo, hi]`.
    Grid { lo: f64, hi: f64, n: usize },
}

#[derive(Debug, Clone)]
pub struct ScanPoint {
    /// The grid value of `k` (`None` for exact `k²` input).
    pub k: Option<f64>,
    pub report: KovacicReport,
}

#[derive(Debug, Clone)]
pub struct ExceptionalK {
    pub e: Vec<i64>,
    pub k: f64,
    pub interval: (f64, f64),
    /// `σ_min/σ_max` at the refined point.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub points: Vec<ScanPoint>,
    pub exceptional: Vec<ExceptionalK>,
}

pub fn grid_values(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// The exact value of `k²` used for a grid `k`: `k` is first replaced by its
/// best rational approximation (so `0.51` is analysed as `51/100`).
pub fn exact_k2(k: f64) -> Gq {
    let q = Gq::real(rationalize_f64(k, 1_000_000_000));
    q.clone() * q
}

pub fn solvability_scan(u: &RationalFunction<Gq>, ks: &KSet) -> Result<ScanOutcome, KovacicError> {
    if u.is_zero() || u.is_constant() {
        return Err(KovacicError::ConstantR);
    }
    if u.order_at_infinity() < 1 {
        return Err(KovacicError::NonDecaying);
    }
    match ks {
        KSet::Exact(k2s) => {
            let points = k2s
                .par_iter()
                .map(|k2| analyze(u, k2).map(|report| ScanPoint { k: None, report }))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ScanOutcome { points, exceptional: Vec::new() })
        }
        KSet::Grid { lo, hi, n } => {
            let ks: Vec<f64> = grid_values(*lo, *hi, *n).into_iter().filter(|k| *k != 0.0).collect();
            let points = ks
                .par_iter()
                .map(|&k| analyze(u, &exact_k2(k)).map(|report| ScanPoint { k: Some(k), report }))
                .collect::<Result<Vec<_>, _>>()?;
            let exceptional = locate_exceptional(u, &ks)?;
            Ok(ScanOutcome { points, exceptional })
        }
    }
}

/// `σ_min/σ_max` of the augmented eq (P) matrix and the last component of the null vector.
fn conditioning(sys: &super::EqPSystem, k: f64) -> (f64, f64) {
    let m = sys.numeric_at(k * k);
    let svd = m.svd(false, true);
    let sv = &svd.singular_values;
    let (imin, smin) = sv.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return (f64::NAN, 0.0);
    }
    let last = svd.v_t.as_ref().map_or(0.0, |vt| vt[(imin, vt.ncols() - 1)].norm());
    (smin / smax, last)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, a, b)
}

fn locate_exceptional(u: &RationalFunction<Gq>, ks: &[f64]) -> Result<Vec<ExceptionalK>, KovacicError> {
    if ks.len() < 2 {
        return Ok(Vec::new());
    }
    // Candidates depend on k only through β-coefficients of double poles,
    // which do not involve k, so one representative k is enough.
    let r = r_of(u, &exact_k2(ks[0]));
    let profile = pole_profile(&r)?;
    if !super::necessary_conditions(&profile).b {
        return Ok(Vec::new());
    }
    let families = case_b_families(&r, &profile)?;
    let cands = case_b_candidates(&profile, &families);
    let mut out = Vec::new();
    for cand in &cands {
        let sys = eq_p_system(u, &cand.theta, cand.d_e as usize);
        let g: Vec<f64> = ks.par_iter().map(|&k| conditioning(&sys, k).0).collect();
        for i in 0..ks.len() {
            let left = if i > 0 { g[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < ks.len() { g[i + 1] } else { f64::INFINITY };
            if !(g[i] <= left && g[i] <= right) || g[i].is_nan() {
                continue;
            }
            let a = ks[i.saturating_sub(1)];
            let b = ks[(i + 1).min(ks.len() - 1)];
            let (x, lo, hi) = golden_min(|k| conditioning(&sys, k).0, a.min(b), a.max(b), REFINE_WIDTH);
            let (ratio, last) = conditioning(&sys, x);
            if ratio < NEAR_SOLVABLE_RATIO && last > 1e-6 {
                out.push(ExceptionalK { e: cand.e.clone(), k: x, interval: (lo, hi), ratio });
            }
        }
    }
    out.sort_by(|a, b| a.k.partial_cmp(&b.k).unwrap());
    out.dedup_by(|a, b| (a.k - b.k).abs() < 1e-8 && a.e == b.e);
    Ok(out)
}

impl ScanOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(|p| {
                let mut v = p.report.to_json();
                v["k"] = json!(p.k);
                v
            }).collect::<Vec<_>>(),
            "exceptional_k": self.exceptional.iter().map(|e| json!({
                "e": e.e,
                "k": e.k,
                "interval": [e.interval.0, e.interval.1],
                "sigma_ratio": e.ratio,
            })).collect::<Vec<_>>(),
        })
    }
}
