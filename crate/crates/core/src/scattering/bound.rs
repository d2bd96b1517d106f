//! Zeros of `a(k)` in the upper half plane and the derivative jets there.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use super::contour::Contour;
use super::jost::{a_coefficient, best_ratio_point, phi_psi_ratio};
use super::potential::PotentialEval;
use super::ScatteringError;
use crate::exact::roots::numeric_roots_with_multiplicity;
use crate::exact::Poly;

/// Nodes on every Cauchy circle.
pub const CIRCLE_NODES: usize = 64;
/// Default jet radius as a fraction of `Im k_j`.
pub const JET_RADIUS_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl SearchBox {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        SearchBox { re, im }
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re.0 + self.re.1), 0.5 * (self.im.0 + self.im.1))
    }

    fn half_diagonal(&self) -> f64 {
        0.5 * (self.re.1 - self.re.0).hypot(self.im.1 - self.im.0)
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re.0, self.im.0),
            Complex64::new(self.re.1, self.im.0),
            Complex64::new(self.re.1, self.im.1),
            Complex64::new(self.re.0, self.im.1),
        ]
    }

    /// Four children meeting at the point with fractional position `t`.
    fn split(&self, t: f64) -> [SearchBox; 4] {
        let xm = self.re.0 + t * (self.re.1 - self.re.0);
        let ym = self.im.0 + t * (self.im.1 - self.im.0);
        [
            SearchBox::new((self.re.0, xm), (self.im.0, ym)),
            SearchBox::new((xm, self.re.1), (self.im.0, ym)),
            SearchBox::new((self.re.0, xm), (ym, self.im.1)),
            SearchBox::new((xm, self.re.1), (ym, self.im.1)),
        ]
    }

    fn contains(&self, k: Complex64) -> bool {
        k.re >= self.re.0 && k.re <= self.re.1 && k.im >= self.im.0 && k.im <= self.im.1
    }
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox::new((-4.0, 4.0), (0.05, 4.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub k: Complex64,
    pub nu: usize,
}

/// `a^{(m)}(k_j)` for `m = ν … 2ν−1` and the jet `b^{(r)}(k_j)`, `r < ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jets {
    pub k: Complex64,
    pub nu: usize,
    pub a_jet: Vec<Complex64>,
    pub b_jet: Vec<Complex64>,
}

/// Memoised `a(k)` shared by all boxes of one search.
struct AEval<'a> {
    u: &'a PotentialEval,
    contour: &'a Contour,
    tol: f64,
    cache: Mutex<HashMap<(u64, u64), Complex64>>,
}

impl AEval<'_> {
    fn many(&self, ks: &[Complex64]) -> Result<Vec<Complex64>, ScatteringError> {
        let key = |k: &Complex64| (k.re.to_bits(), k.im.to_bits());
        let missing: Vec<Complex64> = {
            let c = self.cache.lock().unwrap();
            ks.iter().filter(|k| !c.contains_key(&key(k))).copied().collect()
        };
        let fresh: Vec<(Complex64, Complex64)> = missing
            .par_iter()
            .map(|&k| a_coefficient(self.u, k, self.contour, self.tol).map(|a| (k, a)))
            .collect::<Result<_, _>>()?;
        let mut c = self.cache.lock().unwrap();
        for (k, a) in fresh {
            c.insert(key(&k), a);
        }
        Ok(ks.iter().map(|k| c[&key(k)]).collect())
    }
}

fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

const MAX_EDGE_DEPTH: u32 = 14;

/// Change of `arg a` along the segment `[z0, z1]`, refined until consecutive
/// samples differ by less than `π/4` in phase.
fn edge_phase(ev: &AEval, z0: Complex64, z1: Complex64, pieces: usize) -> Result<f64, ScatteringError> {
    let mut pts: Vec<Complex64> = (0..=pieces).map(|i| z0 + (z1 - z0) * (i as f64 / pieces as f64)).collect();
    let mut vals = ev.many(&pts)?;
    for depth in 0..=MAX_EDGE_DEPTH {
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if vals.iter().any(|v| v.norm() <= 1e-9 * scale) {
            return Err(ScatteringError::BoundaryZero);
        }
        let bad: Vec<usize> = (0..pts.len() - 1).filter(|&i| phase_step(vals[i], vals[i + 1]).abs() > PI / 4.0).collect();
        if bad.is_empty() {
            return Ok((0..pts.len() - 1).map(|i| phase_step(vals[i], vals[i + 1])).sum());
        }
        if depth == MAX_EDGE_DEPTH {
            return Err(ScatteringError::BoundaryZero);
        }
        let mids: Vec<Complex64> = bad.iter().map(|&i| 0.5 * (pts[i] + pts[i + 1])).collect();
        let mv = ev.many(&mids)?;
        for (j, &i) in bad.iter().enumerate().rev() {
            pts.insert(i + 1, mids[j]);
            vals.insert(i + 1, mv[j]);
        }
    }
    unreachable!()
}

fn winding(ev: &AEval, b: &SearchBox) -> Result<i64, ScatteringError> {
    let c = b.corners();
    let mut total = 0.0;
    for i in 0..4 {
        total += edge_phase(ev, c[i], c[(i + 1) % 4], 8)?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Samples of `f` on the circle `|k − c| = r`.
fn circle_nodes(c: Complex64, r: f64) -> Vec<Complex64> {
    (0..CIRCLE_NODES)
        .map(|m| c + Complex64::from_polar(r, 2.0 * PI * m as f64 / CIRCLE_NODES as f64))
        .collect()
}

/// Scaled Taylor coefficients `f^{(n)}(c) r^n / n!` from circle samples.
fn taylor_scaled(vals: &[Complex64]) -> Vec<Complex64> {
    let n = vals.len();
    (0..n)
        .map(|p| {
            vals.iter()
                .enumerate()
                .map(|(m, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (p * m) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

/// Zero count and clustered zeros of `a` inside the circle `|k − c| < r`.
fn circle_zeros(ev: &AEval, c: Complex64, r: f64) -> Result<(usize, Vec<BoundState>), ScatteringError> {
    let nodes = circle_nodes(c, r);
    let vals = ev.many(&nodes)?;
    let t = taylor_scaled(&vals);
    // logarithmic derivative on the nodes from the truncated series
    let half = CIRCLE_NODES / 2;
    let count: Complex64 = (0..CIRCLE_NODES)
        .map(|m| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / CIRCLE_NODES as f64);
            let d: Complex64 = (1..half).map(|p| t[p] * p as f64 * w.powu(p as u32)).sum();
            d / vals[m]
        })
        .sum::<Complex64>()
        / CIRCLE_NODES as f64;
    let nu = count.re.round().max(0.0) as usize;
    if (count.re - nu as f64).abs() > 0.1 || count.im.abs() > 0.1 {
        return Err(ScatteringError::NotConverged(format!("zero count {} on circle at {}", count, c)));
    }
    if nu == 0 {
        return Ok((0, Vec::new()));
    }
    let big = t.iter().take(half).map(|v| v.norm()).fold(0.0, f64::max);
    let deg = (0..half).rev().find(|&p| t[p].norm() > 1e-13 * big).unwrap_or(0);
    let poly = Poly::new(t[..=deg].to_vec());
    let roots: Vec<(Complex64, usize)> = numeric_roots_with_multiplicity(&poly, 1e-3)
        .into_iter()
        .filter(|(z, _)| z.norm() < 0.95)
        .collect();
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    let zeros = if found == nu {
        roots.into_iter().map(|(z, m)| BoundState { k: c + z * r, nu: m }).collect()
    } else {
        // fall back to the first moment of the logarithmic derivative
        let s: Complex64 = (0..CIRCLE_NODES)
            .map(|m| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / CIRCLE_NODES as f64);
                let d: Complex64 = (1..half).map(|p| t[p] * p as f64 * w.powu(p as u32)).sum();
                d / vals[m] * w
            })
            .sum::<Complex64>()
            / CIRCLE_NODES as f64;
        vec![BoundState { k: c + s * r / nu as f64, nu }]
    };
    Ok((nu, zeros))
}

const MAX_BOX_DEPTH: u32 = 10;
const SPLIT_POINTS: [f64; 3] = [0.5317, 0.4581, 0.5773];

fn locate(ev: &AEval, b: SearchBox, w: i64, depth: u32, out: &mut Vec<BoundState>) -> Result<(), ScatteringError> {
    if w == 0 {
        return Ok(());
    }
    let center = b.center();
    let r = 1.05 * b.half_diagonal();
    if r < 0.5 * center.im {
        if let Ok((nu, zeros)) = circle_zeros(ev, center, r) {
            let inside: Vec<BoundState> = zeros.into_iter().filter(|z| b.contains(z.k)).collect();
            if nu as i64 == w && inside.iter().map(|z| z.nu as i64).sum::<i64>() == w {
                out.extend(inside);
                return Ok(());
            }
        }
    }
    if depth >= MAX_BOX_DEPTH {
        return Err(ScatteringError::NotConverged(format!("could not isolate {} zeros near {}", w, center)));
    }
    // off-centre cuts, since symmetric potentials put zeros on the midlines
    for t in SPLIT_POINTS {
        let children = b.split(t);
        let windings: Result<Vec<i64>, ScatteringError> = children.iter().map(|c| winding(ev, c)).collect();
        match windings {
            Ok(ws) => {
                for (child, wc) in children.into_iter().zip(ws) {
                    locate(ev, child, wc, depth + 1, out)?;
                }
                return Ok(());
            }
            Err(ScatteringError::BoundaryZero) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(ScatteringError::BoundaryZero)
}

/// Refines an isolated zero with a small circle around it.
fn polish(ev: &AEval, z: BoundState) -> BoundState {
    let r = JET_RADIUS_FRACTION * z.k.im;
    match circle_zeros(ev, z.k, r) {
        Ok((nu, zs)) if nu == z.nu && zs.len() == 1 => zs[0],
        _ => z,
    }
}

/// All zeros of `a` inside `bx` with multiplicities. A zero on the box
/// boundary triggers a slightly shifted retry.
pub fn find_bound_states(
    u: &PotentialEval,
    contour: &Contour,
    bx: SearchBox,
    tol: f64,
) -> Result<Vec<BoundState>, ScatteringError> {
    if bx.im.0 <= 0.0 || bx.re.0 >= bx.re.1 || bx.im.0 >= bx.im.1 {
        return Err(ScatteringError::Invalid("search box must lie strictly in the upper half plane".into()));
    }
    if u.is_zero() {
        return Ok(Vec::new());
    }
    let ev = AEval { u, contour, tol, cache: Mutex::new(HashMap::new()) };
    let shifts = [0.0, 0.0123, -0.0217];
    let mut last = ScatteringError::BoundaryZero;
    for s in shifts {
        let b = SearchBox::new((bx.re.0 - s, bx.re.1 + s), ((bx.im.0 + s.abs() * 0.5).max(bx.im.0 * 0.5), bx.im.1 + s));
        let w = match winding(&ev, &b) {
            Ok(w) => w,
            Err(ScatteringError::BoundaryZero) => continue,
            Err(e) => return Err(e),
        };
        let mut out = Vec::new();
        match locate(&ev, b, w, 0, &mut out) {
            Ok(()) => {
                let mut zs: Vec<BoundState> = out.into_iter().map(|z| polish(&ev, z)).collect();
                zs.sort_by(|a, b| b.k.im.total_cmp(&a.k.im).then(a.k.re.total_cmp(&b.k.re)));
                let total: usize = zs.iter().map(|z| z.nu).sum();
                if total as i64 != w {
                    return Err(ScatteringError::NotConverged(format!("winding {} but {} zeros located", w, total)));
                }
                return Ok(zs);
            }
            Err(ScatteringError::BoundaryZero) => last = ScatteringError::BoundaryZero,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Cauchy-integral derivatives of `a` (orders `ν … 2ν−1`) and of the
/// connection constant `φ/ψ` (orders `0 … ν−1`) on a circle of radius
/// `radius` about `k_j`.
pub fn extract_jets(
    u: &PotentialEval,
    kj: Complex64,
    nu: usize,
    radius: Option<f64>,
    contour: &Contour,
    tol: f64,
) -> Result<Jets, ScatteringError> {
    if nu == 0 || kj.im <= 0.0 {
        return Err(ScatteringError::Invalid("jets need a bound state in the upper half plane".into()));
    }
    let r = radius.unwrap_or(JET_RADIUS_FRACTION * kj.im);
    if r >= kj.im {
        return Err(ScatteringError::Invalid("jet circle leaves the upper half plane".into()));
    }
    let nodes = circle_nodes(kj, r);
    let xi0 = best_ratio_point(u, kj, contour, tol)?;
    let pairs: Vec<(Complex64, Complex64)> = nodes
        .par_iter()
        .map(|&k| Ok((a_coefficient(u, k, contour, tol)?, phi_psi_ratio(u, k, contour, tol, xi0)?)))
        .collect::<Result<_, ScatteringError>>()?;
    let ta = taylor_scaled(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let tb = taylor_scaled(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    let deriv = |t: &[Complex64], n: usize| t[n] * factorial(n) / r.powi(n as i32);
    let scale = pairs.iter().map(|p| p.0.norm()).fold(0.0, f64::max);
    if ta[nu].norm() < 1e-6 * scale || (0..nu).any(|p| ta[p].norm() > 1e-4 * scale.max(ta[nu].norm())) {
        return Err(ScatteringError::Multiplicity { k: kj, nu });
    }
    Ok(Jets {
        k: kj,
        nu,
        a_jet: (nu..2 * nu).map(|n| deriv(&ta, n)).collect(),
        b_jet: (0..nu).map(|n| deriv(&tb, n)).collect(),
    })
}
