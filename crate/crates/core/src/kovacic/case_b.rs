use num_complex::Complex64;
use serde_json::{json, Value};

use super::profile::PoleProfile;
use super::{poly_json, KovacicError};
use crate::exact::{
    laurent_expand, solve_linear_exact, Center, ComplexField, Gq, Poly, RationalFunction, SolutionSet, Surd,
};

#[derive(Debug, Clone)]
pub struct CaseBCandidate {
    /// One exponent per pole, in profile order.
    pub e: Vec<i64>,
    pub d_e: u64,
    pub theta: RationalFunction<Gq>,
}

#[derive(Debug, Clone)]
pub struct CaseBSolution {
    pub e: Vec<i64>,
    /// Monic, of degree `d_e`.
    pub p: Poly<Gq>,
    pub theta: RationalFunction<Gq>,
    /// `θ̂ = θ + P'/P`.
    pub theta_hat: RationalFunction<Gq>,
    /// `R = 4r − θ̂² − 2θ̂'`, the radicand of the integrand.
    pub radicand: RationalFunction<Gq>,
    pub r: RationalFunction<Gq>,
}

#[derive(Debug, Clone)]
pub struct CaseBResult {
    pub families: Vec<(Gq, Vec<i64>)>,
    pub candidates: Vec<CaseBCandidate>,
    pub solution: Option<CaseBSolution>,
}

/// Coefficient matrices of the polynomial-matching system for the monic `P`
/// of degree `d`: row `m` collects the `x^m` coefficient of the cleared
/// numerator; columns are `p_0 … p_{d−1}` followed by the `x^d` column.
/// The system at `k² = t` is `(m0 + t·m1)·[p; 1] = 0`.
#[derive(Debug, Clone)]
pub struct EqPSystem {
    pub d: usize,
    pub m0: Vec<Vec<Gq>>,
    pub m1: Vec<Vec<Gq>>,
}

pub fn case_b_families(r: &RationalFunction<Gq>, profile: &PoleProfile) -> Result<Vec<(Gq, Vec<i64>)>, KovacicError> {
    let mut out = Vec::with_capacity(profile.poles.len());
    for (s, o) in &profile.poles {
        let fam = match o {
            1 => vec![4],
            2 => {
                let beta = laurent_expand(r, &Center::Finite(s.clone()), -2)?.coeff(-2)?;
                let root = Surd::sqrt(&(Gq::int(1) + Gq::int(4) * beta));
                let mut v = vec![2i64];
                for l in [-2i64, 2] {
                    let cand = Surd::rational(Gq::int(2)).add(&root.scale(&Gq::int(l)));
                    if let Some(n) = cand.as_integer().and_then(|n| i64::try_from(n).ok()) {
                        v.push(n);
                    }
                }
                v.sort_unstable();
                v.dedup();
                v
            }
            j => vec![*j as i64],
        };
        out.push((s.clone(), fam));
    }
    Ok(out)
}

/// `θ = ½ Σ e_s/(x − s)`.
pub fn theta_for(poles: &[Gq], e: &[i64]) -> RationalFunction<Gq> {
    let terms: Vec<(Gq, u32, Gq)> =
        poles.iter().zip(e).filter(|(_, &es)| es != 0).map(|(s, &es)| (s.clone(), 1, Gq::frac(es, 2))).collect();
    RationalFunction::from_partial_fractions(&terms)
}

/// Every tuple `e` with `d_e = −½Σe_s ∈ ℕ₀`, in lexicographic order.
pub fn case_b_candidates(profile: &PoleProfile, families: &[(Gq, Vec<i64>)]) -> Vec<CaseBCandidate> {
    let poles: Vec<Gq> = profile.poles.iter().map(|(s, _)| s.clone()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; families.len()];
    if families.iter().any(|(_, f)| f.is_empty()) {
        return out;
    }
    loop {
        let e: Vec<i64> = idx.iter().zip(families).map(|(&i, (_, f))| f[i]).collect();
        let sum: i64 = e.iter().sum();
        if sum <= 0 && sum % 2 == 0 {
            let theta = theta_for(&poles, &e);
            out.push(CaseBCandidate { d_e: (-sum / 2) as u64, e, theta });
        }
        // odometer increment, last position fastest
        let mut pos = families.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < families[pos].1.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn xpow(j: usize) -> RationalFunction<Gq> {
    RationalFunction::from_poly(Poly::monomial(Gq::int(1), j))
}

fn lcm(a: &Poly<Gq>, b: &Poly<Gq>) -> Poly<Gq> {
    let g = a.gcd(b);
    (a * &b.div_rem(&g).0).monic()
}

/// Builds the system for `P''' + 3θP'' + (3θ² + 3θ' − 4r)P' + (θ'' + 3θθ' + θ³ − 4rθ − 2r')P = 0`
/// with `r = −t − u`.
pub fn eq_p_system(u: &RationalFunction<Gq>, theta: &RationalFunction<Gq>, d: usize) -> EqPSystem {
    let th1 = theta.derivative();
    let th2 = th1.derivative();
    let c = |n: i64| RationalFunction::constant(Gq::int(n));
    let c1_0 = &(&(&c(3) * &(theta * theta)) + &(&c(3) * &th1)) + &(&c(4) * u);
    let c0_0 = &(&(&th2 + &(&c(3) * &(theta * &th1))) + &(&(theta * theta) * theta))
        + &(&(&c(4) * &(u * theta)) + &(&c(2) * &u.derivative()));
    let mut l0 = Vec::with_capacity(d + 1);
    let mut l1 = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let ji = j as i64;
        let mut a = &c0_0 * &xpow(j);
        let mut b = &(&c(4) * theta) * &xpow(j);
        if j >= 1 {
            a = &a + &(&(&c(ji) * &c1_0) * &xpow(j - 1));
            b = &b + &(&c(4 * ji) * &xpow(j - 1));
        }
        if j >= 2 {
            a = &a + &(&(&c(3 * ji * (ji - 1)) * theta) * &xpow(j - 2));
        }
        if j >= 3 {
            a = &a + &(&c(ji * (ji - 1) * (ji - 2)) * &xpow(j - 3));
        }
        l0.push(a);
        l1.push(b);
    }
    let den = l0.iter().chain(l1.iter()).fold(Poly::one(), |acc, f| lcm(&acc, f.den()));
    let cleared = |f: &RationalFunction<Gq>| -> Poly<Gq> { f.num() * &den.div_rem(f.den()).0 };
    let n0: Vec<Poly<Gq>> = l0.iter().map(cleared).collect();
    let n1: Vec<Poly<Gq>> = l1.iter().map(cleared).collect();
    let rows = n0.iter().chain(n1.iter()).filter_map(|p| p.degree()).max().map_or(0, |m| m + 1);
    let mat = |ns: &[Poly<Gq>]| -> Vec<Vec<Gq>> { (0..rows).map(|m| ns.iter().map(|p| p.coeff(m)).collect()).collect() };
    EqPSystem { d, m0: mat(&n0), m1: mat(&n1) }
}

impl EqPSystem {
    /// Monic solution at an exact `t = k²`, if one exists.
    pub fn solve_at(&self, t: &Gq) -> Option<Poly<Gq>> {
        let d = self.d;
        let a: Vec<Vec<Gq>> = self
            .m0
            .iter()
            .zip(&self.m1)
            .map(|(r0, r1)| (0..d).map(|j| r0[j].clone() + t.clone() * r1[j].clone()).collect())
            .collect();
        let b: Vec<Gq> =
            self.m0.iter().zip(&self.m1).map(|(r0, r1)| -(r0[d].clone() + t.clone() * r1[d].clone())).collect();
        let p = match solve_linear_exact(&a, &b, d) {
            SolutionSet::Unique(p) => p,
            SolutionSet::Family { particular, .. } => particular,
            SolutionSet::Inconsistent => return None,
        };
        let mut coeffs = p;
        coeffs.push(Gq::int(1));
        Some(Poly::new(coeffs))
    }

    /// Floating augmented matrix `m0 + t·m1` for singular-value analysis.
    pub fn numeric_at(&self, t: f64) -> nalgebra::DMatrix<Complex64> {
        let rows = self.m0.len().max(1);
        let cols = self.d + 1;
        nalgebra::DMatrix::from_fn(rows, cols, |i, j| {
            if i >= self.m0.len() {
                return Complex64::new(0.0, 0.0);
            }
            self.m0[i][j].to_c64() + self.m1[i][j].to_c64() * t
        })
    }
}

/// Splits `r = −t − u` with `u → 0` at infinity.
pub(crate) fn split_r(r: &RationalFunction<Gq>) -> Result<(Gq, RationalFunction<Gq>), KovacicError> {
    let t = -laurent_expand(r, &Center::Infinity, 0)?.x_power_coeff(0)?;
    let u = -&(r + &RationalFunction::constant(t.clone()));
    Ok((t, u))
}

pub fn case_b_solve(r: &RationalFunction<Gq>, cand: &CaseBCandidate) -> Result<Option<CaseBSolution>, KovacicError> {
    let (t, u) = split_r(r)?;
    let sys = eq_p_system(&u, &cand.theta, cand.d_e as usize);
    let Some(p) = sys.solve_at(&t) else {
        return Ok(None);
    };
    Ok(Some(CaseBSolution::new(cand, p, r.clone())))
}

impl CaseBSolution {
    fn new(cand: &CaseBCandidate, p: Poly<Gq>, r: RationalFunction<Gq>) -> Self {
        let pr = RationalFunction::from_poly(p.clone());
        let theta_hat = &cand.theta + &pr.derivative().checked_div(&pr).expect("monic P is nonzero");
        let four = RationalFunction::constant(Gq::int(4));
        let two = RationalFunction::constant(Gq::int(2));
        let radicand = &(&(&four * &r) - &(&theta_hat * &theta_hat)) - &(&two * &theta_hat.derivative());
        CaseBSolution { e: cand.e.clone(), p, theta: cand.theta.clone(), theta_hat, radicand, r }
    }

    /// Residual of eq (P) after substituting `P`: the zero function when the solution is genuine.
    pub fn eq_p_residual(&self) -> RationalFunction<Gq> {
        let p = RationalFunction::from_poly(self.p.clone());
        let th = &self.theta;
        let th1 = th.derivative();
        let c = |n: i64| RationalFunction::constant(Gq::int(n));
        let r = &self.r;
        let p1 = p.derivative();
        let p2 = p1.derivative();
        let p3 = p2.derivative();
        let c1 = &(&(&c(3) * &(th * th)) + &(&c(3) * &th1)) - &(&c(4) * r);
        let c0 = &(&(&th1.derivative() + &(&c(3) * &(th * &th1))) + &(&(th * th) * th))
            - &(&(&c(4) * &(r * th)) + &(&c(2) * &r.derivative()));
        &(&(&p3 + &(&(&c(3) * th) * &p2)) + &(&c1 * &p1)) + &(&c0 * &p)
    }

    /// Exact check that `ω = ½(θ̂ ± √R)` solves the Riccati equation `ω' + ω² = r`.
    /// The sign-free part cancels identically; the odd part vanishes iff `R' + 2θ̂R = 0`.
    pub fn riccati_identity_holds(&self) -> bool {
        let two = RationalFunction::constant(Gq::int(2));
        (&self.radicand.derivative() + &(&two * &(&self.theta_hat * &self.radicand))).is_zero()
    }

    /// `(ω, ω')` at `x` for the branch whose square root is `sqrt_r` (`sqrt_r² = R(x)`).
    pub fn omega_at(&self, x: Complex64, sqrt_r: Complex64) -> (Complex64, Complex64) {
        let th = self.theta_hat.eval_c64(x);
        let dth = self.theta_hat.derivative().eval_c64(x);
        let dr = self.radicand.derivative().eval_c64(x);
        let w = 0.5 * (th + sqrt_r);
        let dw = 0.5 * (dth + dr / (2.0 * sqrt_r));
        (w, dw)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e,
            "P": poly_json(&self.p),
            "theta": self.theta.to_string(),
            "theta_hat": self.theta_hat.to_string(),
            "radicand": self.radicand.to_string(),
        })
    }
}

impl CaseBResult {
    pub fn to_json(&self) -> Value {
        json!({
            "families": self.families.iter().map(|(s, f)| json!({"at": s.to_string(), "E": f})).collect::<Vec<_>>(),
            "candidates": self.candidates.iter().map(|c| json!({
                "e": c.e, "d_e": c.d_e, "theta": c.theta.to_string(),
            })).collect::<Vec<_>>(),
            "solution": self.solution.as_ref().map(|s| s.to_json()),
        })
    }
}

#[derive(Debug, Clone)]
pub struct AsymptoticExponent {
    /// `+1` or `−1`: the branch of the square root.
    pub branch: i8,
    /// Coefficient of `x⁰` in `ω`: `v ~ e^{rate·x}`.
    pub rate: Surd,
    /// Coefficient of `x⁻¹` in `ω`: `v ~ x^{power}`.
    pub power: Surd,
}

/// Leading behavior `v ~ x^{power} e^{rate·x}` of both branches as `x → ±∞`.
pub fn asymptotic_exponents(sol: &CaseBSolution) -> Result<Vec<AsymptoticExponent>, KovacicError> {
    let rs = laurent_expand(&sol.radicand, &Center::Infinity, 1)?;
    let ts = laurent_expand(&sol.theta_hat, &Center::Infinity, 1)?;
    let (lead, g) = rs.normalized_sqrt()?;
    let v = rs.valuation().unwrap_or(0);
    if v != 0 {
        return Err(KovacicError::UnsupportedOrderAtInfinity(v));
    }
    let a = Surd::sqrt(&lead);
    let half = Gq::frac(1, 2);
    let th0 = Surd::rational(ts.x_power_coeff(0)? * half.clone());
    let th1 = Surd::rational(ts.x_power_coeff(-1)? * half.clone());
    let root0 = a.scale(&half);
    let root1 = a.scale(&(g.x_power_coeff(-1)? * half));
    Ok(vec![
        AsymptoticExponent { branch: 1, rate: th0.add(&root0), power: th1.add(&root1) },
        AsymptoticExponent { branch: -1, rate: th0.sub(&root0), power: th1.sub(&root1) },
    ])
}
