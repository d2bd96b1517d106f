use serde_json::{json, Value};

use super::profile::PoleProfile;
use super::KovacicError;
use crate::exact::surd::Decision;
use crate::exact::{laurent_expand, Center, ComplexField, Gq, LaurentSeries, RationalFunction, Surd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointLabel {
    Finite(Gq),
    Infinity,
}

impl std::fmt::Display for PointLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointLabel::Finite(s) => write!(f, "{}", s),
            PointLabel::Infinity => write!(f, "infinity"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KappaPair {
    pub at: PointLabel,
    pub plus: Surd,
    pub minus: Surd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseAVerdict {
    Excluded,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct CaseAScreen {
    /// One pair per pole in profile order, then the pair at infinity.
    pub kappas: Vec<KappaPair>,
    /// `β` at infinity (the `x⁻¹` coefficient of `r`). With the convention
    /// `α = ik` this gives `κ_∞^± = ±(β/2i)/k`.
    pub beta_infinity: Gq,
    /// Sign sequence (poles in profile order, infinity last) with `d_c`.
    pub d_values: Vec<(Vec<Sign>, Surd, Decision)>,
    pub verdict: CaseAVerdict,
}

impl CaseAScreen {
    pub fn kappa_at_infinity(&self) -> &KappaPair {
        self.kappas.last().expect("infinity pair always present")
    }

    /// `k·κ_∞^±` under the branch `α = ik`.
    pub fn kappa_infinity_times_k(&self) -> (Gq, Gq) {
        let c = self.beta_infinity.clone() / (Gq::int(2) * Gq::i());
        (c.clone(), -c)
    }

    pub fn to_json(&self) -> Value {
        let (p, m) = self.kappa_infinity_times_k();
        json!({
            "kappas": self.kappas.iter().map(|k| json!({
                "at": k.at.to_string(),
                "plus": k.plus.to_string(),
                "minus": k.minus.to_string(),
            })).collect::<Vec<_>>(),
            "kappa_infinity_times_k": [p.to_string(), m.to_string()],
            "d_values": self.d_values.iter().map(|(c, d, dec)| json!({
                "signs": c.iter().map(|s| s.symbol()).collect::<String>(),
                "d": d.to_string(),
                "nonnegative_integer": format!("{:?}", dec),
            })).collect::<Vec<_>>(),
            "verdict": format!("{:?}", self.verdict),
        })
    }
}

/// `κ_s^±` for a pole `s` of the given order.
fn kappa_at_pole(r: &RationalFunction<Gq>, s: &Gq, order: u32) -> Result<KappaPair, KovacicError> {
    let at = PointLabel::Finite(s.clone());
    match order {
        1 => Ok(KappaPair { at, plus: Surd::rational(Gq::int(1)), minus: Surd::rational(Gq::int(1)) }),
        2 => {
            let ser = laurent_expand(r, &Center::Finite(s.clone()), -2)?;
            let beta = ser.coeff(-2)?;
            let root = Surd::sqrt(&(Gq::int(1) + Gq::int(4) * beta));
            let half = Surd::rational(Gq::frac(1, 2));
            let h = root.scale(&Gq::frac(1, 2));
            Ok(KappaPair { at, plus: half.add(&h), minus: half.sub(&h) })
        }
        o if o % 2 == 0 => {
            let l = (o / 2) as i64;
            // √r = a·g with a² the leading coefficient and g monic at order −ℓ
            let ser = laurent_expand(r, &Center::Finite(s.clone()), 0)?;
            let (lead, g) = ser.normalized_sqrt()?;
            // [√r]_s = a·[g]_s, so [√r]_s² = lead·[g]_s²
            let bracket = LaurentSeries::new(
                Center::Finite(s.clone()),
                -l,
                (-l..=0).map(|n| if n <= -2 { g.coeff(n) } else { Ok(Gq::int(0)) }).collect::<Result<Vec<_>, _>>()?,
                0,
            );
            let sq = bracket.mul(&bracket)?.scale(&lead);
            let beta = ser.sub(&sq)?.coeff(-(l + 1))?;
            let alpha = Surd::sqrt(&lead);
            let ratio = Surd::rational(beta)
                .div(&alpha)
                .ok_or_else(|| KovacicError::InexactPole(format!("{}", s)))?;
            let lh = Surd::rational(Gq::frac(l, 2));
            let rh = ratio.scale(&Gq::frac(1, 2));
            Ok(KappaPair { at, plus: lh.add(&rh), minus: lh.sub(&rh) })
        }
        o => Err(KovacicError::UnsupportedOddPole(o)),
    }
}

pub fn case_a_screen(r: &RationalFunction<Gq>, profile: &PoleProfile) -> Result<CaseAScreen, KovacicError> {
    if profile.order_at_infinity != 0 {
        return Err(KovacicError::UnsupportedOrderAtInfinity(profile.order_at_infinity));
    }
    let mut kappas = Vec::with_capacity(profile.poles.len() + 1);
    for (s, o) in &profile.poles {
        kappas.push(kappa_at_pole(r, s, *o)?);
    }
    let inf = laurent_expand(r, &Center::Infinity, 1)?;
    let alpha = Surd::sqrt(&inf.x_power_coeff(0)?);
    let beta = inf.x_power_coeff(-1)?;
    let half_ratio = Surd::rational(beta.clone())
        .div(&alpha.scale(&Gq::int(2)))
        .ok_or(KovacicError::UnsupportedOrderAtInfinity(0))?;
    kappas.push(KappaPair { at: PointLabel::Infinity, plus: half_ratio.clone(), minus: half_ratio.neg() });

    let n = kappas.len();
    let mut d_values = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        let signs: Vec<Sign> = (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect();
        let pick = |i: usize| if signs[i] == Sign::Plus { &kappas[i].plus } else { &kappas[i].minus };
        let mut d = pick(n - 1).clone();
        for i in 0..n - 1 {
            d = d.sub(pick(i));
        }
        let dec = d.is_nonneg_integer();
        d_values.push((signs, d, dec));
    }
    let verdict = if d_values.iter().all(|(_, _, dec)| *dec == Decision::No) {
        CaseAVerdict::Excluded
    } else {
        CaseAVerdict::Inconclusive
    };
    Ok(CaseAScreen { kappas, beta_infinity: beta, d_values, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kovacic::{pole_profile, r_of};

    fn inv_pow(c: Gq, n: u32) -> RationalFunction<Gq> {
        RationalFunction::pole_term(c, Gq::int(0), n)
    }

    #[test]
    fn inverse_square_potential_is_inconclusive() {
        // u = −2/x², r = −k² + 2/x²
        let u = inv_pow(Gq::int(-2), 2);
        let r = r_of(&u, &Gq::int(1));
        let s = case_a_screen(&r, &pole_profile(&r).unwrap()).unwrap();
        assert_eq!(s.kappas[0].plus.as_rational(), Some(Gq::int(2)));
        assert_eq!(s.kappas[0].minus.as_rational(), Some(Gq::int(-1)));
        assert_eq!(s.kappa_at_infinity().plus.as_rational(), Some(Gq::int(0)));
        let mut ds: Vec<Gq> = s.d_values.iter().map(|(_, d, _)| d.as_rational().unwrap()).collect();
        ds.dedup();
        assert!(ds.contains(&Gq::int(-2)) && ds.contains(&Gq::int(1)));
        assert_eq!(s.d_values.len(), 4);
        assert_eq!(s.verdict, CaseAVerdict::Inconclusive);
    }

    #[test]
    fn coulomb_tail_is_excluded() {
        // u = 1/x, r = −k² − 1/x
        let u = inv_pow(Gq::int(1), 1);
        let r = r_of(&u, &Gq::frac(9, 4));
        let s = case_a_screen(&r, &pole_profile(&r).unwrap()).unwrap();
        assert_eq!(s.kappas[0].plus.as_rational(), Some(Gq::int(1)));
        // κ_∞^+ = β/(2α) with β = −1, α = (3/2)i → i/3 = i/(2k)
        assert_eq!(s.kappa_at_infinity().plus.as_rational(), Some(Gq::cplx((0, 1), (1, 3))));
        assert_eq!(s.verdict, CaseAVerdict::Excluded);
    }

    #[test]
    fn quartic_pole_recipe() {
        // r = 1/x⁴ + 3/x³ − k²: √r = 1/x² + (3/2)/x + …, ℓ = 2, α = 1,
        // β = coefficient of x⁻³ in r − 1/x⁴ = 3, κ^± = (±3 + 2)/2
        let r = &(&inv_pow(Gq::int(1), 4) + &inv_pow(Gq::int(3), 3)) - &RationalFunction::constant(Gq::int(1));
        let k = kappa_at_pole(&r, &Gq::int(0), 4).unwrap();
        assert_eq!(k.plus.as_rational(), Some(Gq::frac(5, 2)));
        assert_eq!(k.minus.as_rational(), Some(Gq::frac(-1, 2)));
    }

    #[test]
    fn odd_order_three_rejected() {
        let r = inv_pow(Gq::int(1), 3);
        assert_eq!(kappa_at_pole(&r, &Gq::int(0), 3).unwrap_err(), KovacicError::UnsupportedOddPole(3));
    }
}
