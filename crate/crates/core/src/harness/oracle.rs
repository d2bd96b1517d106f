//! Independent numerical oracles for the round trip.

use num_complex::Complex64;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|m| m as f64).product()
}

/// Principal part of `β(k)/a(k)` at a zero of order `ν`, where `β` is the
/// Taylor polynomial of the `b`-jet: the coefficients of `ε^{−ν} … ε^{−1}`.
///
/// Jets with the same principal part give the same potential, so this is
/// the quantity a round trip can recover unambiguously.
pub fn polar_part(nu: usize, a_jet: &[Complex64], b_jet: &[Complex64]) -> Vec<Complex64> {
    let a: Vec<Complex64> = (0..nu).map(|n| a_jet[n] / factorial(nu + n)).collect();
    // ε^ν / a(k_j + ε) = Σ h_m ε^m
    let mut h = vec![1.0 / a[0]];
    for m in 1..nu {
        let s: Complex64 = (1..=m).map(|n| a[n] * h[m - n]).sum();
        h.push(-s / a[0]);
    }
    (0..nu).map(|m| (0..=m).map(|r| b_jet[r] / factorial(r) * h[m - r]).sum()).collect()
}

/// Reflectionless potential with simple zeros of `a` at `k_j = iκ_j`, from
/// the determinant solution of the Marchenko equation:
/// `u = 2 (log det(I + A))''` with `A_jl = c_j c_l e^{−(κ_j+κ_l)x}/(κ_j+κ_l)`
/// and `c_j² = −i b_j / a'(k_j)`.
///
/// `states` holds `(k_j, a'(k_j), b_j)`. The determinant is expanded over
/// principal minors, each a Cauchy determinant, so derivatives are exact.
pub fn reflectionless_oracle(states: &[(Complex64, Complex64, Complex64)], x: Complex64) -> Option<Complex64> {
    let n = states.len();
    let i = Complex64::new(0.0, 1.0);
    let kappa: Vec<Complex64> = states.iter().map(|s| -i * s.0).collect();
    let c2: Vec<Complex64> = states.iter().map(|s| -i * s.2 / s.1).collect();
    let (mut f, mut f1, mut f2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let mut w = Complex64::new(1.0, 0.0);
        let mut rate = Complex64::new(0.0, 0.0);
        for (p, &j) in idx.iter().enumerate() {
            w *= c2[j] / (2.0 * kappa[j]);
            rate += 2.0 * kappa[j];
            for &l in &idx[p + 1..] {
                let d = kappa[j] - kappa[l];
                let s = kappa[j] + kappa[l];
                w *= d * d / (s * s);
            }
        }
        let e = w * (-rate * x).exp();
        f += e;
        f1 -= rate * e;
        f2 += rate * rate * e;
    }
    if f.norm() == 0.0 {
        return None;
    }
    Some(2.0 * (f2 / f - (f1 / f) * (f1 / f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    #[test]
    fn one_soliton_centred_at_origin() {
        // a = (k − i)/(k + i): a'(i) = −i/2, and b = 1 puts the soliton at x = 0
        for x in [-2.0, -0.3, 0.0, 1.1, 3.0] {
            let u = reflectionless_oracle(&[(I, -0.5 * I, Complex64::new(1.0, 0.0))], x.into()).unwrap();
            assert!((u.re - 2.0 / f64::cosh(x).powi(2)).abs() < 1e-13 && u.im.abs() < 1e-13);
        }
    }

    #[test]
    fn two_soliton_is_six_sech_squared() {
        // a = (k−i)(k−2i)/((k+i)(k+2i)) with b = (−1, 1) gives norming
        // constants 6 and 12, the reflectionless 6 sech² x
        let states = [(I, I / 6.0, Complex64::new(-1.0, 0.0)), (2.0 * I, -I / 12.0, Complex64::new(1.0, 0.0))];
        for x in [-2.5, -0.4, 0.0, 0.9, 2.0] {
            let u = reflectionless_oracle(&states, x.into()).unwrap();
            assert!((u.re - 6.0 / f64::cosh(x).powi(2)).abs() < 1e-12 && u.im.abs() < 1e-12, "{}", u);
        }
    }

    #[test]
    fn polar_part_of_double_zero() {
        // the prescribed jets and the true ones share their principal part
        let p = polar_part(2, &[Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.0)], &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let q = polar_part(2, &[Complex64::new(-0.5, 0.0), Complex64::new(0.0, -1.5)], &[Complex64::new(1.0, 0.0), I]);
        for (x, y) in p.iter().zip(&q) {
            assert!((x - y).norm() < 1e-15);
        }
        assert!((p[0] + 4.0).norm() < 1e-15);
    }
}
