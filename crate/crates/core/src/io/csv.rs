//! CSV emitters for sampled potentials and scattering coefficients.

use std::fmt::Write;

use num_complex::Complex64;

use crate::scattering::{PotentialEval, ScatteringRecord};

pub const POTENTIAL_HEADER: &str = "x,re_u,im_u,pole_flag";
pub const COEFFICIENT_HEADER: &str = "k,re_a,im_a,re_b,im_b";

/// `u` on the given real points; a pole is written as `nan,nan,1`.
pub fn potential_csv(u: &PotentialEval, xs: &[f64]) -> String {
    let mut s = String::from(POTENTIAL_HEADER);
    s.push('\n');
    for &x in xs {
        match u.eval(Complex64::new(x, 0.0)).filter(|v| v.is_finite()) {
            Some(v) => writeln!(s, "{:.16e},{:.16e},{:.16e},0", x, v.re, v.im),
            None => writeln!(s, "{:.16e},nan,nan,1", x),
        }
        .expect("writing to a String");
    }
    s
}

pub fn coefficients_csv(r: &ScatteringRecord) -> String {
    let mut s = String::from(COEFFICIENT_HEADER);
    s.push('\n');
    for ((k, a), b) in r.k_grid.iter().zip(&r.a_values).zip(&r.b_values) {
        writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", k, a.re, a.im, b.re, b.im).expect("writing to a String");
    }
    s
}
