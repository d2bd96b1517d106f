//! Adaptive Dormand–Prince 5(4) stepping for small complex systems.

use num_complex::Complex64;

use super::ScatteringError;

pub type State<const N: usize> = [Complex64; N];

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest admissible step, relative to the interval length.
    pub min_step: f64,
    pub max_steps: usize,
}

impl StepControl {
    pub fn new(tol: f64) -> Self {
        StepControl { rtol: tol, atol: tol * 1e-3, min_step: 1e-13, max_steps: 2_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
///
/// `f` returns `None` where the right-hand side is undefined, which the
/// stepper treats like a failed error test.
pub fn integrate<const N: usize>(
    f: &impl Fn(f64, &State<N>) -> Option<State<N>>,
    t0: f64,
    t1: f64,
    y0: State<N>,
    ctl: &StepControl,
) -> Result<State<N>, ScatteringError> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let hmin = ctl.min_step * span.abs().max(1.0);
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span.abs() / 100.0).min(0.1);
    let mut k0 = f(t, &y).ok_or(ScatteringError::Singularity(t))?;
    for _ in 0..ctl.max_steps {
        if (t1 - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        match try_step(f, t, &y, &k0, h, ctl) {
            Some((ynew, knew, err)) if err <= 1.0 => {
                t = if (t + h - t1) * dir >= 0.0 { t1 } else { t + h };
                y = ynew;
                k0 = knew;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
            }
            Some((_, _, err)) => {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            None => h *= 0.25,
        }
        if h.abs() < hmin {
            return Err(ScatteringError::StepUnderflow(t));
        }
    }
    Err(ScatteringError::StepUnderflow(t))
}

#[allow(clippy::type_complexity)]
fn try_step<const N: usize>(
    f: &impl Fn(f64, &State<N>) -> Option<State<N>>,
    t: f64,
    y: &State<N>,
    k0: &State<N>,
    h: f64,
    ctl: &StepControl,
) -> Option<(State<N>, State<N>, f64)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut k = [[zero; N]; 7];
    k[0] = *k0;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += kj[i] * (h * a);
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys)?;
        if s == 6 {
            // first-same-as-last: ys is the fifth-order solution
            let mut err = 0.0f64;
            for i in 0..N {
                let e = (0..7).fold(zero, |acc, j| acc + k[j][i] * (h * E[j]));
                let sc = ctl.atol + ctl.rtol * y[i].norm().max(ys[i].norm());
                err = err.max(e.norm() / sc);
            }
            if !err.is_finite() {
                return None;
            }
            return Some((ys, k[6], err));
        }
    }
    unreachable!()
}
