//! Adaptive Dormand–Prince 5(4) integration of complex linear systems.

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Absolute local error target.
    pub atol: f64,
    /// Relative local error target, zero for pure absolute control.
    pub rtol: f64,
    pub max_steps: usize,
    /// Smallest step, relative to the interval length, before giving up.
    pub min_step_ratio: f64,
}

impl StepControl {
    /// Pure absolute control with the local target a decade below `tol`,
    /// so that the error accumulated over an amplifying trajectory (and the
    /// drift of `|u|² − |v|²`) stays within `tol` rather than a multiple of it.
    pub fn new(tol: f64) -> Self {
        StepControl {
            atol: 0.1 * tol,
            rtol: 0.0,
            max_steps: 10_000_000,
            min_step_ratio: 1e-14,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State<const N: usize> = [Complex64; N];

fn comb<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += k[i] * (h * c);
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction), calling
/// `observe` after every accepted step.
///
/// The local error of each step is measured in the root-mean-square norm
/// over real and imaginary parts, scaled by `atol + rtol max(|y|, |y_new|)`.
pub fn integrate<const N: usize, F, O>(
    f: F,
    t0: f64,
    y0: State<N>,
    t1: f64,
    ctl: &StepControl,
    mut observe: O,
) -> Result<State<N>>
where
    F: Fn(f64, &State<N>) -> State<N>,
    O: FnMut(f64, &State<N>),
{
    if t0 == t1 {
        return Ok(y0);
    }
    let span = (t1 - t0).abs();
    let dir = (t1 - t0).signum();
    let h_min = span * ctl.min_step_ratio;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t, &y, &k1, dir, ctl).min(span);
    let mut steps = 0usize;

    loop {
        let remaining = (t1 - t).abs();
        if remaining <= span * 1e-15 {
            break;
        }
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        let hs = h * dir;
        let k2 = f(t + C2 * hs, &comb(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &comb(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &comb(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * hs,
            &comb(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + hs,
            &comb(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = comb(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let t_new = if last { t1 } else { t + hs };
        let k7 = f(t_new, &y_new);

        let mut acc = 0.0;
        for i in 0..N {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * hs;
            let scale = ctl.atol + ctl.rtol * y[i].norm().max(y_new[i].norm());
            acc += (e.re / scale).powi(2) + (e.im / scale).powi(2);
        }
        let err = (acc / (2 * N) as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::NonFinite(t));
        }

        if err <= 1.0 {
            t = t_new;
            y = y_new;
            k1 = k7;
            steps += 1;
            if y.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NonFinite(t));
            }
            observe(t, &y);
            if last {
                break;
            }
            if steps >= ctl.max_steps {
                return Err(Error::TooManySteps(steps));
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
        if h < h_min {
            return Err(Error::StepUnderflow { t, h });
        }
    }
    Ok(y)
}

fn initial_step<const N: usize, F>(f: &F, t: f64, y: &State<N>, k1: &State<N>, dir: f64, ctl: &StepControl) -> f64
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let scale = |z: &Complex64| ctl.atol + ctl.rtol * z.norm();
    let rms = |v: &State<N>| {
        let s: f64 = v.iter().zip(y).map(|(a, b)| a.norm_sqr() / scale(b).powi(2)).sum();
        (s / N as f64).sqrt()
    };
    let d0 = rms(y);
    let d1 = rms(k1);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = comb(y, h0 * dir, &[(1.0, k1)]);
    let k2 = f(t + h0 * dir, &y1);
    let mut diff = *k1;
    for i in 0..N {
        diff[i] = k2[i] - k1[i];
    }
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}
