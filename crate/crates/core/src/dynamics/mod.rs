//! Time evolution of the Bogoliubov coefficients under a pump.
//!
//! Two systems are integrated. The oscillator pair evolves four functions
//! `(u_s, v_s, u_e, v_e)`:
//!
//! ```text
//! u_s' = −iω_s u_s + i g(t) e^{−iωt} v_e*      v_s' = −iω_s v_s + i g(t) e^{−iωt} u_e*
//! u_e' = −iω_e u_e + i g(t) e^{−iωt} v_s*      v_e' = −iω_e v_e + i g(t) e^{−iωt} u_s*
//! ```
//!
//! with `ω = ω_s + ω_e`, while each field mode evolves a single pair
//!
//! ```text
//! u' = −iω u + i g v*      v' = −iω v + i g u*
//! ```
//!
//! Both preserve `|u|² − |v|² = 1`. The squeeze parametrization
//! `u = e^{−iδ} cosh r`, `v = e^{−i(δ−θ)} sinh r` is only ever extracted from
//! the integrated pair, never integrated itself: the equations for `θ` are
//! singular at `r = 0`.

mod ode;
mod pump;

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::su11::{reduce_phase, SqueezeParams};

pub use ode::{integrate, StepControl};
pub use pump::PumpProfile;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovPair {
    pub u: Complex64,
    pub v: Complex64,
}

impl BogoliubovPair {
    pub const IDENTITY: BogoliubovPair = BogoliubovPair {
        u: Complex64::new(1.0, 0.0),
        v: Complex64::new(0.0, 0.0),
    };

    /// `|u|² − |v|² − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.u.norm_sqr() - self.v.norm_sqr() - 1.0
    }
}

/// `(r, δ, θ)` with `u = e^{−iδ} cosh r` and `v = e^{−i(δ−θ)} sinh r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeTriple {
    pub r: f64,
    pub delta: f64,
    pub theta: f64,
}

impl SqueezeTriple {
    pub fn to_pair(&self) -> BogoliubovPair {
        BogoliubovPair {
            u: Complex64::from_polar(self.r.cosh(), -self.delta),
            v: Complex64::from_polar(self.r.sinh(), self.theta - self.delta),
        }
    }
}

/// `r = asinh|v|`, `δ = −arg u`, `θ = arg v − arg u`, phases in `[0, 2π)`.
///
/// `θ` is undefined when `v = 0` and is then set to zero.
pub fn extract_squeeze(pair: &BogoliubovPair) -> SqueezeTriple {
    let r = pair.v.norm().asinh();
    let delta = reduce_phase(-pair.u.arg());
    let theta = if pair.v.norm() == 0.0 {
        0.0
    } else {
        reduce_phase(pair.v.arg() - pair.u.arg())
    };
    SqueezeTriple { r, delta, theta }
}

fn check_interval(pump: &PumpProfile, t_in: f64, t_fin: f64, tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain("integration tolerance must be positive"));
    }
    pump.validate(t_in, t_fin)
}

fn field_rhs<'a>(pump: &'a PumpProfile, omega: f64) -> impl Fn(f64, &[Complex64; 2]) -> [Complex64; 2] + 'a {
    move |t, y| {
        let g = pump.coupling(t);
        [
            -I * omega * y[0] + I * g * y[1].conj(),
            -I * omega * y[1] + I * g * y[0].conj(),
        ]
    }
}

/// Field-mode pair at `t_fin` starting from `(1, 0)` at `t_in`.
pub fn integrate_uv(pump: &PumpProfile, omega: f64, t_in: f64, t_fin: f64, tol: f64) -> Result<BogoliubovPair> {
    integrate_uv_observed(pump, omega, t_in, t_fin, tol, |_, _| {})
}

/// As [`integrate_uv`], calling `observe` after every accepted step.
pub fn integrate_uv_observed<O>(
    pump: &PumpProfile,
    omega: f64,
    t_in: f64,
    t_fin: f64,
    tol: f64,
    observe: O,
) -> Result<BogoliubovPair>
where
    O: FnMut(f64, &BogoliubovPair),
{
    if t_fin < t_in {
        return Err(domain("the final time precedes the initial time"));
    }
    integrate_uv_from(pump, omega, t_in, BogoliubovPair::IDENTITY, t_fin, tol, observe)
}

/// Integrates the field-mode pair from an arbitrary state, in either time
/// direction.
pub fn integrate_uv_from<O>(
    pump: &PumpProfile,
    omega: f64,
    t0: f64,
    start: BogoliubovPair,
    t1: f64,
    tol: f64,
    mut observe: O,
) -> Result<BogoliubovPair>
where
    O: FnMut(f64, &BogoliubovPair),
{
    check_interval(pump, t0, t1, tol)?;
    let y = integrate(
        field_rhs(pump, omega),
        t0,
        [start.u, start.v],
        t1,
        &StepControl::new(tol),
        |t, y| observe(t, &BogoliubovPair { u: y[0], v: y[1] }),
    )?;
    Ok(BogoliubovPair { u: y[0], v: y[1] })
}

/// Field-mode pairs at each of the ascending `times`, all `≥ t_in`.
pub fn trajectory(pump: &PumpProfile, omega: f64, t_in: f64, times: &[f64], tol: f64) -> Result<Vec<BogoliubovPair>> {
    if times.iter().any(|&t| t < t_in) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("output times must be ascending and not precede the initial time"));
    }
    if let Some(&last) = times.last() {
        check_interval(pump, t_in, last, tol)?;
    }
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut state) = (t_in, BogoliubovPair::IDENTITY);
    for &next in times {
        state = integrate_uv_from(pump, omega, t, state, next, tol, |_, _| {})?;
        t = next;
        out.push(state);
    }
    Ok(out)
}

/// Bogoliubov pairs of the system and environment oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmPairs {
    pub system: BogoliubovPair,
    pub environment: BogoliubovPair,
}

/// Integrates the oscillator-pair system from `u = 1`, `v = 0` at `t_in`.
pub fn integrate_qm(
    pump: &PumpProfile,
    omega_s: f64,
    omega_e: f64,
    t_in: f64,
    t_fin: f64,
    tol: f64,
) -> Result<QmPairs> {
    integrate_qm_observed(pump, omega_s, omega_e, t_in, t_fin, tol, |_, _| {})
}

pub fn integrate_qm_observed<O>(
    pump: &PumpProfile,
    omega_s: f64,
    omega_e: f64,
    t_in: f64,
    t_fin: f64,
    tol: f64,
    mut observe: O,
) -> Result<QmPairs>
where
    O: FnMut(f64, &QmPairs),
{
    if t_fin < t_in {
        return Err(domain("the final time precedes the initial time"));
    }
    check_interval(pump, t_in, t_fin, tol)?;
    let omega = omega_s + omega_e;
    let rhs = |t: f64, y: &[Complex64; 4]| {
        let drive = I * pump.coupling(t) * Complex64::from_polar(1.0, -omega * t);
        [
            -I * omega_s * y[0] + drive * y[3].conj(),
            -I * omega_s * y[1] + drive * y[2].conj(),
            -I * omega_e * y[2] + drive * y[1].conj(),
            -I * omega_e * y[3] + drive * y[0].conj(),
        ]
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let pack = |y: &[Complex64; 4]| QmPairs {
        system: BogoliubovPair { u: y[0], v: y[1] },
        environment: BogoliubovPair { u: y[2], v: y[3] },
    };
    let y = integrate(rhs, t_in, [one, zero, one, zero], t_fin, &StepControl::new(tol), |t, y| {
        observe(t, &pack(y))
    })?;
    Ok(pack(&y))
}

/// Squeeze and rotation produced by a constant pump `q e^{iθ_in}` acting
/// from `t_in` to `t_fin`: `r = |q| Δt`, `δ_{s,e} = ω_{s,e} Δt` and
/// `θ = θ_in + π/2 − (ω_s + ω_e) t_in` (plus `π` when `q < 0`).
///
/// The `−ω t_in` shift appears because the pump carries the absolute-time
/// factor `e^{−iωt}`; it vanishes when the evolution starts at `t = 0`.
pub fn constant_pump_squeeze(
    pump: &PumpProfile,
    omega_s: f64,
    omega_e: f64,
    t_in: f64,
    t_fin: f64,
) -> Result<SqueezeParams> {
    let PumpProfile::Constant { q, theta_in } = *pump else {
        return Err(domain("the closed form requires a constant pump"));
    };
    if t_fin < t_in {
        return Err(domain("the final time precedes the initial time"));
    }
    pump.validate(t_in, t_fin)?;
    let dt = t_fin - t_in;
    let flip = if q < 0.0 { PI } else { 0.0 };
    let theta = theta_in + FRAC_PI_2 - (omega_s + omega_e) * t_in + flip;
    SqueezeParams::new(q.abs() * dt, theta, omega_s * dt, omega_e * dt)
}

/// Exact Bogoliubov pairs for a constant pump:
/// `u_s = e^{−iω_s Δt} cosh r`, `v_s = e^{i(θ − ω_s Δt)} sinh r` and the
/// same with `ω_e` for the environment.
pub fn closed_form_qm(pump: &PumpProfile, omega_s: f64, omega_e: f64, t_in: f64, t_fin: f64) -> Result<QmPairs> {
    let p = constant_pump_squeeze(pump, omega_s, omega_e, t_in, t_fin)?;
    let (c, s) = (p.r().cosh(), p.r().sinh());
    let pair = |delta: f64| BogoliubovPair {
        u: Complex64::from_polar(c, -delta),
        v: Complex64::from_polar(s, p.theta() - delta),
    };
    Ok(QmPairs {
        system: pair(p.delta_s()),
        environment: pair(p.delta_e()),
    })
}

/// Time derivatives `(r', δ', θ')` of the squeeze parametrization of a
/// field mode driven by a complex pump `g`.
///
/// With `ψ = 2δ − θ + arg g`:
/// `r' = −|g| sin ψ`, `δ' = ω − |g| tanh r cos ψ`, `θ' = |g| cos ψ / (cosh r sinh r)`.
pub fn squeeze_rates(g: Complex64, omega: f64, s: &SqueezeTriple) -> (f64, f64, f64) {
    let psi = 2.0 * s.delta - s.theta + g.arg();
    let a = g.norm();
    (
        -a * psi.sin(),
        omega - a * s.r.tanh() * psi.cos(),
        a * psi.cos() / (s.r.cosh() * s.r.sinh()),
    )
}

/// The rates of [`squeeze_rates`] written for a pump `g = −iH` with real
/// `H`: with `φ = 2δ − θ`,
/// `r' = H cos φ`, `δ' = ω − H tanh r sin φ`, `θ' = H sin φ / (cosh r sinh r)`.
pub fn hubble_rates(h: f64, omega: f64, s: &SqueezeTriple) -> (f64, f64, f64) {
    let phi = 2.0 * s.delta - s.theta;
    (
        h * phi.cos(),
        omega - h * s.r.tanh() * phi.sin(),
        h * phi.sin() / (s.r.cosh() * s.r.sinh()),
    )
}

/// `|v_k|²` at `tau_fin` for a massless mode of wavenumber `k` in de Sitter
/// space, from the exact mode functions `μ_k = e^{−ikτ}(1 − i/(kτ))/√(2k)`.
///
/// The field starts at `tau_in` with `f = 1/√(2k)` and canonical momentum
/// `f' − F f = −i√(k/2)`, `F = −1/τ`; at `tau_fin` the occupation is
/// `(k/2)|f − i p/k|²` with `p = f' − F f`. Both times must be negative.
pub fn de_sitter_exact_occupation(k: f64, tau_in: f64, tau_fin: f64) -> Result<f64> {
    if !(k > 0.0 && tau_in < 0.0 && tau_fin < 0.0 && tau_in.is_finite()) {
        return Err(domain("need k > 0 and negative conformal times"));
    }
    let norm = 1.0 / (2.0 * k).sqrt();
    let mode = |tau: f64| {
        let ph = Complex64::from_polar(norm, -k * tau);
        let mu = ph * (Complex64::new(1.0, 0.0) - I / (k * tau));
        let dmu = ph * (-I * k - 1.0 / tau + I / (k * tau * tau));
        (mu, dmu)
    };
    let (mu, dmu) = mode(tau_in);
    let f0 = Complex64::new(norm, 0.0);
    let df0 = -I * (k / 2.0).sqrt() + f0 * (-1.0 / tau_in);
    let w = mu * dmu.conj() - mu.conj() * dmu;
    let a = (f0 * dmu.conj() - df0 * mu.conj()) / w;
    let b = (df0 * mu - f0 * dmu) / w;

    let (mu, dmu) = mode(tau_fin);
    let f = a * mu + b * mu.conj();
    let df = a * dmu + b * dmu.conj();
    let p = df - f * (-1.0 / tau_fin);
    Ok(0.5 * k * (f - I * p / k).norm_sqr())
}
