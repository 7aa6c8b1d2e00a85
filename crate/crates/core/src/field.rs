//! Mode-by-mode bound evaluation for a quantized field in a box.
//!
//! Each comoving wavenumber `k` is an independent oscillator pair driven by
//! the same pump. Results are stored per polarization; extensive totals
//! multiply by the number of polarizations (one for a scalar, two for the
//! tensor modes of a graviton).

use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    bound_ratio, delta_n, delta_q, delta_s, nbar_from_thermal, ratio_from_multiplicities, Multiplicities,
    ThermalSpec,
};
use crate::dynamics::{extract_squeeze, integrate_uv, PumpProfile};
use crate::error::{domain, Error, Result};

/// How a mode's frequency follows from its wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaConvention {
    /// `ω_k = k`, the massless dispersion relation.
    #[default]
    Wavenumber,
    /// `ω_k = √(k/2)`.
    HalfRoot,
}

impl OmegaConvention {
    pub fn omega(&self, k: f64) -> f64 {
        match self {
            OmegaConvention::Wavenumber => k,
            OmegaConvention::HalfRoot => (0.5 * k).sqrt(),
        }
    }
}

/// Field species, fixing the polarization count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    #[default]
    Scalar,
    /// Two tensor polarizations. The Planck length fixing the canonical
    /// normalization of the metric perturbation drops out of every
    /// multiplicity and is not needed.
    Graviton,
}

impl Species {
    pub fn polarizations(&self) -> u32 {
        match self {
            Species::Scalar => 1,
            Species::Graviton => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub k: f64,
    pub omega_k: f64,
    pub polarizations: u32,
}

impl ModeSpec {
    pub fn new(k: f64, convention: OmegaConvention, species: Species) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(domain("wavenumber must be positive and finite"));
        }
        Ok(ModeSpec {
            k,
            omega_k: convention.omega(k),
            polarizations: species.polarizations(),
        })
    }
}

/// Temperature and chemical potential of the environment; each mode's
/// occupation uses its own frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldThermal {
    pub temperature: f64,
    pub mu: f64,
}

impl FieldThermal {
    pub fn for_mode(&self, omega_k: f64) -> ThermalSpec {
        ThermalSpec {
            temperature: self.temperature,
            omega: omega_k,
            mu: self.mu,
        }
    }
}

/// Outcome for one polarization of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeResult {
    pub k: f64,
    pub omega_k: f64,
    pub r_k: f64,
    pub n_bar_k: f64,
    pub n_q_k: f64,
    #[serde(rename = "N_bar_k")]
    pub n_total_k: f64,
    #[serde(rename = "delta_S_k")]
    pub delta_s_k: f64,
    #[serde(rename = "delta_Q_k")]
    pub delta_q_k: f64,
    #[serde(rename = "delta_N_k")]
    pub delta_n_k: f64,
    pub ratio_k: f64,
    pub satisfied: bool,
}

fn assemble(mode: &ModeSpec, r_k: f64, m: &Multiplicities, ratio: f64) -> ModeResult {
    ModeResult {
        k: mode.k,
        omega_k: mode.omega_k,
        r_k,
        n_bar_k: m.n_bar(),
        n_q_k: m.n_q(),
        n_total_k: m.n_total(),
        delta_s_k: delta_s(m),
        delta_q_k: delta_q(mode.omega_k, m),
        delta_n_k: delta_n(m),
        ratio_k: ratio,
        satisfied: ratio <= 1.0,
    }
}

/// Integrates the mode from `tau_in` to `tau_fin` and evaluates its bound
/// against a thermal environment at frequency `ω_k`.
pub fn mode_bound(
    mode: &ModeSpec,
    pump: &PumpProfile,
    thermal: &FieldThermal,
    tau_in: f64,
    tau_fin: f64,
    tol: f64,
) -> Result<ModeResult> {
    let spec = thermal.for_mode(mode.omega_k);
    let n_bar = nbar_from_thermal(&spec)?;
    let pair = integrate_uv(pump, mode.omega_k, tau_in, tau_fin, tol)?;
    let r_k = extract_squeeze(&pair).r;
    let m = Multiplicities::from_squeeze(n_bar, r_k)?;
    let report = bound_ratio(&spec, &m)?;
    Ok(assemble(mode, r_k, &m, report.ratio))
}

/// Bound for explicitly given multiplicities, bypassing the dynamics. The
/// ratio is `ΔS / (N ln(1 + 1/n_bar))`, which equals the thermal form
/// whenever `n_bar` is the occupation at `ω_k`.
pub fn mode_bound_forced(mode: &ModeSpec, m: &Multiplicities) -> ModeResult {
    let r_k = m.n_q().sqrt().asinh();
    assemble(mode, r_k, m, ratio_from_multiplicities(m))
}

/// One row of a spectrum scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub k: f64,
    pub result: Result<ModeResult>,
}

/// Checks that a wavenumber grid is strictly ascending and positive.
pub fn validate_kgrid(kgrid: &[f64]) -> Result<()> {
    if kgrid.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
        return Err(domain("wavenumbers must be positive and finite"));
    }
    if kgrid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("wavenumber grid must be strictly ascending"));
    }
    Ok(())
}

/// Evaluates [`mode_bound`] on every wavenumber. A failing mode yields an
/// error entry and the scan continues.
#[allow(clippy::too_many_arguments)]
pub fn spectrum(
    kgrid: &[f64],
    pump: &PumpProfile,
    thermal: &FieldThermal,
    convention: OmegaConvention,
    species: Species,
    tau_in: f64,
    tau_fin: f64,
    tol: f64,
) -> Result<Vec<SpectrumEntry>> {
    validate_kgrid(kgrid)?;
    Ok(kgrid
        .iter()
        .map(|&k| SpectrumEntry {
            k,
            result: ModeSpec::new(k, convention, species)
                .and_then(|mode| mode_bound(&mode, pump, thermal, tau_in, tau_fin, tol)),
        })
        .collect())
}

/// Sums of `ΔS`, `ΔQ` and `ΔN` over modes and polarizations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtensiveTotals {
    pub delta_s: f64,
    pub delta_q: f64,
    pub delta_n: f64,
}

pub fn totals<'a, I>(results: I, polarizations: u32) -> ExtensiveTotals
where
    I: IntoIterator<Item = &'a ModeResult>,
{
    let mut t = ExtensiveTotals::default();
    for r in results {
        t.delta_s += r.delta_s_k;
        t.delta_q += r.delta_q_k;
        t.delta_n += r.delta_n_k;
    }
    let p = polarizations as f64;
    ExtensiveTotals {
        delta_s: p * t.delta_s,
        delta_q: p * t.delta_q,
        delta_n: p * t.delta_n,
    }
}

/// `polarizations · Σ_k ΔS_k`.
pub fn total_entropy(results: &[ModeResult], polarizations: u32) -> f64 {
    totals(results, polarizations).delta_s
}

/// Successful results of a scan, skipping failed modes.
pub fn successes(entries: &[SpectrumEntry]) -> Vec<ModeResult> {
    entries.iter().filter_map(|e| e.result.as_ref().ok().copied()).collect()
}

/// First error of a scan, if any.
pub fn first_error(entries: &[SpectrumEntry]) -> Option<&Error> {
    entries.iter().find_map(|e| e.result.as_ref().err())
}
