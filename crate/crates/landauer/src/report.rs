//! Oracle verification sweeps.

use anyhow::Result;
use landauer_core::oracle::{verify_point, VerificationRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    /// Gate on `|ΔS_analytic − ΔS_oracle|` and on the relative errors of
    /// `ΔQ` and `ΔN`.
    pub tolerance: f64,
    /// Probability mass the truncated Fock space may discard.
    pub truncation_tolerance: f64,
    pub omega: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            tolerance: 1e-8,
            truncation_tolerance: 1e-12,
            omega: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub settings: VerifySettings,
    /// True when every record passed. Purity never gates.
    pub passed: bool,
    pub records: Vec<VerificationRecord>,
}

/// Runs the oracle on every `(n_bar, r)` point in parallel, keeping the
/// input order.
pub fn run(grid: &[(f64, f64)], settings: VerifySettings) -> Result<VerificationReport> {
    let records = grid
        .par_iter()
        .map(|&(n_bar, r)| {
            verify_point(
                n_bar,
                r,
                settings.omega,
                settings.tolerance,
                settings.truncation_tolerance,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport {
        settings,
        passed: records.iter().all(|r| r.passed),
        records,
    })
}
