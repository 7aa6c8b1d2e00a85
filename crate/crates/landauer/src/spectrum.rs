//! Per-mode spectrum scans and their CSV form.

use std::io::Write;

use anyhow::Result;
use landauer_core::dynamics::PumpProfile;
use landauer_core::field::{
    mode_bound, validate_kgrid, FieldThermal, ModeResult, ModeSpec, OmegaConvention, SpectrumEntry, Species,
};
use rayon::prelude::*;

use crate::format::fmt_f64;

/// [`landauer_core::field::spectrum`] with the modes evaluated in parallel.
#[allow(clippy::too_many_arguments)]
pub fn scan(
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
        .par_iter()
        .map(|&k| SpectrumEntry {
            k,
            result: ModeSpec::new(k, convention, species)
                .and_then(|mode| mode_bound(&mode, pump, thermal, tau_in, tau_fin, tol)),
        })
        .collect())
}

const COLUMNS: [&str; 11] = [
    "k",
    "r_k",
    "n_bar_k",
    "n_q_k",
    "N_bar_k",
    "delta_S_k",
    "delta_Q_k",
    "delta_N_k",
    "ratio_k",
    "satisfied",
    "error",
];

fn row(r: &ModeResult, polarizations: u32) -> Vec<String> {
    let p = polarizations as f64;
    vec![
        fmt_f64(r.k),
        fmt_f64(r.r_k),
        fmt_f64(r.n_bar_k),
        fmt_f64(r.n_q_k),
        fmt_f64(r.n_total_k),
        fmt_f64(p * r.delta_s_k),
        fmt_f64(p * r.delta_q_k),
        fmt_f64(p * r.delta_n_k),
        fmt_f64(r.ratio_k),
        r.satisfied.to_string(),
    ]
}

/// Writes one row per mode. Extensive columns (`delta_*`) are multiplied by
/// the polarization count; with more than one polarization a
/// `polarizations` column is inserted before `error`.
pub fn write_csv<W: Write>(entries: &[SpectrumEntry], species: Species, out: W) -> Result<()> {
    let pol = species.polarizations();
    let tagged = species != Species::Scalar;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS[..10].to_vec();
    if tagged {
        header.push("polarizations");
    }
    header.push("error");
    w.write_record(&header)?;
    for e in entries {
        let mut fields = match &e.result {
            Ok(r) => row(r, pol),
            Err(_) => {
                let mut f = vec![fmt_f64(e.k)];
                f.resize(10, String::new());
                f
            }
        };
        if tagged {
            fields.push(pol.to_string());
        }
        fields.push(e.result.as_ref().err().map(|err| err.to_string()).unwrap_or_default());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}
