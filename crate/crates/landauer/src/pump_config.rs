//! Pump profiles read from TOML.
//!
//! ```toml
//! kind = "constant"        # constant | gaussian_pulse | de_sitter | tabulated
//! q = 0.5
//! theta_in = 0.0
//!
//! [domain]
//! t_in = 0.0
//! t_fin = 2.0
//! ```
//!
//! `gaussian_pulse` takes `amplitude`, `center`, `width`; `de_sitter` takes an
//! optional `coupling = [re, im]` (default `[0.0, 1.0]`) and `tau_ref`
//! (default 0); `tabulated` takes `samples = [[t, q], ...]`. Every kind but
//! `de_sitter` accepts `theta_in`.

use std::path::Path;

use anyhow::{Context, Result};
use landauer_core::dynamics::PumpProfile;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub t_in: f64,
    pub t_fin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    #[serde(flatten)]
    pub pump: PumpProfile,
    pub domain: Domain,
}

impl PumpConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: PumpConfig = toml::from_str(text).context("invalid pump configuration")?;
        anyhow::ensure!(cfg.domain.t_fin >= cfg.domain.t_in, "domain must satisfy t_in <= t_fin");
        cfg.pump.validate(cfg.domain.t_in, cfg.domain.t_fin)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}
