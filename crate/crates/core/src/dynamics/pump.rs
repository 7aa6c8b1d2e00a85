use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

fn default_coupling() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Time dependence of the pump `g(t)` coupling the two oscillators.
///
/// All kinds except [`PumpProfile::DeSitter`] are `q(t) e^{iθ_in}` with a
/// real envelope `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PumpProfile {
    Constant {
        q: f64,
        #[serde(default)]
        theta_in: f64,
    },
    /// `amplitude · exp(−(t − center)² / (2 width²))`.
    GaussianPulse {
        amplitude: f64,
        center: f64,
        width: f64,
        #[serde(default)]
        theta_in: f64,
    },
    /// Conformal-time de Sitter pump `g(τ) = coupling · H(τ)` with
    /// `H = −1/(τ − tau_ref)`, singular at `τ = tau_ref`.
    ///
    /// The default coupling `i` reproduces the Bogoliubov coefficients of the
    /// exact massless mode functions `e^{−ikτ}(1 − i/(kτ))/√(2k)`.
    DeSitter {
        #[serde(default = "default_coupling")]
        coupling: Complex64,
        #[serde(default)]
        tau_ref: f64,
    },
    /// Samples `(t, q)` with strictly increasing `t`, linearly interpolated.
    /// Interpolation error is not controlled.
    Tabulated {
        samples: Vec<(f64, f64)>,
        #[serde(default)]
        theta_in: f64,
    },
}

impl PumpProfile {
    /// The pump that never couples the modes.
    pub fn zero() -> Self {
        PumpProfile::Constant { q: 0.0, theta_in: 0.0 }
    }

    pub fn de_sitter() -> Self {
        PumpProfile::DeSitter {
            coupling: default_coupling(),
            tau_ref: 0.0,
        }
    }

    /// Checks that the profile is finite on the closed interval between `t_a`
    /// and `t_b`.
    pub fn validate(&self, t_a: f64, t_b: f64) -> Result<()> {
        let (lo, hi) = if t_a <= t_b { (t_a, t_b) } else { (t_b, t_a) };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(domain("integration interval must be finite"));
        }
        match self {
            PumpProfile::Constant { q, theta_in } => {
                if !(q.is_finite() && theta_in.is_finite()) {
                    return Err(domain("constant pump parameters must be finite"));
                }
            }
            PumpProfile::GaussianPulse {
                amplitude,
                center,
                width,
                theta_in,
            } => {
                if !(amplitude.is_finite() && center.is_finite() && theta_in.is_finite()) {
                    return Err(domain("pulse parameters must be finite"));
                }
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(domain("pulse width must be positive"));
                }
            }
            PumpProfile::DeSitter { coupling, tau_ref } => {
                if !(coupling.re.is_finite() && coupling.im.is_finite() && tau_ref.is_finite()) {
                    return Err(domain("de Sitter parameters must be finite"));
                }
                if lo <= *tau_ref && *tau_ref <= hi {
                    return Err(Error::SingularPump(*tau_ref));
                }
            }
            PumpProfile::Tabulated { samples, theta_in } => {
                if samples.len() < 2 {
                    return Err(domain("a tabulated pump needs at least two samples"));
                }
                if !theta_in.is_finite() || samples.iter().any(|(t, q)| !(t.is_finite() && q.is_finite())) {
                    return Err(domain("tabulated samples must be finite"));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(domain("tabulated times must be strictly increasing"));
                }
                let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
                if lo < first || hi > last {
                    return Err(domain(format!(
                        "tabulated pump covers [{first}, {last}] but the interval is [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `g(t)`. Callers are expected to have validated the interval; outside
    /// it the value may be non-finite (de Sitter) or clamped (tabulated).
    pub fn coupling(&self, t: f64) -> Complex64 {
        match self {
            PumpProfile::Constant { q, theta_in } => Complex64::from_polar(*q, *theta_in),
            PumpProfile::GaussianPulse {
                amplitude,
                center,
                width,
                theta_in,
            } => {
                let x = (t - center) / width;
                Complex64::from_polar(amplitude * (-0.5 * x * x).exp(), *theta_in)
            }
            PumpProfile::DeSitter { coupling, tau_ref } => coupling * (-1.0 / (t - tau_ref)),
            PumpProfile::Tabulated { samples, theta_in } => {
                Complex64::from_polar(interpolate(samples, t), *theta_in)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, PumpProfile::Constant { .. })
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let i = samples.partition_point(|s| s.0 <= t);
    if i == 0 {
        return samples[0].1;
    }
    if i == samples.len() {
        return samples[samples.len() - 1].1;
    }
    let (t0, q0) = samples[i - 1];
    let (t1, q1) = samples[i];
    q0 + (q1 - q0) * (t - t0) / (t1 - t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn de_sitter_singularity_is_rejected() {
        let p = PumpProfile::de_sitter();
        assert!(p.validate(-100.0, -0.01).is_ok());
        assert_eq!(p.validate(-1.0, 1.0), Err(Error::SingularPump(0.0)));
        assert!(p.validate(-1.0, 0.0).is_err());
        assert_eq!(p.coupling(-2.0), Complex64::new(0.0, 0.5));
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let p = PumpProfile::Tabulated {
            samples: alloc::vec![(0.0, 0.0), (1.0, 2.0), (3.0, 2.0)],
            theta_in: 0.0,
        };
        assert!(p.validate(0.0, 3.0).is_ok());
        assert!(p.validate(-0.1, 3.0).is_err());
        assert_eq!(p.coupling(0.25).re, 0.5);
        assert_eq!(p.coupling(2.0).re, 2.0);
        let bad = PumpProfile::Tabulated {
            samples: alloc::vec![(0.0, 0.0), (0.0, 1.0)],
            theta_in: 0.0,
        };
        assert!(bad.validate(0.0, 0.0).is_err());
    }

    #[test]
    fn pulse_peaks_at_center() {
        let p = PumpProfile::GaussianPulse {
            amplitude: 2.0,
            center: 1.0,
            width: 0.5,
            theta_in: 0.0,
        };
        assert_eq!(p.coupling(1.0).re, 2.0);
        assert!((p.coupling(1.5).re - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        assert!(PumpProfile::GaussianPulse {
            amplitude: 1.0,
            center: 0.0,
            width: 0.0,
            theta_in: 0.0
        }
        .validate(0.0, 1.0)
        .is_err());
    }
}
