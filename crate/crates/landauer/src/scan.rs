//! Two-dimensional grids of the bound ratio, one per figure plane.

use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use landauer_core::analytic::{ratio_factor, ratio_from_multiplicities, Multiplicities};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::fmt_f64;

/// Coordinate plane of a scan. Names read `x_vs_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Plane {
    /// Total multiplicity against `ω/T`.
    #[serde(rename = "N_vs_omegaT")]
    #[value(name = "N_vs_omegaT")]
    NVsOmegaT,
    /// Thermal against produced multiplicity (independent of `μ`).
    #[serde(rename = "nbar_vs_nq")]
    #[value(name = "nbar_vs_nq")]
    NbarVsNq,
    /// `ω/T` against produced multiplicity.
    #[serde(rename = "omegaT_vs_nq")]
    #[value(name = "omegaT_vs_nq")]
    OmegaTVsNq,
    /// Thermal multiplicity against squeeze amplitude.
    #[serde(rename = "nbar_vs_r")]
    #[value(name = "nbar_vs_r")]
    NbarVsR,
    /// `ω/T` against squeeze amplitude.
    #[serde(rename = "omegaT_vs_r")]
    #[value(name = "omegaT_vs_r")]
    OmegaTVsR,
}

impl Plane {
    /// Whether the x axis is `ω/T` (or, for [`Plane::NVsOmegaT`], the y axis).
    fn omega_axis(&self) -> Option<Axis> {
        match self {
            Plane::NVsOmegaT => Some(Axis::Y),
            Plane::OmegaTVsNq | Plane::OmegaTVsR => Some(Axis::X),
            Plane::NbarVsNq | Plane::NbarVsR => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Log10,
    Linear,
}

/// `points` samples from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl AxisRange {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.points >= 2, "an axis needs at least two points");
        ensure!(self.min.is_finite() && self.max.is_finite(), "axis bounds must be finite");
        ensure!(self.min < self.max, "axis minimum must be below its maximum");
        if self.scale == Scale::Log10 {
            ensure!(self.min > 0.0, "a logarithmic axis needs a positive range");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / n as f64;
                match self.scale {
                    Scale::Linear => {
                        if i == n {
                            self.max
                        } else {
                            self.min + f * (self.max - self.min)
                        }
                    }
                    Scale::Log10 => {
                        if i == 0 {
                            self.min
                        } else if i == n {
                            self.max
                        } else {
                            let (a, b) = (self.min.log10(), self.max.log10());
                            10f64.powf(a + f * (b - a))
                        }
                    }
                }
            })
            .collect()
    }
}

/// Parses `min:max:points`.
impl FromStr for AxisRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("expected MIN:MAX:POINTS, got {s:?}");
        }
        Ok(AxisRange {
            min: parts[0].trim().parse().context("axis minimum")?,
            max: parts[1].trim().parse().context("axis maximum")?,
            points: parts[2].trim().parse().context("axis point count")?,
            scale: Scale::Log10,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub plane: Plane,
    pub x: AxisRange,
    pub y: AxisRange,
    /// Chemical potential in units of the temperature. Only the planes with
    /// an `ω/T` axis depend on it, and it must stay below that axis.
    #[serde(default)]
    pub mu: f64,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.x.validate().context("x axis")?;
        self.y.validate().context("y axis")?;
        ensure!(self.mu.is_finite(), "chemical potential must be finite");
        if let Some(axis) = self.plane.omega_axis() {
            let range = match axis {
                Axis::X => &self.x,
                Axis::Y => &self.y,
            };
            ensure!(range.min > 0.0, "ω/T must be positive");
            ensure!(
                self.mu < range.min,
                "chemical potential ({}) must lie below the smallest ω/T ({})",
                self.mu,
                range.min
            );
        }
        Ok(())
    }
}

/// One grid cell. `ratio` is zero when nothing is amplified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub ratio: f64,
}

impl Cell {
    pub fn satisfied(&self) -> bool {
        self.ratio <= 1.0
    }

    /// `log10(ratio)`, or `None` for a zero ratio.
    pub fn log10_ratio(&self) -> Option<f64> {
        (self.ratio > 0.0).then(|| self.ratio.log10())
    }
}

fn nbar_at(omega_over_t: f64, mu: f64) -> f64 {
    1.0 / (omega_over_t - mu).exp_m1()
}

fn sinh2(r: f64) -> f64 {
    let s = r.sinh();
    s * s
}

/// Bound ratio at a single point of `plane`.
pub fn cell_ratio(plane: Plane, x: f64, y: f64, mu: f64) -> Result<f64> {
    Ok(match plane {
        Plane::NVsOmegaT => ratio_factor(x) / (y - mu),
        Plane::NbarVsNq => ratio_from_multiplicities(&Multiplicities::new(x, y)?),
        Plane::NbarVsR => ratio_from_multiplicities(&Multiplicities::new(x, sinh2(y))?),
        Plane::OmegaTVsNq => {
            let m = Multiplicities::new(nbar_at(x, mu), y)?;
            ratio_factor(m.n_total()) / (x - mu)
        }
        Plane::OmegaTVsR => {
            let m = Multiplicities::new(nbar_at(x, mu), sinh2(y))?;
            ratio_factor(m.n_total()) / (x - mu)
        }
    })
}

/// Evaluates the grid row-major over `x` with `y` varying fastest.
pub fn evaluate(config: &ScanConfig) -> Result<Vec<Cell>> {
    config.validate()?;
    let xs = config.x.values();
    let ys = config.y.values();
    let points: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    points
        .par_iter()
        .map(|&(x, y)| {
            Ok(Cell {
                x,
                y,
                ratio: cell_ratio(config.plane, x, y, config.mu)?,
            })
        })
        .collect()
}

/// Writes `x,y,log10_ratio,satisfied`; a zero ratio leaves `log10_ratio`
/// empty.
pub fn write_csv<W: Write>(cells: &[Cell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "log10_ratio", "satisfied"])?;
    for c in cells {
        let lr = c.log10_ratio().map(fmt_f64).unwrap_or_default();
        w.write_record([fmt_f64(c.x), fmt_f64(c.y), lr, c.satisfied().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(min: f64, max: f64, points: usize, scale: Scale) -> AxisRange {
        AxisRange {
            min,
            max,
            points,
            scale,
        }
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let v = axis(1e-2, 1e2, 5, Scale::Log10).values();
        assert_eq!(v[0], 1e-2);
        assert_eq!(v[4], 1e2);
        assert!((v[2] - 1.0).abs() < 1e-15);
        let v = axis(0.0, 1.0, 3, Scale::Linear).values();
        assert_eq!(v, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn axis_validation() {
        assert!(axis(1.0, 1.0, 3, Scale::Linear).validate().is_err());
        assert!(axis(0.0, 1.0, 1, Scale::Linear).validate().is_err());
        assert!(axis(0.0, 1.0, 3, Scale::Log10).validate().is_err());
        let parsed: AxisRange = "0.5:2:4".parse().unwrap();
        assert_eq!(parsed, axis(0.5, 2.0, 4, Scale::Log10));
        assert!("1:2".parse::<AxisRange>().is_err());
    }

    #[test]
    fn mu_must_sit_below_the_frequency_axis() {
        let cfg = ScanConfig {
            plane: Plane::OmegaTVsNq,
            x: axis(0.1, 10.0, 3, Scale::Log10),
            y: axis(0.1, 10.0, 3, Scale::Log10),
            mu: 0.2,
        };
        assert!(cfg.validate().is_err());
        let ok = ScanConfig { mu: -1.0, ..cfg.clone() };
        assert!(ok.validate().is_ok());
        // the multiplicity plane does not care
        let free = ScanConfig {
            plane: Plane::NbarVsNq,
            mu: 5.0,
            ..cfg
        };
        assert!(free.validate().is_ok());
    }

    #[test]
    fn zero_amplification_cell() {
        let c = Cell {
            x: 1.0,
            y: 0.0,
            ratio: cell_ratio(Plane::NbarVsR, 1.0, 0.0, 0.0).unwrap(),
        };
        assert_eq!(c.log10_ratio(), None);
        assert!(c.satisfied());
        let mut buf = Vec::new();
        write_csv(&[c], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with(",,true\n"), "{text}");
    }
}
