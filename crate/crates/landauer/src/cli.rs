//! The `landauer` command line.
//!
//! Exit codes: `0` when the bound holds (or verification passes), `2` when it
//! is violated (or verification fails), `1` on any error, usage errors
//! included.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use landauer_core::analytic::{bound_ratio, is_consistent, nbar_from_thermal, Multiplicities, ThermalSpec};
use landauer_core::field::{FieldThermal, OmegaConvention, Species};
use serde::Serialize;

use crate::format::fmt_f64;
use crate::pump_config::PumpConfig;
use crate::report::{self, VerifySettings};
use crate::scan::{self, AxisRange, Plane, Scale, ScanConfig};
use crate::spectrum;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "landauer", version, about = "Entropy, heat and particle-flow bounds under parametric amplification")]
pub struct Cli {
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Emit JSON where a command supports it.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Reserved; nothing in the tool is random.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the bound at a single point.
    Check(CheckArgs),
    /// Write a CSV grid of log10 of the bound ratio over a plane.
    Map(MapArgs),
    /// Compare the closed forms against the truncated Fock-space oracle.
    Verify(VerifyArgs),
    /// Integrate field modes under a pump and evaluate the per-mode bound.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Initial thermal multiplicity of the environment.
    #[arg(long, conflicts_with = "from_thermal", required_unless_present = "from_thermal")]
    nbar: Option<f64>,
    /// Derive the thermal multiplicity from --T, --omega and --mu.
    #[arg(long)]
    from_thermal: bool,
    /// Produced-quanta multiplicity.
    #[arg(long, conflicts_with = "r", required_unless_present = "r")]
    nq: Option<f64>,
    /// Squeeze amplitude (the produced multiplicity is sinh² r).
    #[arg(long)]
    r: Option<f64>,
    /// Environment oscillator frequency.
    #[arg(long)]
    omega: f64,
    /// Environment temperature.
    #[arg(long = "T", value_name = "T")]
    temperature: f64,
    /// Chemical potential of the environment.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// TOML scan configuration (plane, x, y, mu); replaces the flags below.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["plane", "x", "y"])]
    config: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "config")]
    plane: Option<Plane>,
    /// x axis as MIN:MAX:POINTS.
    #[arg(long, required_unless_present = "config", allow_hyphen_values = true)]
    x: Option<AxisRange>,
    /// y axis as MIN:MAX:POINTS.
    #[arg(long, required_unless_present = "config", allow_hyphen_values = true)]
    y: Option<AxisRange>,
    #[arg(long, value_enum, default_value = "log10")]
    x_scale: Scale,
    #[arg(long, value_enum, default_value = "log10")]
    y_scale: Scale,
    /// Chemical potential in units of the temperature.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Grid points as NBAR:R, comma separated. Defaults to
    /// {0.5, 1, 2} × {0.3, 0.8, 1.2}.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["nbar", "r"])]
    grid: Vec<String>,
    /// Thermal multiplicities, combined with every --r.
    #[arg(long, value_delimiter = ',', requires = "r")]
    nbar: Vec<f64>,
    /// Squeeze amplitudes, combined with every --nbar.
    #[arg(long, value_delimiter = ',', requires = "nbar")]
    r: Vec<f64>,
    /// Agreement required between oracle and closed forms.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    /// Probability mass the truncation may discard.
    #[arg(long, default_value_t = 1e-12)]
    truncation_tolerance: f64,
    /// Environment frequency used for the heat comparison.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    /// ω_k = k
    K,
    /// ω_k = sqrt(k/2)
    HalfRoot,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// TOML pump configuration with its [domain].
    #[arg(long, value_name = "PATH")]
    pump: PathBuf,
    /// Environment temperature.
    #[arg(long = "T", value_name = "T")]
    temperature: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, value_enum, default_value = "k")]
    omega_convention: ConventionArg,
    /// Explicit wavenumbers, comma separated and ascending.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["k_min", "k_max", "k_points"])]
    k: Vec<f64>,
    #[arg(long, requires_all = ["k_max", "k_points"])]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    k_points: Option<usize>,
    #[arg(long, value_enum, default_value = "log10")]
    k_scale: Scale,
    /// Two tensor polarizations instead of one scalar.
    #[arg(long)]
    graviton: bool,
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Check(a) => check(cli, a),
        Command::Map(a) => map(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Spectrum(a) => spectrum_cmd(cli, a),
    }
}

fn with_output(out: &Option<PathBuf>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Single-point result as printed by `check`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub n_bar: f64,
    pub n_q: f64,
    #[serde(rename = "N_bar")]
    pub n_total: f64,
    pub delta_s_nats: f64,
    pub delta_s_bits: f64,
    pub delta_q: f64,
    pub delta_n: f64,
    pub ratio: f64,
    pub satisfied: bool,
    /// Whether `n_bar` agrees with the thermal parameters.
    pub thermal_consistent: bool,
}

fn check(cli: &Cli, a: &CheckArgs) -> Result<i32> {
    let spec = ThermalSpec::new(a.temperature, a.omega, a.mu)?;
    let n_bar = match (a.nbar, a.from_thermal) {
        (Some(n), false) => n,
        (None, true) => nbar_from_thermal(&spec)?,
        _ => bail!("give exactly one of --nbar and --from-thermal"),
    };
    let m = match (a.nq, a.r) {
        (Some(nq), None) => Multiplicities::new(n_bar, nq)?,
        (None, Some(r)) => Multiplicities::from_squeeze(n_bar, r)?,
        _ => bail!("give exactly one of --nq and --r"),
    };
    let b = bound_ratio(&spec, &m)?;
    let report = CheckReport {
        n_bar: m.n_bar(),
        n_q: m.n_q(),
        n_total: m.n_total(),
        delta_s_nats: b.delta_s,
        delta_s_bits: b.delta_s / std::f64::consts::LN_2,
        delta_q: b.delta_q,
        delta_n: b.delta_n,
        ratio: b.ratio,
        satisfied: b.satisfied,
        thermal_consistent: is_consistent(&spec, &m)?,
    };
    with_output(&cli.out, |w| {
        if cli.json {
            serde_json::to_writer_pretty(&mut *w, &report)?;
            writeln!(w)?;
        } else {
            for (key, value) in [
                ("n_bar", report.n_bar),
                ("n_q", report.n_q),
                ("N_bar", report.n_total),
                ("delta_S_nats", report.delta_s_nats),
                ("delta_S_bits", report.delta_s_bits),
                ("delta_Q", report.delta_q),
                ("delta_N", report.delta_n),
                ("ratio", report.ratio),
            ] {
                writeln!(w, "{key:<18} = {}", fmt_f64(value))?;
            }
            writeln!(w, "{:<18} = {}", "satisfied", report.satisfied)?;
            writeln!(w, "{:<18} = {}", "thermal_consistent", report.thermal_consistent)?;
        }
        Ok(())
    })?;
    Ok(if report.satisfied { EXIT_OK } else { EXIT_VIOLATED })
}

fn map(cli: &Cli, a: &MapArgs) -> Result<i32> {
    let config = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<ScanConfig>(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => {
            let (Some(plane), Some(mut x), Some(mut y)) = (a.plane, a.x, a.y) else {
                bail!("--plane, --x and --y are required without --config");
            };
            x.scale = a.x_scale;
            y.scale = a.y_scale;
            ScanConfig { plane, x, y, mu: a.mu }
        }
    };
    let cells = scan::evaluate(&config)?;
    with_output(&cli.out, |w| scan::write_csv(&cells, w))?;
    Ok(EXIT_OK)
}

fn parse_grid(items: &[String]) -> Result<Vec<(f64, f64)>> {
    items
        .iter()
        .map(|s| {
            let (n, r) = s.split_once(':').with_context(|| format!("expected NBAR:R, got {s:?}"))?;
            Ok((n.trim().parse()?, r.trim().parse()?))
        })
        .collect()
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<i32> {
    let grid = if !a.grid.is_empty() {
        parse_grid(&a.grid)?
    } else if !a.nbar.is_empty() {
        a.nbar.iter().flat_map(|&n| a.r.iter().map(move |&r| (n, r))).collect()
    } else {
        [0.5, 1.0, 2.0]
            .iter()
            .flat_map(|&n| [0.3, 0.8, 1.2].iter().map(move |&r| (n, r)))
            .collect()
    };
    let settings = VerifySettings {
        tolerance: a.tolerance,
        truncation_tolerance: a.truncation_tolerance,
        omega: a.omega,
    };
    let report = report::run(&grid, settings)?;
    with_output(&cli.out, |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VIOLATED })
}

fn spectrum_cmd(cli: &Cli, a: &SpectrumArgs) -> Result<i32> {
    let cfg = PumpConfig::load(&a.pump)?;
    let kgrid = if !a.k.is_empty() {
        a.k.clone()
    } else {
        let (Some(min), Some(max), Some(points)) = (a.k_min, a.k_max, a.k_points) else {
            bail!("give either --k or all of --k-min, --k-max and --k-points");
        };
        let axis = AxisRange {
            min,
            max,
            points,
            scale: a.k_scale,
        };
        axis.validate()?;
        axis.values()
    };
    let convention = match a.omega_convention {
        ConventionArg::K => OmegaConvention::Wavenumber,
        ConventionArg::HalfRoot => OmegaConvention::HalfRoot,
    };
    let species = if a.graviton { Species::Graviton } else { Species::Scalar };
    let thermal = FieldThermal {
        temperature: a.temperature,
        mu: a.mu,
    };
    let entries = spectrum::scan(
        &kgrid,
        &cfg.pump,
        &thermal,
        convention,
        species,
        cfg.domain.t_in,
        cfg.domain.t_fin,
        a.tol,
    )?;
    with_output(&cli.out, |w| spectrum::write_csv(&entries, species, w))?;
    Ok(EXIT_OK)
}
