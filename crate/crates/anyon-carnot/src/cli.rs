//! Command-line front end.
//!
//! Four subcommands: `cycle` (one engine evaluation), `sweep` (parameter
//! grids), `spectrum` (level tables), `verify` (closed-form vs series
//! cross-checks). Cycle parameters come from a flat JSON config file,
//! from flags, or both, with flags taking precedence field by field.
//!
//! Exit codes: 0 success, 1 verification failures, 2 invalid flags or
//! config, 3 I/O failure, 4 resource cap exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::cycle::{run_cycle, CycleConfig, CycleRow};
use crate::report;
use crate::spectrum::{
    degeneracy, enumerate_levels, levels_through_excitation, EnergyScale, LevelClass, LevelIndex,
    StatisticsParameter,
};
use crate::sweep::{run_sweep, Objective, ParamAxis, SweepSpec, DEFAULT_GRID_CAP};
use crate::verify::{run_verify, Quantity, VerifySpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// Ceiling on the number of levels `spectrum` will tabulate.
pub const SPECTRUM_LEVEL_CAP: u64 = 10_000_000;

/// Front-end failure, sorted by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_IO,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(err: crate::Error) -> Self {
        match err {
            crate::Error::CapExceeded { .. } => CliError::Cap(err.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "anyon-carnot",
    version,
    about = "Quantum Carnot engine driving two trapped anyons through statistics changes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one cycle and report heats, work and efficiencies
    Cycle(CycleArgs),
    /// Evaluate a grid of cycles and tabulate every row
    Sweep(SweepArgs),
    /// Tabulate the two-anyon levels at fixed statistics
    Spectrum(SpectrumArgs),
    /// Cross-check closed forms against direct level sums
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// How a command's payload leaves the process.
#[derive(Debug, Args)]
struct RunManifest {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

impl RunManifest {
    fn emit(&self, payload: &str) -> Result<(), CliError> {
        match &self.output {
            Some(path) => fs::write(path, payload.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(payload.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}"))),
        }
    }
}

#[derive(Debug, Args)]
struct CycleArgs {
    /// Flat JSON config file: t_h, t_c, nu_a..nu_d, hbar_omega, k_b
    #[arg(long)]
    config: Option<PathBuf>,
    /// Hot bath temperature (overrides the config file)
    #[arg(long)]
    t_h: Option<f64>,
    /// Cold bath temperature
    #[arg(long)]
    t_c: Option<f64>,
    /// Statistics at corner A
    #[arg(long)]
    nu_a: Option<f64>,
    /// Statistics at corner B
    #[arg(long)]
    nu_b: Option<f64>,
    /// Statistics at corner C
    #[arg(long)]
    nu_c: Option<f64>,
    /// Statistics at corner D
    #[arg(long)]
    nu_d: Option<f64>,
    /// Trap level spacing (default 1: natural units)
    #[arg(long)]
    hbar_omega: Option<f64>,
    /// Boltzmann constant (default 1: natural units)
    #[arg(long)]
    k_b: Option<f64>,
    #[command(flatten)]
    manifest: RunManifest,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat JSON sweep spec; each parameter is a number or "start:stop:count"
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fix the hot bath temperature (overrides the config file)
    #[arg(long)]
    t_h: Option<f64>,
    #[arg(long)]
    t_c: Option<f64>,
    #[arg(long)]
    nu_a: Option<f64>,
    #[arg(long)]
    nu_b: Option<f64>,
    #[arg(long)]
    nu_c: Option<f64>,
    #[arg(long)]
    nu_d: Option<f64>,
    /// Range one parameter, e.g. --range nu_b=0:1:11
    #[arg(long)]
    range: Option<String>,
    /// Select a best row in the summary
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Maximum number of grid points
    #[arg(long)]
    grid_cap: Option<u64>,
    #[arg(long)]
    hbar_omega: Option<f64>,
    #[arg(long)]
    k_b: Option<f64>,
    #[command(flatten)]
    manifest: RunManifest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    None,
    #[value(alias = "max_work")]
    MaxWork,
    #[value(alias = "max_efficiency")]
    MaxEfficiency,
}

impl From<ObjectiveArg> for Objective {
    fn from(arg: ObjectiveArg) -> Self {
        match arg {
            ObjectiveArg::None => Objective::None,
            ObjectiveArg::MaxWork => Objective::MaxWork,
            ObjectiveArg::MaxEfficiency => Objective::MaxEfficiency,
        }
    }
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Statistics parameter, anywhere in [0, 2]
    #[arg(long)]
    nu: f64,
    /// Keep levels with excitation n <= n_max
    #[arg(long, conflicts_with = "e_max")]
    n_max: Option<u32>,
    /// Keep levels with energy <= e_max (units of hbar_omega)
    #[arg(long)]
    e_max: Option<f64>,
    #[command(flatten)]
    manifest: RunManifest,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Quantities to check: partition, mean_energy, cross_mean_energy, entropy
    #[arg(long = "quantity", value_delimiter = ',')]
    quantities: Vec<String>,
    /// Statistics grid (comma separated)
    #[arg(long = "nu", value_delimiter = ',', allow_negative_numbers = true)]
    nu: Vec<f64>,
    /// Frozen-population statistics grid for the cross energy
    #[arg(
        long = "nu-prime",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    nu_prime: Vec<f64>,
    /// Grid of x = beta * hbar_omega (comma separated)
    #[arg(long = "x", value_delimiter = ',', allow_negative_numbers = true)]
    x: Vec<f64>,
    /// Relative agreement demanded per row
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Relative tail target for the adaptive series cutoff
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
    #[command(flatten)]
    manifest: RunManifest,
}

/// Parses the process arguments and runs the selected command,
/// returning the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Cycle(args) => cmd_cycle(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

// ---- cycle -----------------------------------------------------------------

/// Config-file schema shared by `cycle` and the fixed part of `sweep`.
/// Unknown keys are rejected so typos cannot silently fall back to
/// defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycleConfigFile {
    t_h: Option<f64>,
    t_c: Option<f64>,
    nu_a: Option<f64>,
    nu_b: Option<f64>,
    nu_c: Option<f64>,
    nu_d: Option<f64>,
    hbar_omega: Option<f64>,
    k_b: Option<f64>,
}

/// The config-file representation of a validated configuration. Parsing
/// this back reproduces the config exactly (17-digit floats).
pub fn cycle_config_file_json(config: &CycleConfig) -> String {
    format!(
        concat!(
            "{{\"t_h\":{},\"t_c\":{},\"nu_a\":{},\"nu_b\":{},\"nu_c\":{},\"nu_d\":{},",
            "\"hbar_omega\":{},\"k_b\":{}}}\n"
        ),
        report::fmt_float(config.t_h()),
        report::fmt_float(config.t_c()),
        report::fmt_float(config.nu_a().value()),
        report::fmt_float(config.nu_b().value()),
        report::fmt_float(config.nu_c().value()),
        report::fmt_float(config.nu_d().value()),
        report::fmt_float(config.scale().hbar_omega()),
        report::fmt_float(config.scale().k_b()),
    )
}

fn read_json_file<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn require_param(
    name: &'static str,
    flag: Option<f64>,
    file: Option<f64>,
) -> Result<f64, CliError> {
    flag.or(file).ok_or_else(|| {
        CliError::Invalid(format!(
            "{name}: required (set --{} or provide a config file)",
            name.replace('_', "-")
        ))
    })
}

fn resolve_cycle(args: &CycleArgs) -> Result<CycleConfig, CliError> {
    let file: CycleConfigFile = read_json_file(args.config.as_deref())?;
    let scale = EnergyScale::new(
        args.hbar_omega.or(file.hbar_omega).unwrap_or(1.0),
        args.k_b.or(file.k_b).unwrap_or(1.0),
    )?;
    CycleConfig::new(
        require_param("t_h", args.t_h, file.t_h)?,
        require_param("t_c", args.t_c, file.t_c)?,
        require_param("nu_a", args.nu_a, file.nu_a)?,
        require_param("nu_b", args.nu_b, file.nu_b)?,
        require_param("nu_c", args.nu_c, file.nu_c)?,
        require_param("nu_d", args.nu_d, file.nu_d)?,
        scale,
    )
    .map_err(Into::into)
}

fn cmd_cycle(args: &CycleArgs) -> Result<i32, CliError> {
    let config = resolve_cycle(args)?;
    let row: CycleRow = run_cycle(&config).row();
    let payload = match args.manifest.format {
        Format::Json => report::cycle_json(&row),
        Format::Csv => report::cycle_csv(&row),
    };
    args.manifest.emit(&payload)?;
    Ok(EXIT_OK)
}

// ---- sweep ------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfigFile {
    t_h: Option<AxisSpec>,
    t_c: Option<AxisSpec>,
    nu_a: Option<AxisSpec>,
    nu_b: Option<AxisSpec>,
    nu_c: Option<AxisSpec>,
    nu_d: Option<AxisSpec>,
    hbar_omega: Option<f64>,
    k_b: Option<f64>,
    objective: Option<String>,
    grid_cap: Option<u64>,
}

/// A parameter entry in a sweep config: a bare number fixes it, a
/// "start:stop:count" string ranges it.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AxisSpec {
    Fixed(f64),
    Range(String),
}

impl AxisSpec {
    fn to_axis(&self, field: &'static str) -> Result<ParamAxis, CliError> {
        match self {
            AxisSpec::Fixed(v) => Ok(ParamAxis::Fixed(*v)),
            AxisSpec::Range(text) => parse_range_triple(field, text),
        }
    }
}

fn parse_range_triple(field: &str, text: &str) -> Result<ParamAxis, CliError> {
    let bad = || {
        CliError::Invalid(format!(
            "{field}: range must be start:stop:count, got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(ParamAxis::Range { start, stop, count })
}

fn resolve_sweep(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let file: SweepConfigFile = read_json_file(args.config.as_deref())?;

    // starting point: config file axes, if any
    let file_axis =
        |spec: &Option<AxisSpec>, field: &'static str| -> Result<Option<ParamAxis>, CliError> {
            spec.as_ref().map(|s| s.to_axis(field)).transpose()
        };
    let mut axes: [(&'static str, Option<ParamAxis>); 6] = [
        ("t_h", file_axis(&file.t_h, "t_h")?),
        ("t_c", file_axis(&file.t_c, "t_c")?),
        ("nu_a", file_axis(&file.nu_a, "nu_a")?),
        ("nu_b", file_axis(&file.nu_b, "nu_b")?),
        ("nu_c", file_axis(&file.nu_c, "nu_c")?),
        ("nu_d", file_axis(&file.nu_d, "nu_d")?),
    ];

    // fixed-value flags override field by field
    let flag_values = [
        args.t_h, args.t_c, args.nu_a, args.nu_b, args.nu_c, args.nu_d,
    ];
    for (slot, value) in axes.iter_mut().zip(flag_values) {
        if let Some(v) = value {
            slot.1 = Some(ParamAxis::Fixed(v));
        }
    }

    // one --range flag may turn a parameter into an axis
    if let Some(range) = &args.range {
        let (name, triple) = range.split_once('=').ok_or_else(|| {
            CliError::Invalid(format!(
                "range: expected name=start:stop:count, got {range:?}"
            ))
        })?;
        let slot = axes
            .iter_mut()
            .find(|(field, _)| *field == name.trim())
            .ok_or_else(|| {
                CliError::Invalid(format!(
                    "range: unknown parameter {name:?} (expected one of t_h, t_c, nu_a, nu_b, nu_c, nu_d)"
                ))
            })?;
        slot.1 = Some(parse_range_triple(slot.0, triple)?);
    }

    let mut resolved = [ParamAxis::Fixed(0.0); 6];
    for (i, (field, axis)) in axes.into_iter().enumerate() {
        resolved[i] = axis.ok_or_else(|| {
            CliError::Invalid(format!(
                "{field}: required (set --{}, --range {field}=..., or a config file)",
                field.replace('_', "-")
            ))
        })?;
    }
    let [t_h, t_c, nu_a, nu_b, nu_c, nu_d] = resolved;

    let objective = match (&args.objective, &file.objective) {
        (Some(flag), _) => (*flag).into(),
        (None, Some(label)) => Objective::parse(label)?,
        (None, None) => Objective::None,
    };
    let scale = EnergyScale::new(
        args.hbar_omega.or(file.hbar_omega).unwrap_or(1.0),
        args.k_b.or(file.k_b).unwrap_or(1.0),
    )?;
    Ok(SweepSpec {
        t_h,
        t_c,
        nu_a,
        nu_b,
        nu_c,
        nu_d,
        scale,
        objective,
        grid_cap: args.grid_cap.or(file.grid_cap).unwrap_or(DEFAULT_GRID_CAP),
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, CliError> {
    let spec = resolve_sweep(args)?;
    let result = run_sweep(&spec)?;
    let payload = match args.manifest.format {
        Format::Json => report::sweep_json(&result, spec.objective),
        Format::Csv => report::sweep_csv(&result, spec.objective),
    };
    args.manifest.emit(&payload)?;
    Ok(EXIT_OK)
}

// ---- spectrum ---------------------------------------------------------------

/// Counts levels lazily, failing as soon as the running total clears the
/// cap (so `degeneracy` never sees excitations anywhere near overflow).
fn check_level_budget(per_class_tops: &[Option<u32>]) -> Result<(), CliError> {
    let mut count: u128 = 0;
    for &top in per_class_tops {
        let Some(n_top) = top else { continue };
        for n in 0..=n_top {
            count += u128::from(degeneracy(n));
            if count > u128::from(SPECTRUM_LEVEL_CAP) {
                return Err(spectrum_cap_error(count));
            }
        }
    }
    Ok(())
}

/// Levels within the energy budget, counted before they are materialized.
fn levels_within_energy(nu: StatisticsParameter, e_max: f64) -> Result<Vec<LevelIndex>, CliError> {
    let tops: Vec<Option<u32>> = [LevelClass::I, LevelClass::II]
        .iter()
        .map(|class| {
            let budget = e_max - class.ground_offset(nu);
            (budget >= 0.0).then(|| budget.floor().min(f64::from(u32::MAX)) as u32)
        })
        .collect();
    check_level_budget(&tops)?;
    enumerate_levels(nu, e_max).map_err(Into::into)
}

fn spectrum_cap_error(count: u128) -> CliError {
    CliError::Cap(format!(
        "spectrum table would hold more than {count} levels, exceeding the cap of {SPECTRUM_LEVEL_CAP}"
    ))
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<i32, CliError> {
    let nu = StatisticsParameter::new(args.nu)?;
    let levels = match (args.n_max, args.e_max) {
        (Some(n_max), None) => {
            check_level_budget(&[Some(n_max), Some(n_max)])?;
            levels_through_excitation(n_max)
        }
        (None, Some(e_max)) => levels_within_energy(nu, e_max)?,
        _ => {
            return Err(CliError::Invalid(
                "spectrum: provide exactly one of --n-max or --e-max".to_string(),
            ))
        }
    };
    let payload = match args.manifest.format {
        Format::Json => report::spectrum_json(&levels, nu),
        Format::Csv => report::spectrum_csv(&levels, nu),
    };
    args.manifest.emit(&payload)?;
    Ok(EXIT_OK)
}

// ---- verify -----------------------------------------------------------------

fn resolve_verify(args: &VerifyArgs) -> Result<VerifySpec, CliError> {
    let defaults = VerifySpec::default();
    let quantities = if args.quantities.is_empty() {
        defaults.quantities
    } else {
        args.quantities
            .iter()
            .map(|label| Quantity::parse(label))
            .collect::<crate::Result<_>>()?
    };
    Ok(VerifySpec {
        quantities,
        nu_grid: or_default(&args.nu, defaults.nu_grid),
        nu_prime_grid: or_default(&args.nu_prime, defaults.nu_prime_grid),
        x_grid: or_default(&args.x, defaults.x_grid),
        tolerance: args.tolerance,
        tail_tol: args.tail_tol,
    })
}

fn or_default(values: &[f64], defaults: Vec<f64>) -> Vec<f64> {
    if values.is_empty() {
        defaults
    } else {
        values.to_vec()
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let spec = resolve_verify(args)?;
    let verdict = run_verify(&spec)?;
    let payload = match args.manifest.format {
        Format::Json => report::verify_json(&verdict),
        Format::Csv => report::verify_csv(&verdict),
    };
    args.manifest.emit(&payload)?;
    if verdict.all_pass() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "verification failed: {} of {} rows out of tolerance",
            verdict.failures,
            verdict.rows.len()
        );
        Ok(EXIT_VERIFY_FAILED)
    }
}
