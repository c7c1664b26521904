//! Command-line front end.
//!
//! Exit codes: 0 success, 1 acceptance tolerance exceeded, 2 domain error,
//! 3 flagged result under `--strict`, 64 usage error, 73 I/O error.
//! Results go to standard output (or `--out`); diagnostics go to standard error.

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use serde::Deserialize;

use crate::ion::Perturbation;
use crate::ion::{rate_factored, ReducedField};
use crate::precision::Precision;
use crate::refcheck::{
    compare_forms_with, default_delta_sequence, limits_pass, nonrel_limit_residual, standard_grid,
    Fault,
};
use crate::sweep::{monotonicity_report, scan_grid, FieldGrid, ScanSpec, StateInput};
use args::{
    Cli, Command, CompareArgs, Format, LimitsArgs, RateArgs, ScanArgs, SpacingArg, UnitsArg,
};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const TOLERANCE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const STRICT: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const IO: i32 = 73;
}

/// Failure carrying its exit code and a one-line reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    fn domain(message: impl ToString) -> Self {
        Self {
            code: exit::DOMAIN,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self {
            code: exit::IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::domain(e)
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Entry point used by the binary: parses `args`, runs, returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    exit::SUCCESS
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    exit::USAGE
                }
            };
        }
    };

    let result = match &cli.command {
        Command::Rate(a) => run_rate(a, out),
        Command::Scan(a) => run_scan(a, out, err),
        Command::Compare(a) => run_compare(a, out),
        Command::Limits(a) => run_limits(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn rate_state(a: &RateArgs) -> std::result::Result<StateInput, CliError> {
    let custom = [a.epsilon, a.clambda2, a.eta];
    let any_custom = custom.iter().any(Option::is_some);
    match (a.z, any_custom) {
        (Some(_), true) => Err(CliError::usage(
            "conflicting state flags: --z cannot be combined with --epsilon/--clambda2/--eta",
        )),
        (Some(z), false) => Ok(StateInput::Charge { z }),
        (None, false) => Err(CliError::usage(
            "missing state: give --z or all of --epsilon --clambda2 --eta",
        )),
        (None, true) => match custom {
            [Some(epsilon), Some(c_lambda_sq), Some(eta)] => Ok(StateInput::Custom {
                epsilon,
                c_lambda_sq,
                eta,
            }),
            _ => Err(CliError::usage(
                "incomplete custom state: --epsilon, --clambda2 and --eta are all required",
            )),
        },
    }
}

fn run_rate(a: &RateArgs, out: &mut dyn Write) -> CliResult {
    let input = rate_state(a)?;
    let state = input.to_state()?;
    let field = ReducedField::new(a.field)?;
    let breakdown = rate_factored(&state, field)?;
    emit(
        out,
        &output::render_rate(&input.label(), &breakdown, a.format),
    )?;
    if a.strict && breakdown.flags.has_range_issue() {
        return Ok(exit::STRICT);
    }
    Ok(exit::SUCCESS)
}

/// Flat key-value scan configuration; keys mirror the `scan` flags.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScanConfig {
    pub z_range: Option<String>,
    pub field_range: Option<String>,
    pub points: Option<usize>,
    pub spacing: Option<SpacingArg>,
    pub units: Option<UnitsArg>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ScanConfig {
    pub fn load(path: &Path) -> std::result::Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.message())))
    }
}

const DEFAULT_POINTS: usize = 10;

fn split_range(s: &str, flag: &str) -> std::result::Result<(String, String), CliError> {
    s.split_once(':')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| CliError::usage(format!("{flag} expects LO:HI, got {s:?}")))
}

fn parse_charge_range(s: &str) -> std::result::Result<(u32, u32), CliError> {
    let (lo, hi) = split_range(s, "--z-range")?;
    let parse = |v: &str| {
        v.parse::<u32>()
            .map_err(|_| CliError::usage(format!("--z-range: {v:?} is not a charge")))
    };
    Ok((parse(&lo)?, parse(&hi)?))
}

fn parse_field_range(s: &str) -> std::result::Result<(f64, f64), CliError> {
    let (lo, hi) = split_range(s, "--field-range")?;
    let parse = |v: &str| {
        v.parse::<f64>()
            .map_err(|_| CliError::usage(format!("--field-range: {v:?} is not a number")))
    };
    Ok((parse(&lo)?, parse(&hi)?))
}

/// Scan flags merged over an optional config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScan {
    pub spec: ScanSpec,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn resolve_scan(a: &ScanArgs) -> std::result::Result<ResolvedScan, CliError> {
    let config = match &a.config {
        Some(path) => ScanConfig::load(path)?,
        None => ScanConfig::default(),
    };
    let z_range = a
        .z_range
        .clone()
        .or(config.z_range)
        .ok_or_else(|| CliError::usage("scan needs --z-range (flag or config)"))?;
    let field_range = a
        .field_range
        .clone()
        .or(config.field_range)
        .ok_or_else(|| CliError::usage("scan needs --field-range (flag or config)"))?;
    let (z_lo, z_hi) = parse_charge_range(&z_range)?;
    let (f_min, f_max) = parse_field_range(&field_range)?;
    let fields = FieldGrid {
        min: f_min,
        max: f_max,
        count: a.points.or(config.points).unwrap_or(DEFAULT_POINTS),
        spacing: a
            .spacing
            .or(config.spacing)
            .map(Into::into)
            .unwrap_or_default(),
    };
    fields.validate()?;
    let mut spec = ScanSpec::charge_range(z_lo, z_hi, fields)?;
    spec.units = a.units.or(config.units).map(Into::into).unwrap_or_default();
    Ok(ResolvedScan {
        spec,
        out: a.out.clone().or(config.out),
        format: a.format.or(config.format).unwrap_or_default(),
    })
}

fn run_scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let resolved = resolve_scan(a)?;
    let table = scan_grid(&resolved.spec)?;
    let text = output::render_scan(&table, resolved.format);
    match &resolved.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        None => emit(out, &text)?,
    }
    let violations = monotonicity_report(&table);
    let _ = writeln!(
        err,
        "scan: {} rows, {} flagged, {} monotonicity violations",
        table.rows.len(),
        table.flagged_rows(),
        violations.len()
    );
    for v in &violations {
        let _ = writeln!(err, "  {v}");
    }
    Ok(exit::SUCCESS)
}

fn run_compare(a: &CompareArgs, out: &mut dyn Write) -> CliResult {
    let grid = standard_grid();
    let zalpha = a.zalpha_grid.clone().unwrap_or_else(|| grid.zalpha.clone());
    let fields = a.field_grid.clone().unwrap_or_else(|| grid.f.clone());
    let precision = Precision::from(a.precision);
    let perturbation = match a.inject_fault {
        Some(fault) => Fault::from(fault).perturbation(a.fault_scale),
        None => Perturbation::NONE,
    };
    let report = compare_forms_with(&zalpha, &fields, precision, &perturbation)?;
    emit(out, &output::render_compare(&report, a.format))?;
    Ok(if report.passes() {
        exit::SUCCESS
    } else {
        exit::TOLERANCE
    })
}

fn run_limits(a: &LimitsArgs, out: &mut dyn Write) -> CliResult {
    let deltas = a.delta_seq.clone().unwrap_or_else(default_delta_sequence);
    let table = nonrel_limit_residual(&deltas)?;
    let pass = limits_pass(&table);
    emit(out, &output::render_limits(&table, pass, a.format))?;
    Ok(if pass { exit::SUCCESS } else { exit::TOLERANCE })
}
