use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::precision::Precision;
use crate::refcheck::Fault;
use crate::sweep::{Spacing, Units};

#[derive(Debug, Parser)]
#[command(
    name = "crossfield",
    version,
    about = "Relativistic tunnel-ionization rates in a constant crossed field"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate and factor breakdown at a single (state, field) point.
    Rate(RateArgs),
    /// Rate table over a charge range and a field grid.
    Scan(ScanArgs),
    /// Compare the direct 1s1/2 form with the factored form on a grid.
    Compare(CompareArgs),
    /// Nonrelativistic limit of the tunneling exponent.
    Limits(LimitsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RateArgs {
    /// Nuclear charge of a hydrogen-like ion (1s1/2 state).
    #[arg(long = "z")]
    pub z: Option<u32>,
    /// Reduced energy E0 / m_e c^2 of a custom state.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Squared asymptotic coefficient C_lambda^2 of a custom state.
    #[arg(long)]
    pub clambda2: Option<f64>,
    /// Coulomb parameter eta of a custom state.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Field strength in units of the Schwinger field.
    #[arg(long)]
    pub field: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with status 3 if the result under- or overflowed.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ScanArgs {
    /// Inclusive charge range LO:HI of hydrogen-like ions.
    #[arg(long)]
    pub z_range: Option<String>,
    /// Field range MIN:MAX in units of the Schwinger field.
    #[arg(long)]
    pub field_range: Option<String>,
    /// Number of field points.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
    /// Rate units of the text table.
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingArg {
    Geometric,
    Linear,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Geometric => Spacing::Geometric,
            SpacingArg::Linear => Spacing::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitsArg {
    Reduced,
    Si,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Reduced => Units::Reduced,
            UnitsArg::Si => Units::Si,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CompareArgs {
    /// Comma-separated Z alpha values; defaults to the standard grid.
    #[arg(long, value_delimiter = ',')]
    pub zalpha_grid: Option<Vec<f64>>,
    /// Comma-separated reduced fields; defaults to the standard grid.
    #[arg(long, value_delimiter = ',')]
    pub field_grid: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Extended)]
    pub precision: PrecisionArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
    #[arg(long, hide = true, default_value_t = 1.01)]
    pub fault_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    Sqrt3,
    QTwo,
    DirectFour,
    Clambda,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::Sqrt3 => Fault::Sqrt3,
            FaultArg::QTwo => Fault::QTwo,
            FaultArg::DirectFour => Fault::DirectFour,
            FaultArg::Clambda => Fault::Clambda,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LimitsArgs {
    /// Comma-separated values of 1 - epsilon; defaults to 1e-2 ... 1e-8.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub delta_seq: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}
