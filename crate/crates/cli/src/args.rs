use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tmsv_metrology::config::photon_number;
use tmsv_metrology::optimizer::classify;
use tmsv_metrology::LossModel;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "tmsv",
    version,
    about = "Phase estimation with two-mode squeezed vacuum in a lossy Mach-Zehnder interferometer",
    after_help = "Phases are in radians; all other quantities are dimensionless. \
                  Diverging quantities are written as `inf`."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum Fisher information and reference limits for one configuration
    Qfi(PointArgs),
    /// Parity expectation and phase error for one configuration
    Parity(PointArgs),
    /// Optimal measurement point for a probe, or optimal photon number for a budget --N
    Optimize(OptimizeArgs),
    /// Data table for one of the standard figures (see `figure --help`)
    Figure(FigureArgs),
    /// Cross-check closed forms against the fidelity, determinant and Fock routes
    Validate(ValidateArgs),
    /// Evaluate a configuration while sweeping one parameter linearly
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    /// One JSON object per line
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    TwoArm,
    OneArm,
    General,
}

impl From<ModelArg> for LossModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::TwoArm => LossModel::TwoArm,
            ModelArg::OneArm => LossModel::OneArm,
            ModelArg::General => LossModel::General,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    /// Mean photon number of the probe
    #[arg(long, conflicts_with = "r")]
    pub n: Option<f64>,

    /// Squeeze parameter r, with n = 2 sinh² r
    #[arg(long)]
    pub r: Option<f64>,
}

impl ProbeArgs {
    pub fn photons(&self) -> Option<f64> {
        self.n.or(self.r.map(photon_number))
    }

    pub fn require(&self) -> Result<f64, CliError> {
        self.photons().ok_or_else(|| CliError::Usage("one of --n or --r is required".into()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct LossArgs {
    /// Transmissivity of arm 1 (carries the phase)
    #[arg(long)]
    pub eta1: Option<f64>,

    /// Transmissivity of arm 2
    #[arg(long)]
    pub eta2: Option<f64>,

    /// Shorthand: both arms for two-arm, arm 1 for one-arm
    #[arg(long, conflicts_with_all = ["eta1", "eta2"])]
    pub eta: Option<f64>,

    /// Loss pattern; inferred from --eta1/--eta2 when omitted
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
}

/// Transmissivities with the loss pattern used for the classical reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Losses {
    pub eta1: f64,
    pub eta2: f64,
    pub model: LossModel,
}

impl Losses {
    pub fn new(eta1: f64, eta2: f64) -> Self {
        Self { eta1, eta2, model: classify(eta1, eta2).0 }
    }

    pub fn from_model(eta: f64, model: LossModel) -> Result<Self, CliError> {
        let (eta1, eta2) = model.transmissivities(eta)?;
        Ok(Self { eta1, eta2, model })
    }
}

impl LossArgs {
    pub fn resolve(&self) -> Result<Losses, CliError> {
        let model = self.model.map(LossModel::from);
        if let Some(eta) = self.eta {
            return match model.unwrap_or(LossModel::TwoArm) {
                LossModel::General => {
                    Err(CliError::Usage("--eta needs --model two-arm or one-arm".into()))
                }
                m => Losses::from_model(eta, m),
            };
        }
        let losses = Losses::new(self.eta1.unwrap_or(1.0), self.eta2.unwrap_or(1.0));
        match model {
            None | Some(LossModel::General) => Ok(Losses { model: model.unwrap_or(losses.model), ..losses }),
            Some(m) if m == losses.model || losses.eta1 == 1.0 && losses.eta2 == 1.0 => {
                Ok(Losses { model: m, ..losses })
            }
            Some(m) => Err(CliError::Usage(format!(
                "--eta1 {} --eta2 {} do not follow the {m:?} loss pattern",
                losses.eta1, losses.eta2
            ))),
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub probe: ProbeArgs,

    #[command(flatten)]
    pub loss: LossArgs,

    /// Phase; defaults to the optimal measurement point
    #[arg(long)]
    pub phi: Option<f64>,

    /// Total photon budget for repeated shots; defaults to a single shot
    #[arg(long = "N")]
    pub total: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub probe: ProbeArgs,

    #[command(flatten)]
    pub loss: LossArgs,

    /// Total photon budget; without --n/--r the photon number per shot is optimized
    #[arg(long = "N")]
    pub total: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    /// Precision vs n in [1, 100] (log spaced), eta = 0.8, both loss models
    #[value(name = "fig2_left")]
    Fig2Left,
    /// Precision vs eta in [0.01, 1] at n = 10, both loss models
    #[value(name = "fig2_right")]
    Fig2Right,
    /// Optimal point on n in [1, 100] x eta in [0.9, 0.999], one-arm losses
    #[value(name = "fig3_left")]
    Fig3Left,
    /// Single-shot parity error vs n in [1, 100] (log spaced), one-arm, eta = 0.99
    #[value(name = "fig3_right")]
    Fig3Right,
    /// Repeated-shot error vs n in [0.1, N] (log spaced), N = 200, one-arm,
    /// eta in {0.99, 0.98, 0.97, 0.96}
    #[value(name = "fig4")]
    Fig4,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,

    /// Override the transmissivity (fig2_left, fig3_right, fig4)
    #[arg(long)]
    pub eta: Option<f64>,

    /// Override the photon number (fig2_right)
    #[arg(long)]
    pub n: Option<f64>,

    /// Override the photon budget (fig4)
    #[arg(long = "N")]
    pub total: Option<f64>,

    /// Points along each swept axis
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Random points per check
    #[arg(long, default_value_t = 100)]
    pub grid: usize,

    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    N,
    Eta,
    Phi,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub var: SweepVar,

    #[arg(long)]
    pub lo: f64,

    #[arg(long)]
    pub hi: f64,

    #[arg(long, default_value_t = 50)]
    pub points: usize,

    #[command(flatten)]
    pub probe: ProbeArgs,

    #[command(flatten)]
    pub loss: LossArgs,

    /// Fixed phase; defaults to the optimal point of each sweep value
    #[arg(long)]
    pub phi: Option<f64>,

    #[arg(long = "N")]
    pub total: Option<f64>,
}
