//! Command-line front end: single evaluations, parameter sweeps, figure tables and
//! cross-validation, written as CSV or JSON lines.

pub mod args;
pub mod figure;
pub mod record;
pub mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;
use tmsv_metrology::optimizer::optimize_budget;

use args::{Cli, Command, Format, Losses, OptimizeArgs, PointArgs, SweepArgs, SweepVar};
use figure::linear_grid;
use record::{evaluate_all, OutputRecord, Point};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] tmsv_metrology::Error),
    #[error("{0} validation checks failed")]
    Validation(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 1 for failed validation or I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Model(tmsv_metrology::Error::Domain(_)) => 2,
            _ => 1,
        }
    }
}

pub fn write_rows<T: Serialize>(rows: &[T], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn emit<T: Serialize>(rows: &[T], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => write_rows(rows, format, &mut BufWriter::new(File::create(p)?)),
        None => write_rows(rows, format, &mut io::stdout().lock()),
    }
}

fn single(a: &PointArgs) -> Result<Vec<OutputRecord>, CliError> {
    let point = Point { n: a.probe.require()?, losses: a.loss.resolve()?, phi: a.phi, total: a.total };
    Ok(vec![point.evaluate()?])
}

fn optimize(a: &OptimizeArgs) -> Result<Vec<OutputRecord>, CliError> {
    let losses = a.loss.resolve()?;
    let n = match (a.probe.photons(), a.total) {
        (Some(n), _) => n,
        (None, Some(total)) => {
            let (report, opt) = optimize_budget(total, losses.eta1, losses.eta2)?;
            if !opt.interior {
                eprintln!("warning: no interior optimum; n = {} lies on the grid boundary", opt.n_opt);
            }
            report.n
        }
        (None, None) => return Err(CliError::Usage("optimize needs --n/--r or --N".into())),
    };
    Ok(vec![Point { n, losses, phi: None, total: a.total }.evaluate()?])
}

fn sweep(a: &SweepArgs) -> Result<Vec<OutputRecord>, CliError> {
    if !(a.lo < a.hi) || a.points < 2 {
        return Err(CliError::Usage("sweep needs --lo < --hi and --points >= 2".into()));
    }
    let values = linear_grid(a.lo, a.hi, a.points);
    let losses = a.loss.resolve()?;
    let base = Point { n: a.probe.photons().unwrap_or(f64::NAN), losses, phi: a.phi, total: a.total };
    let points: Vec<Point> = match a.var {
        SweepVar::N => values.iter().map(|&n| Point { n, ..base }).collect(),
        SweepVar::Eta => {
            let n = a.probe.require()?;
            values
                .iter()
                .map(|&eta| Ok(Point { n, losses: Losses::from_model(eta, losses.model)?, ..base }))
                .collect::<Result<_, CliError>>()?
        }
        SweepVar::Phi => {
            a.probe.require()?;
            values.iter().map(|&phi| Point { phi: Some(phi), ..base }).collect()
        }
    };
    evaluate_all(&points)
}

/// Executes one parsed invocation.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (format, out) = (cli.output.format, cli.output.out.as_deref());
    let rows = match &cli.command {
        Command::Qfi(a) | Command::Parity(a) => single(a)?,
        Command::Optimize(a) => optimize(a)?,
        Command::Figure(a) => figure::figure(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Validate(a) => {
            if a.grid == 0 {
                return Err(CliError::Usage("--grid must be positive".into()));
            }
            let reports = validate::validate(a.grid, a.seed);
            emit(&reports, format, out)?;
            let failed = reports.iter().filter(|r| !r.passed).count();
            return if failed == 0 { Ok(()) } else { Err(CliError::Validation(failed)) };
        }
    };
    emit(&rows, format, out)
}
