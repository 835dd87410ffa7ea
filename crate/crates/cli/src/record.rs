use rayon::prelude::*;
use serde::{Serialize, Serializer};
use tmsv_metrology::optimizer::optimal_phase;
use tmsv_metrology::parity::{delta_phi, parity_expectation_closed};
use tmsv_metrology::qfi::{qfi_closed, reference_limits};
use tmsv_metrology::{LossModel, LossyMziConfig};

use crate::args::Losses;
use crate::CliError;

pub(crate) fn real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("inf")
    }
}

fn optional<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => real(x, s),
        None => s.serialize_str("na"),
    }
}

pub fn model_name(model: LossModel) -> &'static str {
    match model {
        LossModel::TwoArm => "two-arm",
        LossModel::OneArm => "one-arm",
        LossModel::General => "general",
    }
}

/// One evaluated configuration.
///
/// Single-shot columns refer to one probe with `n` photons; `*_repeated` columns and
/// the reference limits `sql`, `modified_hl`, `classical_limit` refer to the whole
/// budget `total_photons` spent in `repetitions = total_photons / n` shots.
/// `classical_limit` is `na` for general losses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub model: &'static str,
    #[serde(serialize_with = "real")]
    pub n: f64,
    #[serde(serialize_with = "real")]
    pub r: f64,
    #[serde(serialize_with = "real")]
    pub eta1: f64,
    #[serde(serialize_with = "real")]
    pub eta2: f64,
    #[serde(serialize_with = "real")]
    pub phi: f64,
    #[serde(serialize_with = "real")]
    pub total_photons: f64,
    #[serde(serialize_with = "real")]
    pub repetitions: f64,
    #[serde(serialize_with = "real")]
    pub f_q: f64,
    #[serde(serialize_with = "real")]
    pub quantum_limit: f64,
    #[serde(serialize_with = "real")]
    pub quantum_limit_repeated: f64,
    #[serde(serialize_with = "real")]
    pub delta_phi: f64,
    #[serde(serialize_with = "real")]
    pub delta_phi_repeated: f64,
    #[serde(serialize_with = "real")]
    pub phi_opt: f64,
    #[serde(serialize_with = "real")]
    pub parity_expectation: f64,
    #[serde(serialize_with = "real")]
    pub sql: f64,
    #[serde(serialize_with = "real")]
    pub modified_hl: f64,
    #[serde(serialize_with = "optional")]
    pub classical_limit: Option<f64>,
}

/// Inputs of one record; `phi = None` evaluates at the optimal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub n: f64,
    pub losses: Losses,
    pub phi: Option<f64>,
    pub total: Option<f64>,
}

impl Point {
    pub fn evaluate(&self) -> Result<OutputRecord, CliError> {
        let Losses { eta1, eta2, model } = self.losses;
        let n = self.n;
        if !(n > 0.0) {
            return Err(CliError::Usage(format!("photon number must be positive, got {n}")));
        }
        let total = self.total.unwrap_or(n);
        if !(total >= n && total.is_finite()) {
            return Err(CliError::Usage(format!("budget N = {total} must be finite and at least n = {n}")));
        }
        let cfg = LossyMziConfig::new(n, eta1, eta2, 0.0)?;
        let phi_opt = optimal_phase(n, eta1, eta2)?;
        let phi = self.phi.unwrap_or(phi_opt);
        let cfg = cfg.with_phi(phi);
        let q = qfi_closed(&cfg);
        let repetitions = total / n;
        let single = delta_phi(n, eta1, eta2, phi);
        let classical = match model {
            LossModel::General => None,
            _ if eta1 == 0.0 => Some(f64::INFINITY),
            m => Some(reference_limits(total, eta1, m)?.classical),
        };
        Ok(OutputRecord {
            model: model_name(model),
            n,
            r: cfg.squeezing(),
            eta1,
            eta2,
            phi,
            total_photons: total,
            repetitions,
            f_q: q.f_q,
            quantum_limit: q.quantum_limit,
            quantum_limit_repeated: q.quantum_limit / repetitions.sqrt(),
            delta_phi: single,
            delta_phi_repeated: single / repetitions.sqrt(),
            phi_opt,
            parity_expectation: parity_expectation_closed(&cfg).expectation,
            sql: 1.0 / total.sqrt(),
            modified_hl: 1.0 / (repetitions * n * (n + 2.0)).sqrt(),
            classical_limit: classical,
        })
    }
}

/// Evaluates in parallel, keeping the input order.
pub fn evaluate_all(points: &[Point]) -> Result<Vec<OutputRecord>, CliError> {
    points.par_iter().map(Point::evaluate).collect()
}
