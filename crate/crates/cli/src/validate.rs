use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use tmsv_metrology::config::squeeze_parameter;
use tmsv_metrology::fock::{cutoff_for_deficit, lossy_tmsv_fock, parity_expectation_fock, qfi_fock};
use tmsv_metrology::optimizer::optimal_phase;
use tmsv_metrology::parity::{
    delta_phi, ideal_expectation, parity_expectation_closed, parity_expectation_matrix,
};
use tmsv_metrology::qfi::{qfi_closed, qfi_fidelity, DEFAULT_FIDELITY_STEP};
use tmsv_metrology::symplectic::{
    evolve_and_reduce, lossy_mzi_transform, lossy_tmsv_covariance, tmsv_covariance,
};
use tmsv_metrology::{LossyMziConfig, Result};

/// Fock-space checks are expensive; a fixed small sample keeps `validate` fast.
const ORACLE_POINTS: usize = 2;
const ORACLE_TRUNCATION: f64 = 1e-13;

/// Outcome of one cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub points: usize,
    #[serde(serialize_with = "crate::record::real")]
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    n: f64,
    eta1: f64,
    eta2: f64,
    phi: f64,
}

impl Sample {
    fn cfg(&self) -> LossyMziConfig {
        LossyMziConfig::new(self.n, self.eta1, self.eta2, self.phi).expect("sample within domain")
    }
}

fn samples(rng: &mut ChaCha8Rng, count: usize, n: (f64, f64), eta: (f64, f64)) -> Vec<Sample> {
    (0..count)
        .map(|_| Sample {
            n: rng.gen_range(n.0..=n.1),
            eta1: rng.gen_range(eta.0..=eta.1),
            eta2: rng.gen_range(eta.0..=eta.1),
            phi: rng.gen_range(0.05..=PI - 0.05),
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a / b - 1.0).abs()
    }
}

fn check(
    name: &'static str,
    grid: &[Sample],
    tolerance: f64,
    err: impl Fn(&Sample) -> Result<f64> + Sync,
) -> CheckReport {
    let errors: Vec<f64> = grid
        .par_iter()
        .map(|s| err(s).ok().filter(|e| !e.is_nan()).unwrap_or(f64::INFINITY))
        .collect();
    let max_error = errors.into_iter().fold(0.0, f64::max);
    CheckReport { check: name, points: grid.len(), max_error, tolerance, passed: max_error <= tolerance }
}

/// Runs every cross-check on `grid` random points drawn from `seed`.
pub fn validate(grid: usize, seed: u64) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wide = samples(&mut rng, grid, (0.1, 20.0), (0.3, 0.99));
    let parity = samples(&mut rng, grid, (0.0, 2.0 * 1.5f64.sinh().powi(2)), (0.2, 1.0));
    let bounds = samples(&mut rng, grid, (0.1, 100.0), (0.1, 1.0));
    let oracle = samples(&mut rng, ORACLE_POINTS, (0.2, 1.0), (0.5, 0.99));
    vec![
        check("qfi_ideal", &wide, 1e-14, |s| {
            let f = qfi_closed(&LossyMziConfig::new(s.n, 1.0, 1.0, s.phi)?).f_q;
            Ok(rel(f, s.n * (s.n + 2.0)))
        }),
        check("qfi_fidelity_route", &wide, 1e-4, |s| {
            let f = qfi_fidelity(&s.cfg(), DEFAULT_FIDELITY_STEP)?.f_q;
            Ok(rel(f, qfi_closed(&s.cfg()).f_q))
        }),
        check("covariance_evolution", &wide, 1e-10, |s| {
            let r = squeeze_parameter(s.n);
            let t = lossy_mzi_transform(s.eta1, s.eta2, s.phi)?;
            let evolved = evolve_and_reduce(&tmsv_covariance(r)?, &t)?;
            let closed = lossy_tmsv_covariance(r, s.eta1, s.eta2, s.phi)?;
            Ok((evolved.matrix() - closed.matrix()).amax())
        }),
        check("parity_determinant_route", &parity, 1e-9, |s| {
            let m = parity_expectation_matrix(&s.cfg())?.expectation;
            Ok((m - parity_expectation_closed(&s.cfg()).expectation).abs())
        }),
        check("parity_ideal", &parity, 1e-12, |s| {
            let cfg = LossyMziConfig::new(s.n, 1.0, 1.0, s.phi)?;
            Ok((parity_expectation_closed(&cfg).expectation - ideal_expectation(s.n, s.phi)).abs())
        }),
        check("cramer_rao", &bounds, 1e-12, |s| {
            let phi = optimal_phase(s.n, s.eta1, s.eta2)?;
            let bound = qfi_closed(&s.cfg()).quantum_limit;
            Ok((bound - delta_phi(s.n, s.eta1, s.eta2, phi)).max(0.0))
        }),
        check("oracle_qfi", &oracle, 1e-5, |s| {
            let r = squeeze_parameter(s.n);
            let cutoff = cutoff_for_deficit(r, ORACLE_TRUNCATION);
            Ok(rel(qfi_fock(r, s.eta1, s.eta2, s.phi, cutoff)?, qfi_closed(&s.cfg()).f_q))
        }),
        check("oracle_parity", &oracle, 1e-6, |s| {
            let cutoff = cutoff_for_deficit(squeeze_parameter(s.n), ORACLE_TRUNCATION);
            let p = parity_expectation_fock(&s.cfg(), cutoff)?;
            Ok((p - parity_expectation_closed(&s.cfg()).expectation).abs())
        }),
        check("oracle_covariance", &oracle, 1e-8, |s| {
            let r = squeeze_parameter(s.n);
            let state = lossy_tmsv_fock(r, s.eta1, s.eta2, s.phi, cutoff_for_deficit(r, ORACLE_TRUNCATION))?;
            let closed = lossy_tmsv_covariance(r, s.eta1, s.eta2, s.phi)?;
            Ok((state.covariance() - closed.matrix()).amax())
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_validation_passes() {
        let reports = validate(10, 3);
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
    }
}
