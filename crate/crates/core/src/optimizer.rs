//! Operating-point and resource optimization for parity detection.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::config::{check_eta, check_photons, LossModel, LossyMziConfig};
use crate::error::{domain, Result};
use crate::parity::delta_phi;
use crate::qfi::{qfi_closed, reference_limits};

pub const PHASE_SCAN_POINTS: usize = 512;
/// Distance kept from `0` and `π/2`, where the lossy estimator diverges.
pub const PHASE_GUARD: f64 = 1e-6;
pub const PHASE_TOL: f64 = 1e-10;
pub const PHOTON_GRID_POINTS: usize = 200;
pub const PHOTON_GRID_MIN: f64 = 0.1;
const BISECTION_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[a, b]` by golden-section search down to a bracket of width `tol`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty scan")
}

/// Scan grid of [`optimal_phase`] with `points` nodes on `[PHASE_GUARD, π/2 − PHASE_GUARD]`.
pub fn phase_grid(points: usize) -> Vec<f64> {
    let (lo, hi) = (PHASE_GUARD, FRAC_PI_2 - PHASE_GUARD);
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

/// [`optimal_phase`] with a configurable scan resolution.
pub fn optimal_phase_with(n: f64, eta1: f64, eta2: f64, points: usize) -> Result<f64> {
    check_photons(n)?;
    check_eta("eta1", eta1)?;
    check_eta("eta2", eta2)?;
    if n == 0.0 {
        return domain("the parity signal is flat at n = 0; no optimal phase exists");
    }
    if eta1 == 1.0 && eta2 == 1.0 {
        return Ok(FRAC_PI_2);
    }
    let grid = phase_grid(points.max(3));
    let values: Vec<f64> = grid.iter().map(|&p| delta_phi(n, eta1, eta2, p)).collect();
    let i = argmin(&values);
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let refined = golden_section(|p| delta_phi(n, eta1, eta2, p), lo, hi, PHASE_TOL);
    Ok(if delta_phi(n, eta1, eta2, refined) <= values[i] { refined } else { grid[i] })
}

/// Phase `φ_o ∈ (0, π/2)` minimizing the parity error `Δφ`; `π/2` without loss.
pub fn optimal_phase(n: f64, eta1: f64, eta2: f64) -> Result<f64> {
    optimal_phase_with(n, eta1, eta2, PHASE_SCAN_POINTS)
}

/// Precision of `N/n` repetitions of an `n`-photon parity measurement at `φ_o`.
///
/// The benchmarks refer to the whole budget: `sql = 1/√N`,
/// `modified_hl = 1/√(ν n(n+2))` and the classical limit for `N` photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionReport {
    pub n: f64,
    pub total_photons: f64,
    pub repetitions: f64,
    pub f_q: f64,
    /// `1/√(ν F_Q)`
    pub quantum_limit: f64,
    pub delta_phi_single: f64,
    pub delta_phi_repeated: f64,
    pub phi_opt: f64,
    pub n_opt: Option<f64>,
    pub sql: f64,
    pub modified_hl: f64,
    /// Present for the two-arm and one-arm loss patterns.
    pub classical: Option<f64>,
}

/// Recognizes equal losses or loss in arm 1 only.
pub fn classify(eta1: f64, eta2: f64) -> (LossModel, f64) {
    if eta2 == 1.0 {
        (LossModel::OneArm, eta1)
    } else if eta1 == eta2 {
        (LossModel::TwoArm, eta1)
    } else {
        (LossModel::General, eta1)
    }
}

/// `δφ = Δφ(φ_o)/√(N/n)`.
pub fn repeated_error(n: f64, eta1: f64, eta2: f64, total: f64) -> Result<PrecisionReport> {
    if !(n > 0.0) || !total.is_finite() || n > total {
        return domain(format!("need 0 < n <= N, got n = {n}, N = {total}"));
    }
    let phi = optimal_phase(n, eta1, eta2)?;
    let cfg = LossyMziConfig::new(n, eta1, eta2, phi)?;
    let f_q = qfi_closed(&cfg).f_q;
    let repetitions = total / n;
    let single = delta_phi(n, eta1, eta2, phi);
    let (model, eta) = classify(eta1, eta2);
    let classical = if eta > 0.0 {
        reference_limits(total, eta, model).ok().map(|l| l.classical)
    } else {
        None
    };
    Ok(PrecisionReport {
        n,
        total_photons: total,
        repetitions,
        f_q,
        quantum_limit: 1.0 / (repetitions * f_q).sqrt(),
        delta_phi_single: single,
        delta_phi_repeated: single / repetitions.sqrt(),
        phi_opt: phi,
        n_opt: None,
        sql: 1.0 / total.sqrt(),
        modified_hl: 1.0 / (repetitions * n * (n + 2.0)).sqrt(),
        classical,
    })
}

/// Result of [`optimal_photon_number`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonOptimum {
    pub n_opt: f64,
    pub delta_phi_repeated: f64,
    /// False when the minimum sits on the grid boundary.
    pub interior: bool,
}

/// `points` log-spaced photon numbers in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> =
        (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect();
    grid[0] = lo;
    grid[points - 1] = hi;
    grid
}

fn repeated_objective(n: f64, eta1: f64, eta2: f64, total: f64) -> f64 {
    repeated_error(n, eta1, eta2, total).map_or(f64::INFINITY, |r| r.delta_phi_repeated)
}

/// Photon number per shot minimizing `δφ` for a budget of `total` photons.
///
/// Uses `n_grid` if given, else [`PHOTON_GRID_POINTS`] log-spaced points in
/// `[PHOTON_GRID_MIN, total]`, then refines between the neighbours of the best node.
pub fn optimal_photon_number(
    total: f64,
    eta1: f64,
    eta2: f64,
    n_grid: Option<&[f64]>,
) -> Result<PhotonOptimum> {
    check_eta("eta1", eta1)?;
    check_eta("eta2", eta2)?;
    if !(total.is_finite() && total >= PHOTON_GRID_MIN) {
        return domain(format!("photon budget N = {total} must be at least {PHOTON_GRID_MIN}"));
    }
    let default;
    let grid = match n_grid {
        Some(g) => {
            if g.len() < 3 || g.iter().any(|&n| !(n > 0.0 && n <= total)) {
                return domain("photon grid needs at least 3 points inside (0, N]");
            }
            g
        }
        None => {
            default = log_grid(PHOTON_GRID_MIN, total, PHOTON_GRID_POINTS);
            &default[..]
        }
    };
    let values: Vec<f64> =
        grid.par_iter().map(|&n| repeated_objective(n, eta1, eta2, total)).collect();
    let i = argmin(&values);
    if i == 0 || i == grid.len() - 1 {
        return Ok(PhotonOptimum { n_opt: grid[i], delta_phi_repeated: values[i], interior: false });
    }
    let f = |ln_n: f64| repeated_objective(ln_n.exp(), eta1, eta2, total);
    let refined = golden_section(f, grid[i - 1].ln(), grid[i + 1].ln(), 1e-8).exp();
    let value = repeated_objective(refined, eta1, eta2, total);
    Ok(if value <= values[i] {
        PhotonOptimum { n_opt: refined, delta_phi_repeated: value, interior: true }
    } else {
        PhotonOptimum { n_opt: grid[i], delta_phi_repeated: values[i], interior: true }
    })
}

/// Full report at the optimal per-shot photon number for a budget of `total`.
pub fn optimize_budget(total: f64, eta1: f64, eta2: f64) -> Result<(PrecisionReport, PhotonOptimum)> {
    let opt = optimal_photon_number(total, eta1, eta2, None)?;
    let mut report = repeated_error(opt.n_opt, eta1, eta2, total)?;
    report.n_opt = Some(opt.n_opt);
    Ok((report, opt))
}

/// Repeated parity measurement at a shifted operating point.
///
/// The unknown phase is first located near `center_estimate`; adding the
/// predetection shift `φ_o − φ̃` moves it to the optimal point. The shift is a
/// known constant, so the error on `φ` equals the error on the shifted phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPlan {
    pub total_photons: f64,
    pub repetitions: f64,
    pub center_estimate: f64,
    pub phi_opt: f64,
    pub predetection_shift: f64,
    pub report: PrecisionReport,
}

impl MeasurementPlan {
    pub fn new(n: f64, eta1: f64, eta2: f64, total: f64, center_estimate: f64) -> Result<Self> {
        if !center_estimate.is_finite() {
            return domain("center estimate must be finite");
        }
        let report = repeated_error(n, eta1, eta2, total)?;
        Ok(Self {
            total_photons: total,
            repetitions: report.repetitions,
            center_estimate,
            phi_opt: report.phi_opt,
            predetection_shift: report.phi_opt - center_estimate,
            report,
        })
    }

    /// Error on the unknown phase itself.
    pub fn phase_error(&self) -> f64 {
        self.report.delta_phi_repeated
    }
}

/// Smallest transmissivity at which `1/√F_Q` beats the SQL `1/√n` for `model`.
pub fn quantum_advantage_region(n: f64, model: LossModel) -> Result<f64> {
    check_photons(n)?;
    if n == 0.0 {
        return domain("quantum advantage needs n > 0");
    }
    let beats = |eta: f64| -> Result<bool> {
        let cfg = LossyMziConfig::with_model(n, eta, model, 0.0)?;
        Ok(qfi_closed(&cfg).f_q > n)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    beats(hi)?;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if beats(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
