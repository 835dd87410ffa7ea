//! Quantum Fisher information of the lossy interferometer: the closed form,
//! its loss-model specializations, and an independent route through the Bures
//! fidelity of neighbouring Gaussian states.

use num_complex::Complex64;

use crate::config::{check_photons, LossModel, LossyMziConfig};
use crate::error::{domain, Error, Result};
use crate::linalg::{eigenvalues, expm, CMatrix};
use crate::symplectic::{
    exponent_from_covariance, lossy_tmsv_covariance, williamson, GaussianExponent,
};

/// Default base step of [`qfi_fidelity`].
pub const DEFAULT_FIDELITY_STEP: f64 = 1e-2;
/// Admissible fidelity excursion outside `[0, 1]` before it is treated as an error.
pub const FIDELITY_TOL: f64 = 1e-8;

const STEP_RANGE: (f64, f64) = (1e-5, 1e-2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QfiMethod {
    Closed,
    Fidelity,
    Fock,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiResult {
    pub f_q: f64,
    /// `1/√F_Q`; infinite when no phase information survives.
    pub quantum_limit: f64,
    pub method: QfiMethod,
}

impl QfiResult {
    pub fn new(f_q: f64, method: QfiMethod) -> Self {
        Self { f_q, quantum_limit: 1.0 / f_q.sqrt(), method }
    }
}

/// The constant `Σ = ⊕ [[0, 1], [−1, 0]]` in the ladder basis; `Σ² = −I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticFormSigma {
    matrix: CMatrix,
}

impl SymplecticFormSigma {
    pub fn new(modes: usize) -> Self {
        Self { matrix: sigma(modes) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> CMatrix {
        -&self.matrix
    }
}

pub fn sigma(modes: usize) -> CMatrix {
    crate::linalg::to_complex(&crate::linalg::omega(modes))
}

fn closed_form(n: f64, eta1: f64, eta2: f64) -> f64 {
    2.0 * n * (n + 2.0) * eta1 * eta2 / (2.0 + n * (eta1 + eta2 - 2.0 * eta1 * eta2))
}

pub fn qfi_closed(cfg: &LossyMziConfig) -> QfiResult {
    QfiResult::new(closed_form(cfg.n, cfg.eta1, cfg.eta2), QfiMethod::Closed)
}

/// Equal transmissivity `eta` in both arms: `n(n+2)η² / (1 + n(1−η)η)`.
pub fn qfi_equal_loss(n: f64, eta: f64) -> Result<QfiResult> {
    let cfg = LossyMziConfig::with_model(n, eta, LossModel::TwoArm, 0.0)?;
    Ok(qfi_closed(&cfg))
}

/// Loss only in the phase arm: `2ηn(n+2) / (n(1−η) + 2)`.
pub fn qfi_one_arm(n: f64, eta: f64) -> Result<QfiResult> {
    let cfg = LossyMziConfig::with_model(n, eta, LossModel::OneArm, 0.0)?;
    Ok(qfi_closed(&cfg))
}

/// Positive halves `β` of the paired spectrum `±β` of `NΣ⁻¹`.
fn thermal_betas(e: &GaussianExponent, sigma_inv: &CMatrix) -> Result<Vec<f64>> {
    let spectrum = eigenvalues(&(e.matrix() * sigma_inv))?;
    let mut betas: Vec<f64> = spectrum.iter().map(|z| z.re).filter(|&b| b > 0.0).collect();
    if betas.len() != e.mode_count() {
        return Err(Error::DegenerateSpectrum("spectrum of NΣ⁻¹ is not paired as ±β".into()));
    }
    betas.sort_by(|a, b| b.total_cmp(a));
    Ok(betas)
}

/// Root fidelity `Tr √(√ρ1 ρ2 √ρ1)` of two strictly mixed Gaussian states given by
/// their exponents.
///
/// With `X_k = exp(−N_k Σ⁻¹)` the squared fidelity is
/// `|det(X1 − I) det(X2 − I)|^½ / det(√(X1^½ X2 X1^½) − I)`. Every factor is
/// evaluated from eigenvalues: `X_k` has the spectrum `e^{±β}` so
/// `|det(X_k − I)|^½ = Π 2 sinh(β/2)`, and `X1^½ X2 X1^½` is similar to `X1 X2`
/// whose eigenvalues pair as `(y, 1/y)`, giving one factor `√y + 1/√y − 2` per
/// mode (the sign `(−1)^m` of the determinant cancels against the modulus in the
/// numerator). Only the large member of each pair is used; the small one is
/// dominated by rounding for nearly pure states.
pub fn bures_fidelity(n1: &GaussianExponent, n2: &GaussianExponent) -> Result<f64> {
    let modes = n1.mode_count();
    if n2.mode_count() != modes {
        return Err(Error::Contract(format!(
            "exponents act on {modes} and {} modes",
            n2.mode_count()
        )));
    }
    let sigma_inv = SymplecticFormSigma::new(modes).inverse();
    let log_num: f64 = [n1, n2]
        .iter()
        .map(|e| thermal_betas(e, &sigma_inv))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .flatten()
        .map(|&b| (2.0 * (0.5 * b).sinh()).ln())
        .sum();

    let x1 = expm(&-(n1.matrix() * &sigma_inv));
    let x2 = expm(&-(n2.matrix() * &sigma_inv));
    let mut ys = eigenvalues(&(x1 * x2))?;
    ys.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let den: Complex64 = ys[..modes]
        .iter()
        .map(|y| {
            let s = y.sqrt();
            s + 1.0 / s - 2.0
        })
        .product();
    if den.norm() == 0.0 || !den.is_finite() {
        return Err(Error::DegenerateSpectrum("fidelity denominator vanished".into()));
    }
    let f_sq = Complex64::from(log_num.exp()) / den;
    if f_sq.im.abs() > FIDELITY_TOL * f_sq.norm().max(1.0) {
        return Err(Error::Internal(format!("fidelity has imaginary residue {:e}", f_sq.im)));
    }
    let f = f_sq.re.max(0.0).sqrt();
    if f > 1.0 + FIDELITY_TOL || f_sq.re < -FIDELITY_TOL {
        return Err(Error::FidelityOutOfRange { value: f });
    }
    Ok(f.min(1.0))
}

fn state_exponent(cfg: &LossyMziConfig, phi: f64) -> Result<GaussianExponent> {
    let gamma = lossy_tmsv_covariance(cfg.squeezing(), cfg.eta1, cfg.eta2, phi)?;
    exponent_from_covariance(&williamson(&gamma)?)
}

fn fidelity_estimate(cfg: &LossyMziConfig, e0: &GaussianExponent, h: f64) -> Result<f64> {
    let f = bures_fidelity(e0, &state_exponent(cfg, cfg.phi + h)?)?;
    Ok(8.0 * (1.0 - f) / (h * h))
}

/// QFI from the decay of the fidelity between `ρ_φ` and `ρ_{φ+dφ}`,
/// `F_Q ≈ 8(1 − F)/dφ²`, Richardson-extrapolated over the steps `dphi` and `dphi/2`.
///
/// Fails for lossless arms, whose output has a pure mode with no finite exponent.
pub fn qfi_fidelity(cfg: &LossyMziConfig, dphi: f64) -> Result<QfiResult> {
    if !(STEP_RANGE.0..=STEP_RANGE.1).contains(&dphi) {
        return domain(format!(
            "fidelity step {dphi:e} outside [{:e}, {:e}]",
            STEP_RANGE.0, STEP_RANGE.1
        ));
    }
    if cfg.n == 0.0 {
        return Ok(QfiResult::new(0.0, QfiMethod::Fidelity));
    }
    if cfg.eta1 >= 1.0 || cfg.eta2 >= 1.0 {
        return domain("the fidelity route needs eta1, eta2 < 1; use qfi_closed for lossless arms");
    }
    let e0 = state_exponent(cfg, cfg.phi)?;
    let coarse = fidelity_estimate(cfg, &e0, dphi)?;
    let fine = fidelity_estimate(cfg, &e0, 0.5 * dphi)?;
    let f_q = (4.0 * fine - coarse) / 3.0;
    Ok(QfiResult::new(f_q.max(0.0), QfiMethod::Fidelity))
}

/// Precision benchmarks for `n` photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceLimits {
    /// `1/√n`
    pub sql: f64,
    /// `1/√(n(n+2))`, the lossless TMSV limit.
    pub modified_hl: f64,
    /// Coherent-state limit under the same loss.
    pub classical: f64,
}

pub fn reference_limits(n: f64, eta: f64, model: LossModel) -> Result<ReferenceLimits> {
    check_photons(n)?;
    if n == 0.0 {
        return domain("reference limits need n > 0");
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return domain(format!("transmissivity {eta} must lie in (0, 1]"));
    }
    let classical = match model {
        LossModel::TwoArm => 1.0 / (n * eta).sqrt(),
        LossModel::OneArm => (1.0 + eta.sqrt()) / (2.0 * (n * eta).sqrt()),
        LossModel::General => {
            return domain("classical limits are defined for the two-arm and one-arm models")
        }
    };
    Ok(ReferenceLimits { sql: 1.0 / n.sqrt(), modified_hl: 1.0 / (n * (n + 2.0)).sqrt(), classical })
}
