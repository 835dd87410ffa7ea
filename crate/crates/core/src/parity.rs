//! Parity detection on the first output port.
//!
//! The expectation `⟨Π⟩` is available in closed form and independently as the
//! vacuum amplitude `1/√det C` of the composite operator
//! `U_all = S† U_MZI† Π U_MZI S` acting on the arm and environment vacua. Each
//! factor is represented by its action on `Λ = (e1†, e2†, a1†, a2†, e1, e2, a1, a2)`,
//! `U Λᵀ U⁻¹ = Λᵀ M(U)`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::config::{check_eta, LossyMziConfig};
use crate::error::{domain, Error, Result};
use crate::linalg::{c, CMatrix, I};

/// Below this `|det C|` the vacuum amplitude is treated as undefined.
pub const SINGULAR_BLOCK_TOL: f64 = 1e-12;
/// Largest imaginary part tolerated once the global phase has been removed.
pub const PHASE_RESIDUE_TOL: f64 = 1e-8;
/// `|sin 2φ|` below which the lossy estimator is reported as divergent.
pub const DIVERGENCE_TOL: f64 = 1e-9;

const DIM: usize = 8;

/// Representation of an exponential quadratic operator on the four modes
/// `(e1, e2, a1, a2)`, laid out as `[[A, D], [B, C]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticOpMatrix {
    m: CMatrix,
}

impl QuadraticOpMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != DIM || m.ncols() != DIM {
            return Err(Error::Contract(format!(
                "representation must be {DIM}x{DIM}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: CMatrix::identity(DIM, DIM) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    fn block(&self, row: usize, col: usize) -> CMatrix {
        self.m.view((row, col), (DIM / 2, DIM / 2)).into_owned()
    }

    pub fn a(&self) -> CMatrix {
        self.block(0, 0)
    }

    pub fn d(&self) -> CMatrix {
        self.block(0, DIM / 2)
    }

    pub fn b(&self) -> CMatrix {
        self.block(DIM / 2, 0)
    }

    pub fn c(&self) -> CMatrix {
        self.block(DIM / 2, DIM / 2)
    }

    /// Representation of the product `self · other` of the underlying operators.
    pub fn compose(&self, other: &QuadraticOpMatrix) -> Self {
        Self { m: &self.m * &other.m }
    }

    /// Representation of `U⁻¹`, which is `U†` for the unitary factors used here.
    pub fn inverse(&self) -> Result<Self> {
        self.m
            .clone()
            .try_inverse()
            .map(|m| Self { m })
            .ok_or_else(|| Error::Internal("operator representation is singular".into()))
    }

    /// `max |M† G M − G|` with `G = diag(I, −I)`; zero for Bogoliubov transformations.
    pub fn metric_defect(&self) -> f64 {
        let mut g = CMatrix::identity(DIM, DIM);
        for k in DIM / 2..DIM {
            g[(k, k)] = c(-1.0);
        }
        (self.m.adjoint() * &g * &self.m - g).camax()
    }
}

/// The five factors of the parity readout.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityComponents {
    pub parity: QuadraticOpMatrix,
    pub squeeze: QuadraticOpMatrix,
    pub phase: QuadraticOpMatrix,
    pub beam_splitter: QuadraticOpMatrix,
    pub loss: QuadraticOpMatrix,
}

fn parity_matrix() -> CMatrix {
    let mut m = CMatrix::identity(DIM, DIM);
    m[(2, 2)] = c(-1.0);
    m[(6, 6)] = c(-1.0);
    m
}

fn squeeze_matrix(r: f64) -> CMatrix {
    let (ch, sh) = (c(r.cosh()), c(-r.sinh()));
    let mut m = CMatrix::identity(DIM, DIM);
    for k in [2, 3, 6, 7] {
        m[(k, k)] = ch;
    }
    for (i, j) in [(2, 7), (3, 6), (6, 3), (7, 2)] {
        m[(i, j)] = sh;
    }
    m
}

fn phase_matrix(phi: f64) -> CMatrix {
    let mut m = CMatrix::identity(DIM, DIM);
    m[(2, 2)] = Complex64::from_polar(1.0, -phi);
    m[(6, 6)] = Complex64::from_polar(1.0, phi);
    m
}

fn beam_splitter_matrix() -> CMatrix {
    let (d, x) = (c(FRAC_1_SQRT_2), I * FRAC_1_SQRT_2);
    let mut m = CMatrix::identity(DIM, DIM);
    for k in [2, 3, 6, 7] {
        m[(k, k)] = d;
    }
    m[(2, 3)] = x;
    m[(3, 2)] = x;
    m[(6, 7)] = -x;
    m[(7, 6)] = -x;
    m
}

fn loss_matrix(eta1: f64, eta2: f64) -> CMatrix {
    let mut m = CMatrix::zeros(DIM, DIM);
    for (i, eta) in [eta1, eta2].into_iter().enumerate() {
        let theta = eta.sqrt().acos();
        let (cs, sn) = (c(theta.cos()), I * theta.sin());
        m[(i, i)] = cs;
        m[(i, i + 2)] = sn;
        m[(i + 2, i)] = sn;
        m[(i + 2, i + 2)] = cs;
        m[(i + 4, i + 4)] = cs;
        m[(i + 4, i + 6)] = -sn;
        m[(i + 6, i + 4)] = -sn;
        m[(i + 6, i + 6)] = cs;
    }
    m
}

pub fn build_component_matrices(eta1: f64, eta2: f64, phi: f64, r: f64) -> Result<ParityComponents> {
    check_eta("eta1", eta1)?;
    check_eta("eta2", eta2)?;
    if !(r.is_finite() && r >= 0.0) || !phi.is_finite() {
        return domain(format!("need finite r >= 0 and finite phi, got r = {r}, phi = {phi}"));
    }
    Ok(ParityComponents {
        parity: QuadraticOpMatrix { m: parity_matrix() },
        squeeze: QuadraticOpMatrix { m: squeeze_matrix(r) },
        phase: QuadraticOpMatrix { m: phase_matrix(phi) },
        beam_splitter: QuadraticOpMatrix { m: beam_splitter_matrix() },
        loss: QuadraticOpMatrix { m: loss_matrix(eta1, eta2) },
    })
}

/// `M(U_all) = M(S†) M(U_MZI†) M(Π) M(U_MZI) M(S)` with
/// `M(U_MZI) = M(BS) M(loss) M(φ) M(BS)`.
pub fn compose_u_all(p: &ParityComponents) -> Result<QuadraticOpMatrix> {
    let mzi = p.beam_splitter.compose(&p.loss).compose(&p.phase).compose(&p.beam_splitter);
    Ok(p.squeeze
        .inverse()?
        .compose(&mzi.inverse()?)
        .compose(&p.parity)
        .compose(&mzi)
        .compose(&p.squeeze))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityResult {
    pub expectation: f64,
    /// `Δφ²`; infinite where the estimator diverges.
    pub variance_phase: f64,
    pub omega: f64,
}

pub fn omega(cfg: &LossyMziConfig) -> f64 {
    let (n, e1, e2) = (cfg.n, cfg.eta1, cfg.eta2);
    2.0 * e1 * e2 * (n + 2.0) * cfg.phi.cos().powi(2) + (e1 + e2) * (2.0 - e1 - e2)
}

fn result(cfg: &LossyMziConfig, expectation: f64) -> ParityResult {
    let variance_phase = phase_variance_value(cfg).unwrap_or(f64::INFINITY);
    ParityResult { expectation, variance_phase, omega: omega(cfg) }
}

/// `⟨Π⟩ = √(2/(nω + 2))`.
pub fn parity_expectation_closed(cfg: &LossyMziConfig) -> ParityResult {
    result(cfg, (2.0 / (cfg.n * omega(cfg) + 2.0)).sqrt())
}

/// `1/√det C` of `M(U_all)` with the global phase removed.
///
/// The phase is fixed by the bare parity operator, whose `C` block yields
/// `⟨0|Π|0⟩ = 1` up to the same global phase.
pub fn parity_expectation_matrix(cfg: &LossyMziConfig) -> Result<ParityResult> {
    let p = build_component_matrices(cfg.eta1, cfg.eta2, cfg.phi, cfg.squeezing())?;
    let det = compose_u_all(&p)?.c().determinant();
    if det.norm() < SINGULAR_BLOCK_TOL {
        return Err(Error::SingularBlock(det.norm()));
    }
    // ⟨Π⟩² = det C_Π / det C_all, free of the branch of either square root.
    let z = p.parity.c().determinant() / det;
    if z.im.abs() > PHASE_RESIDUE_TOL || z.re <= 0.0 {
        return Err(Error::Internal(format!("squared vacuum amplitude {z} is not real and positive")));
    }
    Ok(result(cfg, z.norm().sqrt()))
}

/// Lossless expectation `1/√(1 + n(n+2)cos²φ)`.
pub fn ideal_expectation(n: f64, phi: f64) -> f64 {
    1.0 / (1.0 + n * (n + 2.0) * phi.cos().powi(2)).sqrt()
}

/// Lossless error `(1 + n(n+2)cos²φ) / (|sin φ| √(n(n+2)))`.
pub fn ideal_delta_phi(n: f64, phi: f64) -> f64 {
    let nn = n * (n + 2.0);
    (1.0 + nn * phi.cos().powi(2)) / (phi.sin().abs() * nn.sqrt())
}

fn phase_variance_value(cfg: &LossyMziConfig) -> Result<f64> {
    let n = cfg.n;
    if !(n > 0.0) {
        return domain("phase variance needs n > 0");
    }
    if cfg.is_lossless() {
        let d = ideal_delta_phi(n, cfg.phi);
        if !d.is_finite() {
            return Err(Error::DivergentEstimator(cfg.phi.sin().abs()));
        }
        return Ok(d * d);
    }
    let s2 = (2.0 * cfg.phi).sin();
    if s2.abs() < DIVERGENCE_TOL {
        return Err(Error::DivergentEstimator(s2.abs()));
    }
    let w = omega(cfg);
    let (e1, e2) = (cfg.eta1, cfg.eta2);
    Ok(w * (n * w + 2.0).powi(2)
        / (2.0 * (e1 * e2).powi(2) * n * (n + 2.0).powi(2) * s2 * s2))
}

/// `Δφ² = ω(nω+2)² / (2η1²η2² n(n+2)² sin²2φ)` from error propagation with `⟨Π²⟩ = 1`.
/// Without loss this equals the ideal form, which stays finite at `φ = π/2`.
pub fn phase_variance(cfg: &LossyMziConfig) -> Result<ParityResult> {
    let variance_phase = phase_variance_value(cfg)?;
    Ok(ParityResult {
        expectation: parity_expectation_closed(cfg).expectation,
        variance_phase,
        omega: omega(cfg),
    })
}

/// `Δφ` as a plain objective: infinite where the estimator diverges.
pub fn delta_phi(n: f64, eta1: f64, eta2: f64, phi: f64) -> f64 {
    LossyMziConfig::new(n, eta1, eta2, phi)
        .and_then(|cfg| phase_variance_value(&cfg))
        .map_or(f64::INFINITY, f64::sqrt)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn cfg(n: f64, e1: f64, e2: f64, phi: f64) -> LossyMziConfig {
        LossyMziConfig::new(n, e1, e2, phi).unwrap()
    }

    #[test]
    fn trivial_components() {
        let p = build_component_matrices(1.0, 1.0, 0.0, 0.0).unwrap();
        let id = QuadraticOpMatrix::identity();
        assert!((p.loss.matrix() - id.matrix()).camax() < 1e-15);
        assert!((p.phase.matrix() - id.matrix()).camax() < 1e-15);
        assert!((p.squeeze.matrix() - id.matrix()).camax() < 1e-15);
        let pp = p.parity.compose(&p.parity);
        assert!((pp.matrix() - id.matrix()).camax() < 1e-15);
    }

    #[test]
    fn trivial_composition_is_parity_on_the_swapped_arm() {
        // Two balanced beam splitters exchange the arms.
        let p = build_component_matrices(1.0, 1.0, 0.0, 0.0).unwrap();
        let all = compose_u_all(&p).unwrap();
        let mut swapped = CMatrix::identity(8, 8);
        swapped[(3, 3)] = c(-1.0);
        swapped[(7, 7)] = c(-1.0);
        assert!((all.matrix() - swapped).camax() < 1e-14);
        assert!((all.c().determinant() + 1.0).norm() < 1e-14);
        assert_eq!(parity_expectation_matrix(&cfg(0.0, 1.0, 1.0, 0.0)).unwrap().expectation, 1.0);
    }

    #[test]
    fn unitary_factors_preserve_metric() {
        let p = build_component_matrices(0.3, 0.8, 0.7, 1.1).unwrap();
        for m in [&p.squeeze, &p.phase, &p.beam_splitter, &p.loss, &p.parity] {
            assert!(m.metric_defect() < 1e-10);
        }
    }

    #[test]
    fn squeeze_reduces_to_identity_as_r_vanishes() {
        let p = build_component_matrices(0.5, 0.5, 0.0, 1e-9).unwrap();
        assert!((p.squeeze.matrix() - CMatrix::identity(8, 8)).camax() < 1e-8);
    }

    #[test]
    fn matrix_route_matches_closed_form() {
        for &(n, e1, e2, phi) in
            &[(2.0, 1.0, 1.0, 0.0), (2.0, 1.0, 1.0, FRAC_PI_2), (1.0, 0.8, 1.0, 0.7), (1.3, 0.4, 0.9, 2.1)]
        {
            let c = cfg(n, e1, e2, phi);
            let m = parity_expectation_matrix(&c).unwrap().expectation;
            assert!((m - parity_expectation_closed(&c).expectation).abs() < 1e-9);
        }
        let m = parity_expectation_matrix(&cfg(2.0, 1.0, 1.0, 0.0)).unwrap().expectation;
        assert!((m - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_reductions() {
        let c = cfg(1.0, 0.8, 1.0, 0.7);
        let w = 2.0 * 0.8 * 3.0 * 0.7f64.cos().powi(2) + 1.8 * 0.2;
        assert!((omega(&c) - w).abs() < 1e-15);
        for &phi in &[0.0, 0.4, 2.0] {
            assert_eq!(parity_expectation_closed(&cfg(0.0, 0.3, 0.6, phi)).expectation, 1.0);
            let ideal = parity_expectation_closed(&cfg(3.0, 1.0, 1.0, phi)).expectation;
            assert!((ideal - ideal_expectation(3.0, phi)).abs() < 1e-12);
        }
        let (n, eta) = (2.0, 0.7);
        let v = parity_expectation_closed(&cfg(n, eta, eta, FRAC_PI_2)).expectation;
        let expected = (2.0 / (n * 2.0 * eta * (2.0 - 2.0 * eta) + 2.0)).sqrt();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn ideal_variance() {
        let r = phase_variance(&cfg(2.0, 1.0, 1.0, FRAC_PI_2)).unwrap();
        assert!((r.variance_phase.sqrt() - 1.0 / 8f64.sqrt()).abs() < 1e-12);
        assert!(matches!(phase_variance(&cfg(2.0, 1.0, 1.0, 0.0)), Err(Error::DivergentEstimator(_))));
    }

    #[test]
    fn printed_variance_equals_ideal_form_without_loss() {
        for &(n, phi) in &[(0.5, 0.3), (2.0, 1.0), (10.0, 1.4)] {
            let nn = n * (n + 2.0);
            let w = 2.0 * (n + 2.0) * f64::cos(phi).powi(2);
            let printed = w * (n * w + 2.0).powi(2) / (2.0 * n * (n + 2.0).powi(2) * (2.0 * phi).sin().powi(2));
            let ideal = ideal_delta_phi(n, phi).powi(2);
            assert!((printed / ideal - 1.0).abs() < 1e-10, "{nn}");
        }
    }

    #[test]
    fn lossy_variance_diverges_at_quarter_period() {
        assert!(matches!(phase_variance(&cfg(1.0, 0.9, 1.0, FRAC_PI_2)), Err(Error::DivergentEstimator(_))));
        assert!(delta_phi(1.0, 0.9, 1.0, FRAC_PI_2 - 1e-4) > 100.0);
        assert_eq!(delta_phi(1.0, 0.9, 1.0, 0.0), f64::INFINITY);
        assert_eq!(delta_phi(0.0, 0.9, 1.0, 0.5), f64::INFINITY);
        assert!(parity_expectation_closed(&cfg(1.0, 0.9, 1.0, 0.0)).variance_phase.is_infinite());
    }

    #[test]
    fn rejects_bad_component_inputs() {
        assert!(build_component_matrices(1.5, 1.0, 0.0, 0.0).is_err());
        assert!(build_component_matrices(1.0, 1.0, 0.0, -1.0).is_err());
        assert!(QuadraticOpMatrix::new(CMatrix::identity(4, 4)).is_err());
    }
}
