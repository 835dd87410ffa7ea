use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, to_complex, CMatrix};

use super::transform::ladder_to_quadrature;
use super::williamson::WilliamsonForm;

/// Symplectic eigenvalues at or below `1 + PURE_MODE_TOL` have no finite exponent.
pub const PURE_MODE_TOL: f64 = 1e-12;
/// Floor `1 + ε` applied by [`exponent_from_covariance_regularized`].
pub const REGULARIZATION_EPS: f64 = 1e-9;

/// Symmetric `N` of an unnormalized Gaussian density operator `exp(−½ αᵀ N α)` with
/// `α = (a1†, a1, a2†, a2, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianExponent {
    n: CMatrix,
}

/// Inverse temperature `−ln((ν − 1)/(ν + 1))` of a thermal mode with symplectic eigenvalue `ν`.
pub fn thermal_coupling(nu: f64) -> f64 {
    -((nu - 1.0) / (nu + 1.0)).ln()
}

fn check_mixed(nus: &[f64]) -> Result<()> {
    match nus.iter().find(|&&v| v <= 1.0 + PURE_MODE_TOL || !v.is_finite()) {
        Some(&value) => Err(Error::PureMode { value, tolerance: PURE_MODE_TOL }),
        None => Ok(()),
    }
}

/// Exponent `N₀` of a product of thermal modes: each mode contributes the off-diagonal
/// pair `−ln((ν − 1)/(ν + 1))` in its `(a†, a)` block.
pub fn thermal_exponent(nus: &[f64]) -> Result<GaussianExponent> {
    check_mixed(nus)?;
    let dim = 2 * nus.len();
    let mut n = CMatrix::zeros(dim, dim);
    for (k, &nu) in nus.iter().enumerate() {
        let b = thermal_coupling(nu);
        n[(2 * k, 2 * k + 1)] = b.into();
        n[(2 * k + 1, 2 * k)] = b.into();
    }
    Ok(GaussianExponent { n })
}

fn conjugate_thermal(w: &WilliamsonForm, nus: &[f64]) -> Result<GaussianExponent> {
    let n0 = thermal_exponent(nus)?.n;
    let k = ladder_to_quadrature(nus.len());
    let m_inv = to_complex(&w.congruence_inverse());
    // N = Kᵀ M⁻¹ K̄ N₀ K† M⁻ᵀ K; K is unitary, so K̄ = K⁻ᵀ and K† = K⁻¹.
    let left = k.transpose() * &m_inv * k.conjugate();
    let n = &left * n0 * left.transpose();
    Ok(GaussianExponent { n: (&n + n.transpose()).scale(0.5) })
}

/// Exponent of the state with Williamson form `w`; every mode must be strictly mixed.
pub fn exponent_from_covariance(w: &WilliamsonForm) -> Result<GaussianExponent> {
    conjugate_thermal(w, w.symplectic_eigenvalues())
}

/// As [`exponent_from_covariance`], but raises each symplectic eigenvalue to at least
/// `1 + REGULARIZATION_EPS`. Near-pure states therefore carry an ε-level bias.
pub fn exponent_from_covariance_regularized(w: &WilliamsonForm) -> GaussianExponent {
    let nus: Vec<f64> =
        w.symplectic_eigenvalues().iter().map(|&v| v.max(1.0 + REGULARIZATION_EPS)).collect();
    conjugate_thermal(w, &nus).expect("regularized spectrum is strictly mixed")
}

impl GaussianExponent {
    pub fn from_matrix(n: CMatrix) -> Result<Self> {
        let d = n.nrows();
        if d == 0 || !d.is_multiple_of(2) || n.ncols() != d {
            return Err(Error::Contract(format!("exponent must be square and even, got {d}")));
        }
        Ok(Self { n })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.n
    }

    pub fn mode_count(&self) -> usize {
        self.n.nrows() / 2
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.n - self.n.transpose()).camax()
    }

    /// Recovers the symplectic eigenvalues `coth(β/2)` from the spectrum `±β` of `NΣ⁻¹`.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let sigma_inv = -crate::qfi::sigma(self.mode_count());
        let spectrum = eigenvalues(&(&self.n * sigma_inv))?;
        let mut betas: Vec<f64> = spectrum.iter().map(|z| z.re).filter(|&b| b > 0.0).collect();
        if betas.len() != self.mode_count() {
            return Err(Error::Internal("exponent spectrum is not paired".into()));
        }
        betas.sort_by(|a, b| a.total_cmp(b));
        Ok(betas.into_iter().map(|b| 1.0 / (0.5 * b).tanh()).collect())
    }
}

impl From<GaussianExponent> for CMatrix {
    fn from(e: GaussianExponent) -> Self {
        e.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::symplectic::{lossy_tmsv_covariance, williamson, CovarianceMatrix};

    #[test]
    fn thermal_state_couplings() {
        let g = CovarianceMatrix::new(crate::linalg::RMatrix::identity(4, 4) * 3.0).unwrap();
        let w = williamson(&g).unwrap();
        let e = exponent_from_covariance(&w).unwrap();
        let b = -(0.5f64).ln();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 1)] = c(b);
        expected[(1, 0)] = c(b);
        expected[(2, 3)] = c(b);
        expected[(3, 2)] = c(b);
        assert!((e.matrix() - expected).camax() < 1e-12);
        let nus = e.symplectic_eigenvalues().unwrap();
        assert!((nus[0] - 3.0).abs() < 1e-9 && (nus[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn lossy_state_exponent_is_symmetric() {
        let g = lossy_tmsv_covariance(1.0, 0.8, 0.8, 0.2).unwrap();
        let w = williamson(&g).unwrap();
        let e = exponent_from_covariance(&w).unwrap();
        assert!(e.asymmetry() < 1e-10);
        let nus = e.symplectic_eigenvalues().unwrap();
        for (a, b) in nus.iter().zip(w.symplectic_eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_modes_are_rejected_unless_regularized() {
        let g = lossy_tmsv_covariance(1.0, 0.8, 1.0, 0.2).unwrap();
        let w = williamson(&g).unwrap();
        assert!(matches!(exponent_from_covariance(&w), Err(Error::PureMode { .. })));
        let e = exponent_from_covariance_regularized(&w);
        assert!(e.asymmetry() < 1e-8);
    }
}
