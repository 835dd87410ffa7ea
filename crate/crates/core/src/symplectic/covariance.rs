use nalgebra::SymmetricEigen;

use crate::config::check_eta;
use crate::error::{domain, Error, Result};
use crate::linalg::{asymmetry, omega, spd_sqrt, to_complex, RMatrix, I};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const BONA_FIDE_TOL: f64 = 1e-9;

/// Real symmetric matrix of quadrature second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: RMatrix,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty principle `γ + iΩ ⪰ 0`.
    pub fn new(matrix: RMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || matrix.ncols() != dim {
            return Err(Error::Contract(format!(
                "covariance must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return domain("covariance has non-finite entries");
        }
        let asym = asymmetry(&matrix);
        if asym > SYMMETRY_TOL * matrix.amax().max(1.0) {
            return domain(format!("covariance is not symmetric (defect {asym:e})"));
        }
        let nus = symplectic_eigenvalues(&matrix)?;
        if let Some(&low) = nus.last() {
            if low < 1.0 - BONA_FIDE_TOL {
                return domain(format!(
                    "covariance violates the uncertainty principle (symplectic eigenvalue {low})"
                ));
            }
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: RMatrix) -> Self {
        Self { matrix }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { matrix: RMatrix::identity(2 * modes, 2 * modes) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn modes(&self) -> usize {
        self.dim() / 2
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RMatrix {
        self.matrix
    }

    /// Symplectic eigenvalues, one per mode, in descending order.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.matrix).expect("validated covariance is positive definite")
    }

    /// `self ⊕ other`.
    pub fn direct_sum(&self, other: &CovarianceMatrix) -> CovarianceMatrix {
        let (a, b) = (self.dim(), other.dim());
        let mut m = RMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.matrix);
        m.view_mut((a, a), (b, b)).copy_from(&other.matrix);
        Self { matrix: m }
    }
}

/// Symplectic eigenvalues of a positive-definite matrix, descending.
///
/// They are the positive eigenvalues of the Hermitian matrix `i γ^½ Ω γ^½`.
pub fn symplectic_eigenvalues(m: &RMatrix) -> Result<Vec<f64>> {
    let (sq, _) = spd_sqrt(m)?;
    let a = &sq * omega(m.nrows() / 2) * &sq;
    let h = to_complex(&a) * I;
    let eig = SymmetricEigen::new(h);
    let mut nus: Vec<f64> = eig.eigenvalues.iter().copied().filter(|&x| x > 0.0).collect();
    nus.sort_by(|a, b| b.total_cmp(a));
    if nus.len() != m.nrows() / 2 {
        return Err(Error::Internal("symplectic spectrum is not paired".into()));
    }
    Ok(nus)
}

/// Two-mode squeezed vacuum with squeeze parameter `r`; mean photon number `2 sinh² r`.
pub fn tmsv_covariance(r: f64) -> Result<CovarianceMatrix> {
    if !r.is_finite() || r < 0.0 {
        return domain(format!("squeeze parameter r = {r} must be finite and >= 0"));
    }
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    #[rustfmt::skip]
    let m = RMatrix::from_row_slice(4, 4, &[
        ch, 0.0, sh, 0.0,
        0.0, ch, 0.0, -sh,
        sh, 0.0, ch, 0.0,
        0.0, -sh, 0.0, ch,
    ]);
    Ok(CovarianceMatrix::new_unchecked(m))
}

/// Entries `d1`, `d2`, `a` of the output covariance of a lossy TMSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputMoments {
    pub d1: f64,
    pub d2: f64,
    pub a: f64,
}

impl OutputMoments {
    pub fn new(r: f64, eta1: f64, eta2: f64) -> Self {
        let s2 = r.sinh().powi(2);
        Self {
            d1: 1.0 + 2.0 * eta1 * s2,
            d2: 1.0 + 2.0 * eta2 * s2,
            a: (eta1 * eta2).sqrt() * (2.0 * r).sinh(),
        }
    }

    /// Symplectic eigenvalues `½[√((d1+d2)² − 4a²) ± (d1 − d2)]`, larger first.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let root = ((self.d1 + self.d2).powi(2) - 4.0 * self.a * self.a).sqrt();
        let half_diff = 0.5 * (self.d1 - self.d2).abs();
        (0.5 * root + half_diff, 0.5 * root - half_diff)
    }
}

/// Closed-form covariance of the TMSV after phase `phi` on arm 1 and losses `eta1`, `eta2`.
pub fn lossy_tmsv_covariance(r: f64, eta1: f64, eta2: f64, phi: f64) -> Result<CovarianceMatrix> {
    if !r.is_finite() || r < 0.0 {
        return domain(format!("squeeze parameter r = {r} must be finite and >= 0"));
    }
    check_eta("eta1", eta1)?;
    check_eta("eta2", eta2)?;
    let OutputMoments { d1, d2, a } = OutputMoments::new(r, eta1, eta2);
    let (ac, as_) = (a * phi.cos(), a * phi.sin());
    #[rustfmt::skip]
    let m = RMatrix::from_row_slice(4, 4, &[
        d1, 0.0, ac, -as_,
        0.0, d1, -as_, -ac,
        ac, -as_, d2, 0.0,
        -as_, -ac, 0.0, d2,
    ]);
    Ok(CovarianceMatrix::new_unchecked(m))
}
