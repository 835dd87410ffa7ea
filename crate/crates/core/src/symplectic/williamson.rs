use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{omega, spd_sqrt, to_complex, RMatrix, I};

use super::covariance::CovarianceMatrix;

/// Symplectic eigenvalues closer than this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

// Eigenvectors whose eigenvalues agree to this relative precision share one
// canonical basis of their joint eigenspace.
const CLUSTER_TOL: f64 = 1e-12;

/// `γ = Mᵀ D M` with `D = diag(ν1, ν1, ν2, ν2, …)` and `M` symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonForm {
    eigenvalues: Vec<f64>,
    m: RMatrix,
    degenerate: bool,
    r0: Option<f64>,
}

impl WilliamsonForm {
    /// Symplectic eigenvalues in descending order, one per mode.
    pub fn symplectic_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn diagonal(&self) -> RMatrix {
        let d: Vec<f64> = self.eigenvalues.iter().flat_map(|&v| [v, v]).collect();
        RMatrix::from_diagonal(&DVector::from_vec(d))
    }

    /// The symplectic congruence `M`.
    pub fn congruence(&self) -> &RMatrix {
        &self.m
    }

    /// `M⁻¹ = −Ω Mᵀ Ω` for symplectic `M`.
    pub fn congruence_inverse(&self) -> RMatrix {
        let om = omega(self.m.nrows() / 2);
        -(&om * self.m.transpose() * &om)
    }

    pub fn reconstruct(&self) -> RMatrix {
        self.m.transpose() * self.diagonal() * &self.m
    }

    /// True when two symplectic eigenvalues agree within [`DEGENERACY_TOL`].
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Auxiliary squeeze angle `r0` solving `coth 4r0 = −(d1 + d2)/(4a)` for a two-mode
    /// covariance with diagonal `d1, d1, d2, d2` and coupling magnitude `a`.
    ///
    /// `None` when the relation has no real solution (`|d1 + d2| ≤ 4|a|`) or `a = 0`.
    /// The value is informational; `M` is always built from the generic decomposition.
    pub fn r0(&self) -> Option<f64> {
        self.r0
    }
}

fn auxiliary_angle(gamma: &RMatrix) -> Option<f64> {
    if gamma.nrows() != 4 {
        return None;
    }
    let (d1, d2) = (gamma[(0, 0)], gamma[(2, 2)]);
    let a = gamma[(0, 2)].hypot(gamma[(0, 3)]);
    if a == 0.0 {
        return None;
    }
    let coth = -(d1 + d2) / (4.0 * a);
    (coth.abs() > 1.0).then(|| (1.0 / coth).atanh() / 4.0)
}

/// Rotates `v` so its largest-magnitude entry (first one on ties) is real and positive.
fn fix_phase(v: &mut DVector<Complex64>) {
    let mut best = 0;
    for (k, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = k;
        }
    }
    let z = v[best];
    if z.norm() > 0.0 {
        *v *= z.conj() / z.norm();
    }
}

/// Deterministic orthonormal basis of the span of `cols`: greedily project standard
/// basis vectors onto the span, taking the largest residual each round.
fn canonical_basis(cols: &[DVector<Complex64>]) -> Vec<DVector<Complex64>> {
    let dim = cols[0].len();
    let project = |e: &DVector<Complex64>| {
        cols.iter().fold(DVector::zeros(dim), |acc: DVector<Complex64>, v| acc + v * v.dotc(e))
    };
    let mut chosen: Vec<DVector<Complex64>> = Vec::with_capacity(cols.len());
    for _ in 0..cols.len() {
        let mut best: Option<DVector<Complex64>> = None;
        for k in 0..dim {
            let mut e = DVector::zeros(dim);
            e[k] = Complex64::new(1.0, 0.0);
            let mut w = project(&e);
            for u in &chosen {
                w -= u * u.dotc(&w);
            }
            if best.as_ref().is_none_or(|b| w.norm() > b.norm() * (1.0 + 1e-9)) {
                best = Some(w);
            }
        }
        let w = best.expect("non-empty dimension");
        chosen.push(&w / Complex64::new(w.norm(), 0.0));
    }
    chosen
}

/// Williamson decomposition of a covariance matrix.
///
/// With `K = γ^{-½} Ω γ^{-½}`, each positive eigenvalue `μ` of the Hermitian `iK`
/// with eigenvector `v` yields the symplectic eigenvalue `1/μ` and the real pair
/// `(√2 Re v, −√2 Im v)` spanning the mode. Stacking those pairs into `O` gives
/// `γ = S D Sᵀ` with `S = γ^½ O D^{-½}`, and `M = Sᵀ`.
pub fn williamson(gamma: &CovarianceMatrix) -> Result<WilliamsonForm> {
    let g = gamma.matrix();
    let dim = g.nrows();
    let (g_half, g_inv_half) = spd_sqrt(g)?;
    let k = &g_inv_half * omega(dim / 2) * &g_inv_half;
    let eig = SymmetricEigen::new(to_complex(&k) * I);

    let mut positive: Vec<(f64, DVector<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > 0.0)
        .map(|(i, &mu)| (mu, eig.eigenvectors.column(i).into_owned()))
        .collect();
    if positive.len() != dim / 2 {
        return Err(Error::Internal("symplectic spectrum is not paired".into()));
    }
    // Ascending μ is descending ν.
    positive.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut nus = Vec::with_capacity(dim / 2);
    let mut vectors = Vec::with_capacity(dim / 2);
    let mut start = 0;
    while start < positive.len() {
        let mut end = start + 1;
        while end < positive.len()
            && positive[end].0 - positive[end - 1].0 <= CLUSTER_TOL * positive[end].0
        {
            end += 1;
        }
        let cluster: Vec<_> = positive[start..end].iter().map(|(_, v)| v.clone()).collect();
        let basis = if cluster.len() > 1 { canonical_basis(&cluster) } else { cluster };
        for (offset, mut v) in basis.into_iter().enumerate() {
            fix_phase(&mut v);
            nus.push(1.0 / positive[start + offset].0);
            vectors.push(v);
        }
        start = end;
    }

    let sqrt2 = std::f64::consts::SQRT_2;
    let mut o = RMatrix::zeros(dim, dim);
    for (mode, v) in vectors.iter().enumerate() {
        for row in 0..dim {
            o[(row, 2 * mode)] = sqrt2 * v[row].re;
            o[(row, 2 * mode + 1)] = -sqrt2 * v[row].im;
        }
    }
    let d_inv_half: Vec<f64> = nus.iter().flat_map(|&v| [v.powf(-0.5); 2]).collect();
    let s = g_half * o * RMatrix::from_diagonal(&DVector::from_vec(d_inv_half));

    let degenerate = nus.windows(2).any(|w| (w[0] - w[1]).abs() <= DEGENERACY_TOL);
    Ok(WilliamsonForm { eigenvalues: nus, m: s.transpose(), degenerate, r0: auxiliary_angle(g) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symplectic_defect;
    use crate::symplectic::{lossy_tmsv_covariance, tmsv_covariance};

    #[test]
    fn identity_decomposes_trivially() {
        let w = williamson(&CovarianceMatrix::vacuum(2)).unwrap();
        assert_eq!(w.symplectic_eigenvalues().len(), 2);
        assert!((w.diagonal() - RMatrix::identity(4, 4)).amax() < 1e-14);
        assert!((w.congruence() - RMatrix::identity(4, 4)).amax() < 1e-14);
        assert!(w.is_degenerate());
    }

    #[test]
    fn pure_tmsv_has_unit_spectrum() {
        let w = williamson(&tmsv_covariance(0.9).unwrap()).unwrap();
        for &nu in w.symplectic_eigenvalues() {
            assert!((nu - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn reconstructs_lossy_state() {
        let g = lossy_tmsv_covariance(0.8, 0.7, 0.7, 0.5).unwrap();
        let w = williamson(&g).unwrap();
        assert!((w.reconstruct() - g.matrix()).norm() < 1e-9);
        assert!(symplectic_defect(w.congruence()) < 1e-10);
        assert!(w.is_degenerate());
        let inv = w.congruence_inverse();
        assert!((inv * w.congruence() - RMatrix::identity(4, 4)).amax() < 1e-10);
    }

    #[test]
    fn non_degenerate_state() {
        let g = lossy_tmsv_covariance(1.1, 0.4, 0.9, 2.2).unwrap();
        let w = williamson(&g).unwrap();
        assert!(!w.is_degenerate());
        let nus = w.symplectic_eigenvalues();
        assert!(nus[0] > nus[1] && nus[1] >= 1.0 - 1e-9);
        assert!((w.reconstruct() - g.matrix()).norm() < 1e-9);
    }

    #[test]
    fn decomposition_is_deterministic_under_degeneracy() {
        let g = lossy_tmsv_covariance(0.6, 0.5, 0.5, 1.0).unwrap();
        let a = williamson(&g).unwrap();
        let b = williamson(&g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn auxiliary_angle_relation_misses_the_squeezing() {
        // A pure TMSV is undone by two-mode squeezing of strength r.
        let weak = williamson(&tmsv_covariance(0.1).unwrap()).unwrap();
        let r0 = weak.r0().unwrap();
        assert!((r0.abs() - 0.1).abs() > 1e-3);
        assert_eq!(williamson(&tmsv_covariance(1.0).unwrap()).unwrap().r0(), None);
    }
}
