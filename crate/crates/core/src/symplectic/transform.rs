use std::f64::consts::FRAC_1_SQRT_2;

use crate::config::check_eta;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, real_part, symplectic_defect, CMatrix, RMatrix, I};

use super::covariance::CovarianceMatrix;

/// Which operator vector a [`ModeTransform`] acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `(x1, p1, x2, p2, …)`
    Quadrature,
    /// `(a1†, a1, a2†, a2, …)`
    Ladder,
}

/// Linear map of field operators, `new = entries · old`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    entries: CMatrix,
    basis: Basis,
}

fn k_block() -> CMatrix {
    let s = FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(s), c(s), I * s, -I * s])
}

/// `⊕ K` with `K = [[1, 1], [i, −i]]/√2`, mapping `(a†, a)` onto quadratures.
pub fn ladder_to_quadrature(modes: usize) -> CMatrix {
    let k = k_block();
    block_diag(&vec![&k; modes])
}

impl ModeTransform {
    pub fn new(entries: CMatrix, basis: Basis) -> Result<Self> {
        let d = entries.nrows();
        if d == 0 || !d.is_multiple_of(2) || entries.ncols() != d {
            return Err(Error::Contract(format!(
                "mode transform must be square with even dimension, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries, basis })
    }

    pub fn identity(modes: usize, basis: Basis) -> Self {
        Self { entries: CMatrix::identity(2 * modes, 2 * modes), basis }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    /// Rewrites the transform in `basis` via `(⊕K) M (⊕K)⁻¹`.
    pub fn in_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let k = ladder_to_quadrature(self.modes());
        let k_inv = k.adjoint();
        let entries = match basis {
            Basis::Quadrature => &k * &self.entries * &k_inv,
            Basis::Ladder => &k_inv * &self.entries * &k,
        };
        Self { entries, basis }
    }

    /// Applies `self` first and `later` second.
    pub fn then(&self, later: &ModeTransform) -> Result<Self> {
        if later.entries.nrows() != self.entries.nrows() {
            return Err(Error::Contract("composing transforms of different sizes".into()));
        }
        let later = later.in_basis(self.basis);
        Ok(Self { entries: &later.entries * &self.entries, basis: self.basis })
    }

    /// The real quadrature matrix; fails when the map is not a real linear-optics map.
    pub fn quadrature_matrix(&self) -> Result<RMatrix> {
        real_part(self.in_basis(Basis::Quadrature).entries(), 1e-12)
    }

    /// `max |MᵀΩM − Ω|` in the quadrature basis.
    pub fn symplectic_defect(&self) -> Result<f64> {
        Ok(symplectic_defect(&self.quadrature_matrix()?))
    }
}

/// Builds a ladder-basis matrix from annihilation-operator rules `a_i → Σ_j u_ij a_j`;
/// creation operators follow the conjugate rule.
fn from_annihilation_rules(u: &CMatrix) -> ModeTransform {
    let modes = u.nrows();
    let mut m = CMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        for j in 0..modes {
            m[(2 * i, 2 * j)] = u[(i, j)].conj();
            m[(2 * i + 1, 2 * j + 1)] = u[(i, j)];
        }
    }
    ModeTransform { entries: m, basis: Basis::Ladder }
}

/// Virtual beam splitters `a_i → √η_i a_i − √(1−η_i) e_i`, `e_i → √(1−η_i) a_i + √η_i e_i`
/// on the modes `(a1, a2, e1, e2)`.
pub fn loss_transform(eta1: f64, eta2: f64) -> Result<ModeTransform> {
    check_eta("eta1", eta1)?;
    check_eta("eta2", eta2)?;
    let mut u = CMatrix::zeros(4, 4);
    for (i, eta) in [eta1, eta2].into_iter().enumerate() {
        let (t, l) = (eta.sqrt(), (1.0 - eta).sqrt());
        u[(i, i)] = c(t);
        u[(i, i + 2)] = c(-l);
        u[(i + 2, i)] = c(l);
        u[(i + 2, i + 2)] = c(t);
    }
    Ok(from_annihilation_rules(&u).in_basis(Basis::Quadrature))
}

/// Phase shift `a1 → e^{−iφ} a1` embedded in `modes` modes.
pub fn phase_transform(phi: f64, modes: usize) -> ModeTransform {
    let mut u = CMatrix::identity(modes, modes);
    u[(0, 0)] = (-I * phi).exp();
    from_annihilation_rules(&u).in_basis(Basis::Quadrature)
}

/// Balanced beam splitter `a1 → (a1 + i a2)/√2`, `a2 → (i a1 + a2)/√2` on the two arms.
pub fn beam_splitter_transform() -> ModeTransform {
    let s = FRAC_1_SQRT_2;
    let u = CMatrix::from_row_slice(2, 2, &[c(s), I * s, I * s, c(s)]);
    from_annihilation_rules(&u).in_basis(Basis::Quadrature)
}

/// Phase shift followed by the two loss channels, as an 8×8 quadrature map on
/// system plus environment.
pub fn lossy_mzi_transform(eta1: f64, eta2: f64, phi: f64) -> Result<ModeTransform> {
    phase_transform(phi, 4).then(&loss_transform(eta1, eta2)?)
}

/// Embeds `gamma0 ⊕ I`, applies `t`, and keeps the leading system block.
pub fn evolve_and_reduce(gamma0: &CovarianceMatrix, t: &ModeTransform) -> Result<CovarianceMatrix> {
    let sys = gamma0.dim();
    let total = t.entries().nrows();
    if sys > total {
        return Err(Error::Contract(format!(
            "covariance of dimension {sys} does not fit a {total}-dimensional transform"
        )));
    }
    let m = t.quadrature_matrix()?;
    let env = CovarianceMatrix::vacuum((total - sys) / 2);
    let full = if total > sys { gamma0.direct_sum(&env) } else { gamma0.clone() };
    let out = &m * full.matrix() * m.transpose();
    let reduced = out.view((0, 0), (sys, sys)).into_owned();
    CovarianceMatrix::new(0.5 * (&reduced + reduced.transpose()))
}
