//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Standard symplectic form `⊕ [[0, 1], [-1, 0]]` over `modes` modes.
pub fn omega(modes: usize) -> RMatrix {
    let mut m = RMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(c)
}

/// Real part, failing if any imaginary component exceeds `tol`.
pub fn real_part(m: &CMatrix, tol: f64) -> Result<RMatrix> {
    let residue = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > tol {
        return Err(Error::Internal(format!(
            "expected a real matrix, imaginary residue {residue:e}"
        )));
    }
    Ok(m.map(|z| z.re))
}

pub fn max_abs_diff(a: &RMatrix, b: &RMatrix) -> f64 {
    (a - b).amax()
}

/// Asymmetry `max |m - mᵀ|`.
pub fn asymmetry(m: &RMatrix) -> f64 {
    (m - m.transpose()).amax()
}

/// `max |Mᵀ Ω M - Ω|` for a real matrix acting on quadratures.
pub fn symplectic_defect(m: &RMatrix) -> f64 {
    let om = omega(m.nrows() / 2);
    (m.transpose() * &om * m - om).amax()
}

/// Square root and inverse square root of a symmetric positive-definite matrix.
pub fn spd_sqrt(m: &RMatrix) -> Result<(RMatrix, RMatrix)> {
    let eig = SymmetricEigen::new(m.clone());
    let min = eig.eigenvalues.min();
    if min <= 0.0 {
        return Err(Error::Domain(format!(
            "matrix is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    let v = &eig.eigenvectors;
    let sq = RMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let isq = RMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()));
    Ok((v * sq * v.transpose(), v * isq * v.transpose()))
}

/// Principal square root of a complex matrix whose spectrum avoids the closed
/// negative real axis.
///
/// Uses the complex Schur form `A = Q T Qᴴ` and the triangular recurrence
/// `R_ii = √T_ii`, `R_ij = (T_ij − Σ_k R_ik R_kj) / (R_ii + R_jj)`, which stays
/// well defined for repeated eigenvalues.
pub fn sqrtm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::DegenerateSpectrum("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = t.camax().max(f64::MIN_POSITIVE);
    let mut r = CMatrix::zeros(n, n);
    for i in 0..n {
        let d = t[(i, i)];
        if d.im.abs() <= 1e-12 * scale && d.re <= 0.0 {
            return Err(Error::DegenerateSpectrum(format!(
                "eigenvalue {d} on the branch cut of the square root"
            )));
        }
        r[(i, i)] = d.sqrt();
    }
    for j in 1..n {
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in (i + 1)..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            let den = r[(i, i)] + r[(j, j)];
            if den.norm() <= 1e-14 * scale.sqrt() {
                return Err(Error::DegenerateSpectrum(
                    "opposite square roots in the Schur diagonal".into(),
                ));
            }
            r[(i, j)] = s / den;
        }
    }
    Ok(&q * r * q.adjoint())
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::DegenerateSpectrum("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn expm(a: &CMatrix) -> CMatrix {
    a.exp()
}

/// Direct sum of square blocks.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let dim = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(dim, dim);
    let mut at = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((at, at), (k, k)).copy_from(b);
        at += k;
    }
    out
}
