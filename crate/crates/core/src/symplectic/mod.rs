//! Gaussian-state covariance matrices, their evolution through the lossy
//! interferometer, Williamson normal form, and the density-operator exponent.
//!
//! Quadratures are ordered `(x1, p1, x2, p2)` for the two arms with the
//! environment modes appended as `(x_e1, p_e1, x_e2, p_e2)`. The vacuum has the
//! identity as covariance matrix (`x = a + a†`, `p = i(a† − a)`).

mod covariance;
mod exponent;
mod transform;
mod williamson;

pub use covariance::{
    lossy_tmsv_covariance, symplectic_eigenvalues, tmsv_covariance, CovarianceMatrix,
    OutputMoments, BONA_FIDE_TOL, SYMMETRY_TOL,
};
pub use exponent::{
    exponent_from_covariance, exponent_from_covariance_regularized, thermal_coupling,
    thermal_exponent, GaussianExponent, PURE_MODE_TOL, REGULARIZATION_EPS,
};
pub use transform::{
    beam_splitter_transform, evolve_and_reduce, ladder_to_quadrature, loss_transform,
    lossy_mzi_transform, phase_transform, Basis, ModeTransform,
};
pub use williamson::{williamson, WilliamsonForm, DEGENERACY_TOL};
