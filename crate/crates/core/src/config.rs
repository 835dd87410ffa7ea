//! Interferometer configuration shared by every module.

use crate::error::{domain, Result};

/// Mean photon number of a two-mode squeezed vacuum with squeeze parameter `r`.
pub fn photon_number(r: f64) -> f64 {
    2.0 * r.sinh().powi(2)
}

/// Inverse of [`photon_number`].
pub fn squeeze_parameter(n: f64) -> f64 {
    (n / 2.0).sqrt().asinh()
}

/// Where the loss sits in the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossModel {
    /// Equal transmissivity in both arms.
    TwoArm,
    /// Loss only in the phase-shifted arm; the reference arm is lossless.
    OneArm,
    /// Independent transmissivities.
    General,
}

impl LossModel {
    /// Expands a single transmissivity into `(eta1, eta2)` for the restricted models.
    pub fn transmissivities(self, eta: f64) -> Result<(f64, f64)> {
        match self {
            LossModel::TwoArm => Ok((eta, eta)),
            LossModel::OneArm => Ok((eta, 1.0)),
            LossModel::General => domain("the general model needs eta1 and eta2 separately"),
        }
    }
}

/// One evaluation point of the lossy Mach-Zehnder interferometer fed by a TMSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyMziConfig {
    pub n: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub phi: f64,
}

pub(crate) fn check_eta(name: &str, eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("{name} = {eta} is not a transmissivity in [0, 1]"));
    }
    Ok(())
}

pub(crate) fn check_photons(n: f64) -> Result<()> {
    if !n.is_finite() || n < 0.0 {
        return domain(format!("mean photon number n = {n} must be finite and >= 0"));
    }
    Ok(())
}

impl LossyMziConfig {
    pub fn new(n: f64, eta1: f64, eta2: f64, phi: f64) -> Result<Self> {
        check_photons(n)?;
        check_eta("eta1", eta1)?;
        check_eta("eta2", eta2)?;
        if !phi.is_finite() {
            return domain(format!("phase {phi} is not finite"));
        }
        Ok(Self { n, eta1, eta2, phi })
    }

    /// Builds a configuration from the squeeze parameter instead of the photon number.
    pub fn from_squeezing(r: f64, eta1: f64, eta2: f64, phi: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return domain(format!("squeeze parameter r = {r} must be finite and >= 0"));
        }
        Self::new(photon_number(r), eta1, eta2, phi)
    }

    pub fn with_model(n: f64, eta: f64, model: LossModel, phi: f64) -> Result<Self> {
        let (eta1, eta2) = model.transmissivities(eta)?;
        Self::new(n, eta1, eta2, phi)
    }

    pub fn squeezing(&self) -> f64 {
        squeeze_parameter(self.n)
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    pub fn is_lossless(&self) -> bool {
        self.eta1 == 1.0 && self.eta2 == 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn photon_number_round_trips() {
        for &n in &[0.0, 0.5, 2.0, 100.0] {
            assert!((photon_number(squeeze_parameter(n)) - n).abs() < 1e-12 * (1.0 + n));
        }
        assert!((squeeze_parameter(2.0) - 1f64.asinh()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LossyMziConfig::new(-1.0, 1.0, 1.0, 0.0).is_err());
        assert!(LossyMziConfig::new(1.0, 1.1, 1.0, 0.0).is_err());
        assert!(LossyMziConfig::new(1.0, 0.5, -0.1, 0.0).is_err());
        assert!(LossyMziConfig::new(f64::NAN, 0.5, 0.5, 0.0).is_err());
        assert!(LossyMziConfig::from_squeezing(f64::INFINITY, 0.5, 0.5, 0.0).is_err());
        assert!(LossModel::General.transmissivities(0.5).is_err());
    }

    #[test]
    fn model_expansion() {
        assert_eq!(LossModel::TwoArm.transmissivities(0.7).unwrap(), (0.7, 0.7));
        assert_eq!(LossModel::OneArm.transmissivities(0.7).unwrap(), (0.7, 1.0));
    }
}
