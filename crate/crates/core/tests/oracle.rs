use tmsv_metrology::config::squeeze_parameter;
use tmsv_metrology::fock::{
    apply_loss, lossy_tmsv_fock, mean_photons, parity_expectation_fock, qfi_fock, tmsv_fock,
    FockState, DEFAULT_CUTOFF,
};
use tmsv_metrology::parity::parity_expectation_closed;
use tmsv_metrology::qfi::qfi_closed;
use tmsv_metrology::symplectic::lossy_tmsv_covariance;
use tmsv_metrology::LossyMziConfig;

#[test]
fn parity_matches_oracle_for_small_photon_numbers() {
    for &(n, e1, e2, phi) in &[(0.5, 0.9, 0.7, 0.4), (1.0, 0.8, 1.0, 0.7), (2.0, 0.6, 0.6, 1.3), (2.0, 1.0, 1.0, 0.0)] {
        let cfg = LossyMziConfig::new(n, e1, e2, phi).unwrap();
        let oracle = parity_expectation_fock(&cfg, DEFAULT_CUTOFF).unwrap();
        let closed = parity_expectation_closed(&cfg).expectation;
        assert!((oracle - closed).abs() < 1e-6, "{cfg:?}: {oracle} vs {closed}");
    }
}

#[test]
fn oracle_qfi_is_phase_independent() {
    let r = squeeze_parameter(1.0);
    let a = qfi_fock(r, 0.8, 0.9, 0.1, DEFAULT_CUTOFF).unwrap();
    let b = qfi_fock(r, 0.8, 0.9, 1.2, DEFAULT_CUTOFF).unwrap();
    assert!((a / b - 1.0).abs() < 1e-6, "{a} vs {b}");
    let closed = qfi_closed(&LossyMziConfig::new(1.0, 0.8, 0.9, 0.0).unwrap()).f_q;
    assert!((a / closed - 1.0).abs() < 1e-5);
}

#[test]
fn loss_channel_preserves_trace() {
    let state = tmsv_fock(0.6, 30).unwrap();
    let before = state.trace();
    let after = apply_loss(&apply_loss(&state, 0, 0.3).unwrap(), 1, 0.85).unwrap();
    assert!((after.trace() - before).abs() < 1e-12);
    assert!(after.min_eigenvalue() > -1e-10);
}

#[test]
fn full_loss_empties_a_photon() {
    let one = FockState::number_state(1, 0, 4).unwrap();
    let out = apply_loss(&one, 0, 0.0).unwrap();
    assert!((out.probability(0, 0) - 1.0).abs() < 1e-14);
}

#[test]
fn oracle_mean_photons_track_loss() {
    let r = 0.7;
    let state = lossy_tmsv_fock(r, 0.6, 0.9, 0.3, DEFAULT_CUTOFF).unwrap();
    let expected = r.sinh().powi(2) * (0.6 + 0.9);
    assert!((mean_photons(&state) - expected).abs() < 1e-9);
}

#[test]
fn oracle_covariance_matches_gaussian_evolution() {
    let (r, e1, e2, phi) = (0.5, 0.75, 0.95, 2.0);
    let state = lossy_tmsv_fock(r, e1, e2, phi, DEFAULT_CUTOFF).unwrap();
    let closed = lossy_tmsv_covariance(r, e1, e2, phi).unwrap();
    assert!((state.covariance() - closed.matrix()).amax() < 1e-8);
}
