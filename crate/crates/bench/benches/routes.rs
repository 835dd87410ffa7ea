use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tmsv_metrology::config::squeeze_parameter;
use tmsv_metrology::fock::{lossy_tmsv_fock, qfi_fock};
use tmsv_metrology::optimizer::{optimal_phase, optimal_photon_number};
use tmsv_metrology::parity::{parity_expectation_closed, parity_expectation_matrix};
use tmsv_metrology::qfi::{qfi_closed, qfi_fidelity, DEFAULT_FIDELITY_STEP};
use tmsv_metrology::symplectic::{lossy_tmsv_covariance, williamson};
use tmsv_metrology::LossyMziConfig;

fn qfi(c: &mut Criterion) {
    let cfg = LossyMziConfig::new(2.0, 0.8, 0.9, 0.4).unwrap();
    let mut g = c.benchmark_group("qfi");
    g.bench_function("closed", |b| b.iter(|| qfi_closed(black_box(&cfg))));
    g.bench_function("fidelity", |b| b.iter(|| qfi_fidelity(black_box(&cfg), DEFAULT_FIDELITY_STEP)));
    g.sample_size(10);
    g.bench_function("fock_cutoff_25", |b| {
        b.iter(|| qfi_fock(squeeze_parameter(black_box(1.0)), 0.8, 0.9, 0.4, 25))
    });
    g.finish();
}

fn symplectic(c: &mut Criterion) {
    let gamma = lossy_tmsv_covariance(1.0, 0.8, 0.9, 0.4).unwrap();
    c.bench_function("williamson", |b| b.iter(|| williamson(black_box(&gamma))));
    c.bench_function("fock_state_cutoff_30", |b| b.iter(|| lossy_tmsv_fock(black_box(0.6), 0.8, 0.9, 0.4, 30)));
}

fn parity(c: &mut Criterion) {
    let cfg = LossyMziConfig::new(2.0, 0.8, 0.9, 0.4).unwrap();
    let mut g = c.benchmark_group("parity");
    g.bench_function("closed", |b| b.iter(|| parity_expectation_closed(black_box(&cfg))));
    g.bench_function("determinant", |b| b.iter(|| parity_expectation_matrix(black_box(&cfg))));
    g.finish();
}

fn optimizer(c: &mut Criterion) {
    let mut g = c.benchmark_group("optimizer");
    g.bench_function("phase", |b| b.iter(|| optimal_phase(black_box(10.0), 0.99, 1.0)));
    g.sample_size(10);
    g.bench_function("photon_number_n200", |b| {
        b.iter(|| optimal_photon_number(black_box(200.0), 0.99, 1.0, None))
    });
    g.finish();
}

criterion_group!(benches, qfi, symplectic, parity, optimizer);
criterion_main!(benches);
