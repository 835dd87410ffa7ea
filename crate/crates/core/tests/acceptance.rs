//! Acceptance criteria 1–9. Runs as a plain binary so every criterion prints a
//! PASS/FAIL line regardless of output capture; exits nonzero on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tmsv_metrology::config::squeeze_parameter;
use tmsv_metrology::fock::{cutoff_for_deficit, lossy_tmsv_fock, qfi_fock};
use tmsv_metrology::optimizer::{
    optimal_phase, optimal_photon_number, quantum_advantage_region, repeated_error,
};
use tmsv_metrology::parity::{
    delta_phi, ideal_expectation, parity_expectation_closed, parity_expectation_matrix,
};
use tmsv_metrology::qfi::{qfi_closed, qfi_fidelity, DEFAULT_FIDELITY_STEP};
use tmsv_metrology::symplectic::lossy_tmsv_covariance;
use tmsv_metrology::{LossModel, LossyMziConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a / b - 1.0).abs()
    }
}

fn cfg(n: f64, e1: f64, e2: f64, phi: f64) -> LossyMziConfig {
    LossyMziConfig::new(n, e1, e2, phi).expect("valid configuration")
}

fn ideal_qfi() -> Outcome {
    let mut worst = 0.0f64;
    for &n in &[0.5, 1.0, 2.0, 10.0, 100.0] {
        worst = worst.max(rel(qfi_closed(&cfg(n, 1.0, 1.0, 0.3)).f_q, n * (n + 2.0)));
    }
    if worst <= 1e-14 {
        Ok(format!("max rel err {worst:.1e}"))
    } else {
        Err(format!("max rel err {worst:.1e} > 1e-14"))
    }
}

fn dual_route_qfi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = (0.0f64, (0.0, 0.0, 0.0));
    for _ in 0..500 {
        let n = rng.gen_range(0.1..=20.0);
        let e1 = rng.gen_range(0.3..=0.99);
        let e2 = rng.gen_range(0.3..=0.99);
        let phi = rng.gen_range(0.0..PI);
        let c = cfg(n, e1, e2, phi);
        let f = qfi_fidelity(&c, DEFAULT_FIDELITY_STEP).map_err(|e| format!("{e} at {c:?}"))?;
        let err = rel(f.f_q, qfi_closed(&c).f_q);
        if err > worst.0 {
            worst = (err, (n, e1, e2));
        }
    }
    let msg = format!("max rel err {:.1e} at (n, eta1, eta2) = {:?}", worst.0, worst.1);
    if worst.0 <= 1e-4 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn oracle_qfi() -> Outcome {
    let mut worst = 0.0f64;
    for &n in &[0.5, 1.0, 2.0] {
        for &eta in &[0.5, 0.8, 0.99] {
            for model in [LossModel::TwoArm, LossModel::OneArm] {
                let (e1, e2) = model.transmissivities(eta).unwrap();
                let q = qfi_fock(squeeze_parameter(n), e1, e2, 0.4, 40).map_err(|e| e.to_string())?;
                worst = worst.max(rel(q, qfi_closed(&cfg(n, e1, e2, 0.4)).f_q));
            }
        }
    }
    if worst <= 1e-5 {
        Ok(format!("max rel err {worst:.1e} over 18 configurations"))
    } else {
        Err(format!("max rel err {worst:.1e} > 1e-5"))
    }
}

fn dual_route_parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let r = rng.gen_range(0.0..=1.5);
        let e1 = rng.gen_range(0.2..=1.0);
        let e2 = rng.gen_range(0.2..=1.0);
        let phi = rng.gen_range(0.05..=PI - 0.05);
        let c = LossyMziConfig::from_squeezing(r, e1, e2, phi).unwrap();
        let m = parity_expectation_matrix(&c).map_err(|e| format!("{e} at {c:?}"))?;
        worst = worst.max((m.expectation - parity_expectation_closed(&c).expectation).abs());
    }
    let mut ideal = 0.0f64;
    for i in 0..50 {
        let n = 0.1 + 0.4 * i as f64;
        for j in 0..20 {
            let phi = 0.05 + j as f64 * (PI - 0.1) / 19.0;
            let c = cfg(n, 1.0, 1.0, phi);
            let target = 1.0 / (1.0 + n * (n + 2.0) * phi.cos().powi(2)).sqrt();
            ideal = ideal.max((parity_expectation_closed(&c).expectation - target).abs());
            ideal = ideal.max((ideal_expectation(n, phi) - target).abs());
        }
    }
    let msg = format!("matrix vs closed {worst:.1e}, ideal reduction {ideal:.1e}");
    if worst <= 1e-9 && ideal <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn cramer_rao() -> Outcome {
    let etas = [0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0];
    let mut min_gap = f64::INFINITY;
    let mut count = 0;
    for i in 0..20 {
        let n = 0.1 * 1000f64.powf(i as f64 / 19.0);
        for &e1 in &etas {
            for &e2 in &etas {
                let phi = optimal_phase(n, e1, e2).map_err(|e| e.to_string())?;
                let bound = qfi_closed(&cfg(n, e1, e2, phi)).quantum_limit;
                min_gap = min_gap.min(delta_phi(n, e1, e2, phi) - bound);
                count += 1;
            }
        }
    }
    let msg = format!("min Δφ(φ_o) − 1/√F_Q = {min_gap:.3e} over {count} points");
    if min_gap >= -1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn sql_thresholds() -> Outcome {
    let n = 10.0;
    let two = qfi_closed(&cfg(n, 0.6, 0.6, 0.0)).quantum_limit;
    let one = qfi_closed(&cfg(n, 0.4, 1.0, 0.0)).quantum_limit;
    let sql = 1.0 / n.sqrt();
    let t_two = quantum_advantage_region(n, LossModel::TwoArm).map_err(|e| e.to_string())?;
    let t_one = quantum_advantage_region(n, LossModel::OneArm).map_err(|e| e.to_string())?;
    let msg = format!("thresholds two-arm {t_two:.6}, one-arm {t_one:.6}; sql {sql:.4}, limits {two:.4}, {one:.4}");
    if two < sql && one < sql && t_two <= 0.6 && t_one <= 0.4 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn budget_structure() -> Outcome {
    let total = 200.0;
    let mut optima = Vec::new();
    for &eta in &[0.96, 0.97, 0.98, 0.99] {
        let o = optimal_photon_number(total, eta, 1.0, None).map_err(|e| e.to_string())?;
        if !o.interior {
            return Err(format!("no interior minimum at eta = {eta}"));
        }
        optima.push(o.n_opt);
    }
    if optima.windows(2).any(|w| w[1] < w[0]) {
        return Err(format!("n_o not nondecreasing: {optima:?}"));
    }
    let r = repeated_error(optima[3], 0.99, 1.0, total).map_err(|e| e.to_string())?;
    let classical = r.classical.ok_or("missing classical limit")?;
    let msg = format!(
        "n_o = {:.2?}; at eta 0.99: quantum {:.4} < parity {:.4} < classical {:.4}",
        optima, r.quantum_limit, r.delta_phi_repeated, classical
    );
    if r.quantum_limit < r.delta_phi_repeated && r.delta_phi_repeated < classical {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn strictly_monotone(values: &[f64]) -> bool {
    let inc = values.windows(2).all(|w| w[1] > w[0]);
    let dec = values.windows(2).all(|w| w[1] < w[0]);
    inc || dec
}

fn phase_monotonicity() -> Outcome {
    let ns: Vec<f64> = (0..20).map(|i| 1.0 + 99.0 * i as f64 / 19.0).collect();
    let etas: Vec<f64> = (0..20).map(|i| 0.9 + 0.099 * i as f64 / 19.0).collect();
    let mut table = vec![vec![0.0; etas.len()]; ns.len()];
    for (i, &n) in ns.iter().enumerate() {
        for (j, &eta) in etas.iter().enumerate() {
            table[i][j] = optimal_phase(n, eta, 1.0).map_err(|e| e.to_string())?;
        }
    }
    let rows_ok = table.iter().all(|row| strictly_monotone(row));
    let cols_ok = (0..etas.len())
        .all(|j| strictly_monotone(&table.iter().map(|row| row[j]).collect::<Vec<_>>()));
    let msg = format!(
        "phi_o in [{:.4}, {:.4}]; monotone in eta: {rows_ok}, in n: {cols_ok}",
        table.iter().flatten().cloned().fold(f64::INFINITY, f64::min),
        table.iter().flatten().cloned().fold(0.0, f64::max)
    );
    if rows_ok && cols_ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn gaussianity_bridge() -> Outcome {
    let mut worst = 0.0f64;
    for &(r, e1, e2, phi) in &[(0.3, 0.6, 0.9, 0.2), (0.8, 0.8, 0.8, 1.1), (1.2, 0.7, 1.0, 0.5)] {
        let cutoff = cutoff_for_deficit(r, 1e-13).max(40);
        let s = lossy_tmsv_fock(r, e1, e2, phi, cutoff).map_err(|e| e.to_string())?;
        let g = lossy_tmsv_covariance(r, e1, e2, phi).map_err(|e| e.to_string())?;
        worst = worst.max((s.covariance() - g.matrix()).amax());
    }
    if worst <= 1e-8 {
        Ok(format!("max entry err {worst:.1e} for r up to 1.2"))
    } else {
        Err(format!("max entry err {worst:.1e} > 1e-8"))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("ideal-case QFI", ideal_qfi, Some(Duration::from_secs(1))),
        ("dual-route QFI", dual_route_qfi, Some(Duration::from_secs(30))),
        ("oracle QFI", oracle_qfi, Some(Duration::from_secs(300))),
        ("dual-route parity", dual_route_parity, Some(Duration::from_secs(10))),
        ("Cramer-Rao bound", cramer_rao, None),
        ("SQL-beating thresholds", sql_thresholds, Some(Duration::from_secs(1))),
        ("photon-budget structure", budget_structure, Some(Duration::from_secs(60))),
        ("optimal-phase monotonicity", phase_monotonicity, None),
        ("Gaussianity bridge", gaussianity_bridge, Some(Duration::from_secs(60))),
    ];
    let mut failures = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(msg), Some(b)) if elapsed > *b => Err(format!("{msg}; runtime over {b:?}")),
            (o, _) => o,
        };
        let (status, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failures += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {} {status} {name} ({:.2?}): {msg}", k + 1, elapsed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
