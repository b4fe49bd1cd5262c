//! Pre-run used to pick the frozen thresholds in the acceptance suite.
//!
//! `cargo run --release --example calibrate_thresholds`

use std::time::Instant;

use cmsdisc::bounds::{calibrate_k, rho, CALIBRATION_N0};
use cmsdisc::chebyshev::ChebKind;
use cmsdisc::envelope::{build_envelope, coefficient_decay};
use cmsdisc::measures::{pointwise_discrepancy, sharpness_witness, test_corpus};
use cmsdisc::wigner::{
    bound_term, moment_range, run_experiment, sample_matrix, EnsembleConfig, EntryModel,
    SpectrumSample,
};

fn main() -> cmsdisc::Result<()> {
    for kind in [ChebKind::First, ChebKind::Second] {
        let mut worst = (0.0f64, 0, 0);
        for n0 in [1, 2, 4, 8, 16, 32, 64] {
            for k0 in 1..=n0 {
                let env = build_envelope(kind, n0, k0)?;
                for d in coefficient_decay(&env) {
                    if d.scaled() > worst.0 {
                        worst = (d.scaled(), n0, k0);
                    }
                }
            }
        }
        println!("decay {kind:?}: max n*max(|p_n|,|q_n|) = {:.6} at n0={} k0={}", worst.0, worst.1, worst.2);
    }

    for seed in 0..6 {
        let k = calibrate_k(&test_corpus(seed), &CALIBRATION_N0)?;
        println!("calibration seed {seed}: k1={:.6} k2={:.6} k3={:.6}", k.k1, k.k2, k.k3);
    }

    let mut worst = f64::INFINITY;
    for n0 in 1..=64 {
        let mu = sharpness_witness(n0);
        let x = mu.atoms().last().unwrap().position;
        let r = pointwise_discrepancy(&mu, ChebKind::Second, x) / (rho(x, n0) / (8.0 * n0 as f64));
        worst = worst.min(r);
    }
    println!("sharpness: min discrepancy/(rho/(8 n0)) = {worst:.4}");

    let grid: Vec<f64> = (0..=200).map(|i| -1.2 + 2.4 * i as f64 / 200.0).collect();
    for seed in 0..3 {
        let cfg = EnsembleConfig::new(200, EntryModel::ComplexGaussian, seed);
        let res = run_experiment(&cfg, &grid, moment_range(200), 100)?;
        let edge = res
            .counts
            .iter()
            .filter(|c| c.x0.abs() >= 1.0)
            .map(|c| c.error)
            .fold(0.0, f64::max);
        println!("wigner N=200 100 trials seed {seed}: max ratio {:.4}, edge error {edge:.4}", res.max_ratio());
        let res = run_experiment(&cfg, &grid, 0, 200)?;
        println!("  200 trials: max variance ratio {:.6}", res.max_variance_ratio());
    }
    for n in [64, 200] {
        let cfg = EnsembleConfig::new(n, EntryModel::ComplexGaussian, 0);
        let res = run_experiment(&cfg, &[], moment_range(n), 200)?;
        for m in &res.moments {
            println!(
                "  N={n} n={} mean={:.6} se={:.6} n/N={:.6} C_eff={:.3}",
                m.n,
                m.mean,
                m.std_err,
                m.n as f64 / n as f64,
                m.mean * n as f64 / m.n as f64
            );
        }
        println!("  1/N = {:.6}", 1.0 / n as f64);
    }
    println!("bound_term(200,0) = {}", bound_term(200, 0.0));

    let cfg = EnsembleConfig::new(1000, EntryModel::ComplexGaussian, 0);
    let h = sample_matrix(&cfg);
    let t = Instant::now();
    let s = SpectrumSample::from_matrix(&h)?;
    println!("N=1000 solve {:.3}s, trace defect {:.3e}", t.elapsed().as_secs_f64(), s.trace_defect());
    Ok(())
}
