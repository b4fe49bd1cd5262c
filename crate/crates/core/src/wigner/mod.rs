//! Monte-Carlo experiments on Wigner matrices: counting functions of the
//! scaled spectrum against the semicircle law, their variance, and the
//! second-kind Chebyshev moments of the empirical spectral measure.
//!
//! Trial `t` of a run draws its matrix from a ChaCha8 stream selected by
//! `(seed, t)`, so results do not depend on how trials are scheduled across
//! threads. Reductions run in trial order.

pub mod eigen;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_eval_all, sigma_tail, ChebKind};
use crate::error::{Error, Result};

pub use eigen::{eigenvalues, HermitianMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryModel {
    ComplexGaussian,
    ComplexRademacher,
    RealGaussian,
    RealRademacher,
}

impl EntryModel {
    pub const ALL: [EntryModel; 4] = [
        EntryModel::ComplexGaussian,
        EntryModel::ComplexRademacher,
        EntryModel::RealGaussian,
        EntryModel::RealRademacher,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntryModel::ComplexGaussian => "complex_gaussian",
            EntryModel::ComplexRademacher => "complex_rademacher",
            EntryModel::RealGaussian => "real_gaussian",
            EntryModel::RealRademacher => "real_rademacher",
        }
    }

    /// 2 for the complex Gaussian model (which makes `E∫U₂ dμ_A = 1/N`), 1 otherwise.
    pub fn default_diag_variance(self) -> f64 {
        match self {
            EntryModel::ComplexGaussian => 2.0,
            _ => 1.0,
        }
    }

    fn off_diagonal(self, rng: &mut ChaCha8Rng) -> Complex64 {
        let sign = |rng: &mut ChaCha8Rng| if rng.random::<bool>() { 1.0 } else { -1.0 };
        match self {
            EntryModel::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
            EntryModel::ComplexRademacher => {
                Complex64::new(sign(rng), sign(rng)) * std::f64::consts::FRAC_1_SQRT_2
            }
            EntryModel::RealGaussian => Complex64::new(rng.sample(StandardNormal), 0.0),
            EntryModel::RealRademacher => Complex64::new(sign(rng), 0.0),
        }
    }

    fn diagonal(self, rng: &mut ChaCha8Rng, sd: f64) -> f64 {
        match self {
            EntryModel::ComplexGaussian | EntryModel::RealGaussian => {
                sd * rng.sample::<f64, _>(StandardNormal)
            }
            EntryModel::ComplexRademacher | EntryModel::RealRademacher => {
                if rng.random::<bool>() {
                    sd
                } else {
                    -sd
                }
            }
        }
    }
}

impl fmt::Display for EntryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntryModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown ensemble `{s}` (expected one of complex_gaussian, complex_rademacher, real_gaussian, real_rademacher)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Matrix dimension `N`.
    pub n: usize,
    pub entry_model: EntryModel,
    pub diag_variance: f64,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(n: usize, entry_model: EntryModel, seed: u64) -> Self {
        Self {
            n,
            entry_model,
            diag_variance: entry_model.default_diag_variance(),
            seed,
        }
    }

    pub fn with_diag_variance(mut self, v: f64) -> Self {
        self.diag_variance = v;
        self
    }
}

/// Independent generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// The matrix of trial 0.
pub fn sample_matrix(config: &EnsembleConfig) -> HermitianMatrix {
    sample_matrix_trial(config, 0)
}

/// Independent entries on and above the diagonal, drawn row by row.
pub fn sample_matrix_trial(config: &EnsembleConfig, trial: u64) -> HermitianMatrix {
    let mut rng = trial_rng(config.seed, trial);
    let sd = config.diag_variance.max(0.0).sqrt();
    let model = config.entry_model;
    HermitianMatrix::from_upper(config.n, |i, j| {
        if i == j {
            Complex64::new(model.diagonal(&mut rng, sd), 0.0)
        } else {
            model.off_diagonal(&mut rng)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSample {
    /// Ascending eigenvalues `λ_k`.
    pub eigenvalues: Vec<f64>,
    /// `λ_k / (2√N)`.
    pub scaled_positions: Vec<f64>,
    pub trace: f64,
}

impl SpectrumSample {
    pub fn from_matrix(h: &HermitianMatrix) -> Result<Self> {
        let eigenvalues = eigenvalues(h)?;
        let scale = 2.0 * (h.dim() as f64).sqrt();
        let scaled_positions = eigenvalues.iter().map(|l| l / scale).collect();
        Ok(Self {
            eigenvalues,
            scaled_positions,
            trace: h.trace(),
        })
    }

    /// `|Σλ_k − tr H|`.
    pub fn trace_defect(&self) -> f64 {
        (self.eigenvalues.iter().sum::<f64>() - self.trace).abs()
    }

    /// `#{k : λ_k > 2√N x0}`.
    pub fn count_above(&self, x0: f64) -> usize {
        let n = self.scaled_positions.len();
        n - self.scaled_positions.partition_point(|&x| x <= x0)
    }

    /// `∫U_n dμ_A` for `n = 1..=n_max`.
    pub fn u_moments(&self, n_max: usize) -> Vec<f64> {
        let mut acc = vec![0.0; n_max + 1];
        for &x in &self.scaled_positions {
            for (s, v) in acc.iter_mut().zip(cheb_eval_all(ChebKind::Second, n_max, x)) {
                *s += v;
            }
        }
        let n = self.scaled_positions.len() as f64;
        acc.into_iter().skip(1).map(|s| s / n).collect()
    }
}

/// Spectra of trials `0..trials`, in trial order.
pub fn run_trials(config: &EnsembleConfig, trials: usize) -> Result<Vec<SpectrumSample>> {
    if config.n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|t| SpectrumSample::from_matrix(&sample_matrix_trial(config, t)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub x0: f64,
    pub mean_count: f64,
    /// `N σ₂(x0, ∞)`.
    pub expected_count: f64,
    pub error: f64,
    /// `max(N^{2/3}(1 − |x0|), 1)`.
    pub bound_term: f64,
    /// Sample variance of the count (zero for a single trial).
    pub variance: f64,
    /// Fraction of trials whose count is farther than `bound_term` from the expectation.
    pub deviation_frequency: f64,
}

impl CountRecord {
    pub fn ratio(&self) -> f64 {
        self.error / self.bound_term
    }

    /// `variance / bound_term^{5/2}`.
    pub fn variance_ratio(&self) -> f64 {
        self.variance / self.bound_term.powf(2.5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentRecord {
    pub n: usize,
    pub mean: f64,
    pub std_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: EnsembleConfig,
    pub trials: usize,
    pub counts: Vec<CountRecord>,
    pub moments: Vec<MomentRecord>,
}

impl ExperimentResult {
    pub fn max_ratio(&self) -> f64 {
        self.counts.iter().map(CountRecord::ratio).fold(0.0, f64::max)
    }

    pub fn max_variance_ratio(&self) -> f64 {
        self.counts
            .iter()
            .map(CountRecord::variance_ratio)
            .fold(0.0, f64::max)
    }
}

/// `max(N^{2/3}(1 − |x0|), 1)`.
pub fn bound_term(n: usize, x0: f64) -> f64 {
    ((n as f64).powf(2.0 / 3.0) * (1.0 - x0.abs())).max(1.0)
}

/// Largest `n` with `n ≤ N^{1/3}`.
pub fn moment_range(n: usize) -> usize {
    let mut k = (n as f64).cbrt().round() as usize + 1;
    while k > 0 && k * k * k > n {
        k -= 1;
    }
    k
}

fn mean_and_var(xs: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let len = xs.len() as f64;
    let mean = xs.clone().sum::<f64>() / len;
    let var = if xs.len() > 1 {
        xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (len - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Summarizes pre-computed spectra over an `x0` grid and `U_1..U_{n_max}`.
pub fn summarize(
    config: &EnsembleConfig,
    spectra: &[SpectrumSample],
    x0_grid: &[f64],
    n_max: usize,
) -> ExperimentResult {
    let n = config.n;
    let counts = x0_grid
        .iter()
        .map(|&x0| {
            let c: Vec<f64> = spectra.iter().map(|s| s.count_above(x0) as f64).collect();
            let (mean_count, variance) = mean_and_var(c.iter().copied());
            let expected_count = n as f64 * sigma_tail(ChebKind::Second, x0);
            let bt = bound_term(n, x0);
            let deviations = c.iter().filter(|&&v| (v - expected_count).abs() > bt).count();
            CountRecord {
                x0,
                mean_count,
                expected_count,
                error: (mean_count - expected_count).abs(),
                bound_term: bt,
                variance,
                deviation_frequency: deviations as f64 / c.len() as f64,
            }
        })
        .collect();

    let per_trial: Vec<Vec<f64>> = spectra.iter().map(|s| s.u_moments(n_max)).collect();
    let moments = (1..=n_max)
        .map(|k| {
            let (mean, var) = mean_and_var(per_trial.iter().map(|m| m[k - 1]));
            MomentRecord {
                n: k,
                mean,
                std_err: (var / spectra.len() as f64).sqrt(),
            }
        })
        .collect();

    ExperimentResult {
        config: *config,
        trials: spectra.len(),
        counts,
        moments,
    }
}

/// Counting function, variance and `U`-moment statistics in one pass.
pub fn run_experiment(
    config: &EnsembleConfig,
    x0_grid: &[f64],
    n_max: usize,
    trials: usize,
) -> Result<ExperimentResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let spectra = run_trials(config, trials)?;
    Ok(summarize(config, &spectra, x0_grid, n_max))
}

/// Monte-Carlo mean and standard error of `∫U_n dμ_A`, `n = 1..=n_max`.
pub fn u_moment_experiment(
    config: &EnsembleConfig,
    n_max: usize,
    trials: usize,
) -> Result<Vec<MomentRecord>> {
    Ok(run_experiment(config, &[], n_max, trials)?.moments)
}

/// Mean of `#{k : λ_k > 2√N x0}` against `N σ₂(x0, ∞)` over the grid.
pub fn counting_experiment(
    config: &EnsembleConfig,
    x0_grid: &[f64],
    trials: usize,
) -> Result<ExperimentResult> {
    run_experiment(config, x0_grid, 0, trials)
}

/// Smallest trial count accepted by [`variance_experiment`].
pub const MIN_VARIANCE_TRIALS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceRecord {
    pub x0: f64,
    pub variance: f64,
    /// `max(N^{2/3}(1 − |x0|), 1)^{5/2}`.
    pub reference: f64,
}

impl VarianceRecord {
    pub fn ratio(&self) -> f64 {
        self.variance / self.reference
    }
}

pub fn variance_experiment(
    config: &EnsembleConfig,
    x0_grid: &[f64],
    trials: usize,
) -> Result<Vec<VarianceRecord>> {
    if trials < MIN_VARIANCE_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "variance estimates need at least {MIN_VARIANCE_TRIALS} trials, got {trials}"
        )));
    }
    let res = counting_experiment(config, x0_grid, trials)?;
    Ok(variance_records(&res))
}

pub fn variance_records(res: &ExperimentResult) -> Vec<VarianceRecord> {
    res.counts
        .iter()
        .map(|c| VarianceRecord {
            x0: c.x0,
            variance: c.variance,
            reference: c.bound_term.powf(2.5),
        })
        .collect()
}
