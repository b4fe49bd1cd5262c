//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage or input errors, 3 on numerical
//! failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{
    calibrate_k, et_interval_t, et_interval_u, rho, CmsBounder, CALIBRATION_N0,
};
use crate::chebyshev::{sigma_tail, ChebKind};
use crate::envelope::{build_envelope, MAX_N0};
use crate::error::{Error, Result};
use crate::measures::{
    moments, pointwise_discrepancy, sharpness_witness, test_corpus, true_discrepancy,
    DiscreteMeasure, Domain,
};
use crate::wigner::{
    moment_range, run_experiment, variance_records, EnsembleConfig, EntryModel,
    MIN_VARIANCE_TRIALS,
};

/// Largest matrix dimension accepted by `wigner`.
pub const MAX_WIGNER_N: usize = 1000;

/// Points in the default `x0` grid on `[−1.2, 1.2]`.
pub const DEFAULT_GRID_POINTS: usize = 201;

/// Samples of `P` and `Q` written by `envelope`.
const ENVELOPE_SAMPLES: usize = 201;

/// Grid used by the envelope check.
const CHECK_GRID: usize = 10_001;

#[derive(Debug, Parser)]
#[command(name = "cmsdisc", version, about = "Polynomial envelope discrepancy bounds")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    T,
    U,
}

impl From<KindArg> for ChebKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::T => ChebKind::First,
            KindArg::U => ChebKind::Second,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the majorant/minorant pair at one Chebyshev zero.
    Envelope {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        k0: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate true discrepancy, the Erdős–Turán bound and the envelope bound.
    Bound {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n0: usize,
        #[arg(long, allow_negative_numbers = true)]
        x0: Option<f64>,
        #[arg(long = "K", default_value_t = 1.0)]
        k: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte-Carlo counting, variance and moment statistics for Wigner matrices.
    Wigner {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        ensemble: String,
        #[arg(long = "diag-var")]
        diag_var: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write per-x0 variance against its reference curve.
        #[arg(long)]
        variance: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the sharpness witness measure and its discrepancy report.
    Witness {
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibrate the Erdős–Turán constants on the test corpus.
    Calibrate {
        #[arg(long = "corpus-seed", default_value_t = 0)]
        corpus_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .try_init();
    let cli = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|()| execute(&cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 3 for numerical failures, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IllConditioned { .. } | Error::NoConvergence { .. } => 3,
        _ => 2,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("CMSDISC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidArgument(format!("CMSDISC_THREADS must be an integer >= 1, got `{v}`")))?;
    // a pool set up by an earlier call in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Envelope { kind, n0, k0, out } => cmd_envelope((*kind).into(), *n0, *k0, out),
        Command::Bound {
            measure,
            kind,
            n0,
            x0,
            k,
            out,
        } => cmd_bound(measure, (*kind).into(), *n0, *x0, *k, out),
        Command::Wigner {
            n,
            trials,
            ensemble,
            diag_var,
            seed,
            variance,
            out,
        } => cmd_wigner(*n, *trials, ensemble, *diag_var, *seed, *variance, out),
        Command::Witness { n0, out } => cmd_witness(*n0, out),
        Command::Calibrate { corpus_seed, out } => cmd_calibrate(*corpus_seed, out),
    }
}

/// `{out}{suffix}`, e.g. `run.csv` + `.config.json`.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn kind_name(kind: ChebKind) -> &'static str {
    match kind {
        ChebKind::First => "t",
        ChebKind::Second => "u",
    }
}

/// `points` equispaced values on `[−1.2, 1.2]`.
pub fn default_grid(points: usize) -> Vec<f64> {
    let d = (points - 1) as f64;
    (0..points).map(|i| -1.2 + 2.4 * i as f64 / d).collect()
}

pub fn cmd_envelope(kind: ChebKind, n0: usize, k0: usize, out: &Path) -> Result<()> {
    let config = json!({ "command": "envelope", "kind": kind_name(kind), "n0": n0, "k0": k0 });
    log::info!("config: {config}");
    if n0 == 0 || n0 > MAX_N0 || k0 == 0 || k0 > n0 {
        return Err(Error::IndexOutOfRange { n0, k0, max: MAX_N0 });
    }
    let env = build_envelope(kind, n0, k0)?;
    let check = env.check(CHECK_GRID);
    if !check.passed {
        log::warn!("envelope check failed: {check:?}");
    }
    let grid: Vec<_> = (0..ENVELOPE_SAMPLES)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (ENVELOPE_SAMPLES - 1) as f64;
            json!({ "x": x, "p": env.upper.eval(x), "q": env.lower.eval(x) })
        })
        .collect();
    let doc = json!({
        "config": config,
        "nodes": env.nodes,
        "pivot": env.pivot(),
        "lambda": env.gauss_weights,
        "p": env.p,
        "q": env.q,
        "p0_minus_q0": env.p0_minus_q0(),
        "solve_residual": env.solve_residual,
        "envelope_check": check,
        "grid": grid,
    });
    write_json(out, &doc)
}

fn load_measure(path: &Path) -> Result<DiscreteMeasure> {
    if !path.is_file() {
        return Err(Error::InvalidArgument(format!(
            "measure file not found: {}",
            path.display()
        )));
    }
    let (mu, raw_sum) = DiscreteMeasure::read_csv(path).map_err(|e| match e {
        Error::Csv(c) => Error::InvalidMeasure(format!("{}: {c}", path.display())),
        other => other,
    })?;
    log::info!("loaded {} atoms from {} (raw weight sum {raw_sum})", mu.len(), path.display());
    Ok(mu)
}

#[derive(Serialize)]
struct BoundRow {
    x0: f64,
    true_discrepancy: f64,
    et_bound: f64,
    cms_exact_bound: f64,
}

pub fn cmd_bound(
    measure: &Path,
    kind: ChebKind,
    n0: usize,
    x0: Option<f64>,
    k: f64,
    out: &Path,
) -> Result<()> {
    let config = json!({
        "command": "bound",
        "measure": measure.display().to_string(),
        "kind": kind_name(kind),
        "n0": n0,
        "x0": x0,
        "k": k,
        "grid_points": if x0.is_some() { 1 } else { DEFAULT_GRID_POINTS },
    });
    log::info!("config: {config}");
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidArgument(format!("--K must be positive, got {k}")));
    }
    let mu = load_measure(measure)?;
    if mu.domain() != Domain::Line {
        return Err(Error::InvalidMeasure(format!(
            "{}: bound needs a `position,weight` measure on the line",
            measure.display()
        )));
    }
    let bounder = CmsBounder::new(kind, n0)?;
    let top = bounder.envelopes().first().map_or(0, |e| e.top_index());
    let eps = moments(&mu, kind, n0.max(top));
    let grid = x0.map_or_else(|| default_grid(DEFAULT_GRID_POINTS), |x| vec![x]);

    let mut w = csv::Writer::from_path(out)?;
    for &x in &grid {
        let et = match kind {
            ChebKind::First => et_interval_t(&eps, n0, k)?,
            ChebKind::Second => et_interval_u(&eps, n0, x, k)?,
        };
        w.serialize(BoundRow {
            x0: x,
            true_discrepancy: pointwise_discrepancy(&mu, kind, x),
            et_bound: et.bound_value,
            cms_exact_bound: bounder.bound_at(&eps, x)?.bound_value,
        })?;
    }
    w.flush()?;
    write_json(&sidecar(out, ".config.json"), &config)
}

#[derive(Serialize)]
struct CountRow {
    x0: f64,
    mean_count: f64,
    expected_count: f64,
    error: f64,
    bound_term: f64,
    variance: f64,
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    u_moment_mean: f64,
    std_err: f64,
}

#[derive(Serialize)]
struct VarianceRow {
    x0: f64,
    variance: f64,
    reference: f64,
    ratio: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_wigner(
    n: usize,
    trials: usize,
    ensemble: &str,
    diag_var: Option<f64>,
    seed: u64,
    variance: bool,
    out: &Path,
) -> Result<()> {
    let model: EntryModel = ensemble.parse()?;
    let config = EnsembleConfig::new(n, model, seed)
        .with_diag_variance(diag_var.unwrap_or(model.default_diag_variance()));
    let echo = json!({
        "command": "wigner",
        "ensemble": config,
        "trials": trials,
        "variance": variance,
        "grid_points": DEFAULT_GRID_POINTS,
    });
    log::info!("config: {echo}");
    if n == 0 || n > MAX_WIGNER_N {
        return Err(Error::InvalidArgument(format!("--N must lie in 1..={MAX_WIGNER_N}, got {n}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    if !(config.diag_variance.is_finite() && config.diag_variance >= 0.0) {
        return Err(Error::InvalidArgument("--diag-var must be a finite value >= 0".into()));
    }
    if variance && trials < MIN_VARIANCE_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "--variance needs at least {MIN_VARIANCE_TRIALS} trials"
        )));
    }

    let res = run_experiment(&config, &default_grid(DEFAULT_GRID_POINTS), moment_range(n), trials)?;

    let mut w = csv::Writer::from_path(out)?;
    for c in &res.counts {
        w.serialize(CountRow {
            x0: c.x0,
            mean_count: c.mean_count,
            expected_count: c.expected_count,
            error: c.error,
            bound_term: c.bound_term,
            variance: c.variance,
        })?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(sidecar(out, ".moments.csv"))?;
    for m in &res.moments {
        w.serialize(MomentRow {
            n: m.n,
            u_moment_mean: m.mean,
            std_err: m.std_err,
        })?;
    }
    w.flush()?;

    if variance {
        let mut w = csv::Writer::from_path(sidecar(out, ".variance.csv"))?;
        for v in variance_records(&res) {
            w.serialize(VarianceRow {
                x0: v.x0,
                variance: v.variance,
                reference: v.reference,
                ratio: v.ratio(),
            })?;
        }
        w.flush()?;
    }

    let freq: Vec<_> = res
        .counts
        .iter()
        .map(|c| json!({ "x0": c.x0, "deviation_frequency": c.deviation_frequency }))
        .collect();
    let summary = json!({
        "config": echo,
        "max_error_ratio": res.max_ratio(),
        "max_variance_ratio": res.max_variance_ratio(),
        "deviation_frequency": freq,
    });
    log::info!("max error/bound ratio {}", res.max_ratio());
    write_json(&sidecar(out, ".config.json"), &summary)
}

pub fn cmd_witness(n0: usize, out: &Path) -> Result<()> {
    let config = json!({ "command": "witness", "n0": n0 });
    log::info!("config: {config}");
    if n0 == 0 {
        return Err(Error::InvalidArgument("--n0 must be at least 1".into()));
    }
    let mu = sharpness_witness(n0);
    mu.write_csv(out)?;
    let u = moments(&mu, ChebKind::Second, n0);
    let umoments: Vec<f64> = (1..=n0).map(|n| u.real(n)).collect();
    let x_star = mu.atoms().last().map_or(0.0, |a| a.position);
    let at_star = pointwise_discrepancy(&mu, ChebKind::Second, x_star);
    let r = rho(x_star, n0);
    let report = json!({
        "config": config,
        "atoms": mu.len(),
        "umoments": umoments,
        "max_abs_umoment": umoments.iter().fold(0.0f64, |a, v| a.max(v.abs())),
        "true_discrepancy": true_discrepancy(&mu, ChebKind::Second),
        "extreme_node": x_star,
        "discrepancy_at_extreme_node": at_star,
        "sigma_tail_at_extreme_node": sigma_tail(ChebKind::Second, x_star),
        "rho": r,
        "sharpness_reference": r / (8.0 * n0 as f64),
    });
    write_json(&sidecar(out, ".report.json"), &report)
}

pub fn cmd_calibrate(corpus_seed: u64, out: &Path) -> Result<()> {
    let config = json!({ "command": "calibrate", "corpus_seed": corpus_seed, "n0_list": CALIBRATION_N0 });
    log::info!("config: {config}");
    let corpus = test_corpus(corpus_seed);
    let k = calibrate_k(&corpus, &CALIBRATION_N0)?;
    let doc = json!({
        "config": config,
        "corpus_size": corpus.len(),
        "k1": k.k1,
        "k2": k.k2,
        "k3": k.k3,
    });
    write_json(out, &doc)
}
