//! Erdős–Turán type bounds in circle, first-kind and weighted second-kind
//! form, the moment-only envelope bound at an arbitrary point, and empirical
//! calibration of the universal constants.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_zeros, sigma_tail, ChebKind};
use crate::envelope::{bound_terms, build_envelope, CmsEnvelope, EnvelopeFamily, MAX_N0};
use crate::error::{Error, Result};
use crate::measures::{
    arc_discrepancy, fourier, moments, pointwise_discrepancy, true_discrepancy, DiscreteMeasure,
    Domain, MomentKind, MomentSequence,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_value: f64,
    pub leading: f64,
    /// Per-order moment contributions, already weighted.
    pub terms: Vec<f64>,
    pub n0: usize,
    pub x0: Option<f64>,
    pub k_used: f64,
}

impl BoundReport {
    fn new(leading: f64, terms: Vec<f64>, n0: usize, x0: Option<f64>, k: f64) -> Self {
        let bound_value = k * (leading + terms.iter().sum::<f64>());
        Self {
            bound_value,
            leading,
            terms,
            n0,
            x0,
            k_used: k,
        }
    }
}

/// `ρ(x; n0) = max(1 − |x|, n0⁻²)`.
pub fn rho(x: f64, n0: usize) -> f64 {
    let n = n0 as f64;
    (1.0 - x.abs()).max(1.0 / (n * n))
}

fn require(m: &MomentSequence, kind: MomentKind, n0: usize) -> Result<()> {
    if n0 == 0 {
        return Err(Error::InvalidArgument("n0 must be at least 1".into()));
    }
    if m.kind != kind {
        return Err(Error::MomentKindMismatch {
            expected: kind,
            found: m.kind,
        });
    }
    if m.len() < n0 {
        return Err(Error::InsufficientMoments {
            needed: n0,
            available: m.len(),
        });
    }
    Ok(())
}

fn harmonic_terms(m: &MomentSequence, n0: usize, factor: f64) -> Vec<f64> {
    (1..=n0).map(|n| factor * m.abs(n) / n as f64).collect()
}

/// `K (1/n0 + Σ_{n ≤ n0} |ν̂(n)| / n)`, bounding arc discrepancy on the circle.
pub fn et_circle(fourier: &MomentSequence, n0: usize, k: f64) -> Result<BoundReport> {
    require(fourier, MomentKind::Fourier, n0)?;
    let terms = harmonic_terms(fourier, n0, 1.0);
    Ok(BoundReport::new(1.0 / n0 as f64, terms, n0, None, k))
}

/// `K (1/n0 + Σ_{n ≤ n0} |∫T_n dμ| / n)`, bounding discrepancy against σ₁.
pub fn et_interval_t(tmoments: &MomentSequence, n0: usize, k: f64) -> Result<BoundReport> {
    require(tmoments, MomentKind::T, n0)?;
    let terms = harmonic_terms(tmoments, n0, 1.0);
    Ok(BoundReport::new(1.0 / n0 as f64, terms, n0, None, k))
}

/// `K (ρ/n0 + √ρ Σ_{n ≤ n0} |∫U_n dμ| / n)` with `ρ = ρ(x0; n0)`, bounding
/// `|μ[x0,∞) − σ₂[x0,∞)|`.
pub fn et_interval_u(umoments: &MomentSequence, n0: usize, x0: f64, k: f64) -> Result<BoundReport> {
    require(umoments, MomentKind::U, n0)?;
    let r = rho(x0, n0);
    let terms = harmonic_terms(umoments, n0, r.sqrt());
    Ok(BoundReport::new(r / n0 as f64, terms, n0, Some(x0), k))
}

/// Order of the envelope nodes used for a bound with parameter `n0`:
/// `m0 = ⌈n0/2⌉ + 1`.
pub fn envelope_order(n0: usize) -> usize {
    n0.div_ceil(2) + 1
}

/// Largest `n0` accepted by the envelope bound.
pub fn max_cms_n0() -> usize {
    2 * (MAX_N0 - 1)
}

fn cms_combine(
    kind: ChebKind,
    zeros: &[f64],
    x0: f64,
    n0: usize,
    mut side: impl FnMut(usize) -> Result<(f64, Vec<f64>)>,
) -> Result<BoundReport> {
    let m0 = zeros.len();
    let i = zeros.partition_point(|&z| z < x0);
    if i < m0 && zeros[i] == x0 {
        let (lead, terms) = side(i)?;
        return Ok(BoundReport::new(lead, terms, n0, Some(x0), 1.0));
    }
    let s0 = sigma_tail(kind, x0);
    // left neighbour bounds from above, right neighbour from below; a missing
    // neighbour contributes the trivial bound 1 or 0 on the tail of μ
    let left = if i > 0 {
        let (lead, terms) = side(i - 1)?;
        (lead + (sigma_tail(kind, zeros[i - 1]) - s0).abs(), terms)
    } else {
        (1.0 - s0, Vec::new())
    };
    let right = if i < m0 {
        let (lead, terms) = side(i)?;
        (lead + (s0 - sigma_tail(kind, zeros[i])).abs(), terms)
    } else {
        (s0, Vec::new())
    };
    let total = |s: &(f64, Vec<f64>)| s.0 + s.1.iter().sum::<f64>();
    let (lead, terms) = if total(&left) >= total(&right) { left } else { right };
    Ok(BoundReport::new(lead, terms, n0, Some(x0), 1.0))
}

fn cms_precheck(eps: &MomentSequence, kind: ChebKind, n0: usize) -> Result<usize> {
    if n0 == 0 || n0 > max_cms_n0() {
        return Err(Error::InvalidArgument(format!(
            "n0 must lie in 1..={}",
            max_cms_n0()
        )));
    }
    let expected = MomentKind::from(kind);
    if eps.kind != expected {
        return Err(Error::MomentKindMismatch {
            expected,
            found: eps.kind,
        });
    }
    let m0 = envelope_order(n0);
    if eps.len() < 2 * m0 - 2 {
        return Err(Error::InsufficientMoments {
            needed: 2 * m0 - 2,
            available: eps.len(),
        });
    }
    Ok(m0)
}

/// Rigorous bound on `|μ[x0,∞) − σ[x0,∞)|` (and on the open tail) from the
/// moments of `μ` up to order `2m0 − 2`.
///
/// Envelopes are built at the two zeros of `S_{m0}` adjacent to `x0`; each
/// side adds the σ-mass between its zero and `x0`.
pub fn cms_bound_at(eps: &MomentSequence, kind: ChebKind, x0: f64, n0: usize) -> Result<BoundReport> {
    let m0 = cms_precheck(eps, kind, n0)?;
    let zeros = cheb_zeros(kind, m0);
    cms_combine(kind, &zeros, x0, n0, |i| {
        let env = build_envelope(kind, m0, i + 1)?;
        bound_terms(&env, eps)
    })
}

/// [`cms_bound_at`] with every envelope for one `(kind, n0)` built up front.
#[derive(Clone, Debug)]
pub struct CmsBounder {
    pub kind: ChebKind,
    pub n0: usize,
    family: EnvelopeFamily,
}

impl CmsBounder {
    pub fn new(kind: ChebKind, n0: usize) -> Result<Self> {
        if n0 == 0 || n0 > max_cms_n0() {
            return Err(Error::InvalidArgument(format!(
                "n0 must lie in 1..={}",
                max_cms_n0()
            )));
        }
        let family = EnvelopeFamily::new(kind, envelope_order(n0))?;
        Ok(Self { kind, n0, family })
    }

    pub fn envelopes(&self) -> &[CmsEnvelope] {
        &self.family.envelopes
    }

    pub fn bound_at(&self, eps: &MomentSequence, x0: f64) -> Result<BoundReport> {
        cms_precheck(eps, self.kind, self.n0)?;
        cms_combine(self.kind, self.family.nodes(), x0, self.n0, |i| {
            bound_terms(&self.family.envelopes[i], eps)
        })
    }
}

/// Empirical constants for the circle, first-kind and second-kind inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

/// `n0` values used by the shipped calibration.
pub const CALIBRATION_N0: [usize; 6] = [2, 4, 8, 16, 32, 64];

/// Constants from `calibrate_k(&test_corpus(0), &CALIBRATION_N0)`, rounded up
/// to two significant digits. Regenerate with the `calibrate` CLI subcommand.
pub const CALIBRATED_K: Calibration = Calibration {
    k1: 0.81,
    k2: 0.81,
    k3: 2.6,
};

/// Grid of `x0` values probed for the second-kind ratio, in addition to atoms.
pub fn probe_grid() -> Vec<f64> {
    (0..=480).map(|i| -1.2 + 2.4 * i as f64 / 480.0).collect()
}

/// Largest ratio of true discrepancy to bound (with `K = 1`) for one measure.
/// Line measures yield `(0, k2, k3)`, circle measures `(k1, 0, 0)`.
pub fn calibration_ratios(mu: &DiscreteMeasure, n0_list: &[usize]) -> Result<Calibration> {
    let n_max = n0_list.iter().copied().max().unwrap_or(0);
    let mut out = Calibration {
        k1: 0.0,
        k2: 0.0,
        k3: 0.0,
    };
    match mu.domain() {
        Domain::Circle => {
            let truth = arc_discrepancy(mu);
            let f = fourier(mu, n_max);
            for &n0 in n0_list {
                out.k1 = out.k1.max(truth / et_circle(&f, n0, 1.0)?.bound_value);
            }
        }
        Domain::Line => {
            let truth = true_discrepancy(mu, ChebKind::First).value;
            let t = moments(mu, ChebKind::First, n_max);
            let u = moments(mu, ChebKind::Second, n_max);
            let probes: Vec<f64> = mu
                .atoms()
                .iter()
                .map(|a| a.position)
                .chain(probe_grid())
                .collect();
            for &n0 in n0_list {
                out.k2 = out.k2.max(truth / et_interval_t(&t, n0, 1.0)?.bound_value);
                for &x in &probes {
                    let d = pointwise_discrepancy(mu, ChebKind::Second, x);
                    let b = et_interval_u(&u, n0, x, 1.0)?.bound_value;
                    out.k3 = out.k3.max(d / b);
                }
            }
        }
    }
    Ok(out)
}

/// Smallest constants making every inequality hold on `corpus` for every
/// `n0` in `n0_list`. Order-independent (a max-reduction).
pub fn calibrate_k(corpus: &[DiscreteMeasure], n0_list: &[usize]) -> Result<Calibration> {
    let ratios = corpus
        .par_iter()
        .map(|mu| calibration_ratios(mu, n0_list))
        .collect::<Result<Vec<_>>>()?;
    Ok(ratios.into_iter().fold(
        Calibration {
            k1: 0.0,
            k2: 0.0,
            k3: 0.0,
        },
        |a, b| Calibration {
            k1: a.k1.max(b.k1),
            k2: a.k2.max(b.k2),
            k3: a.k3.max(b.k3),
        },
    ))
}
