//! Polynomial majorant and minorant of a half-line indicator, built by
//! Hermite interpolation at the zeros of `S_{n0}`.
//!
//! For nodes `x_1 < … < x_{n0}` (the zeros of `S_{n0}`) and a pivot index
//! `k0`, the polynomials `P` and `Q` of degree at most `2n0 − 2` satisfy
//!
//! ```text
//! P(x_k) = [k ≥ k0],  Q(x_k) = [k > k0],  P'(x_k) = Q'(x_k) = 0 for k ≠ k0
//! ```
//!
//! and on the whole real line `P ≥ 1_[x_k0, ∞) ≥ 1_(x_k0, ∞) ≥ Q`. Their
//! difference is the square of the Lagrange cardinal polynomial `R` of the
//! pivot node, so `p_0 − q_0 = ∫R² dσ`, which by Gauss exactness is the
//! quadrature weight `λ_k0`. Integrating `P` and `Q` against a measure `μ`
//! with moments `ε_n = ∫S_n dμ` gives
//!
//! ```text
//! |μ[x_k0, ∞) − σ[x_k0, ∞)| ≤ (p_0 − q_0) + Σ_{n=1}^{2n0−2} |ε_n| max(|p_n|, |q_n|).
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use crate::chebyshev::{
    cheb_eval_all, cheb_zeros, gauss_rule, project_coeffs, series_multiply, ChebKind, ChebSeries,
};
use crate::error::{Error, Result};
use crate::linalg::qr_solve;
use crate::measures::{MomentKind, MomentSequence};

/// Largest supported `n0`; Hermite interpolation loses accuracy past this.
pub const MAX_N0: usize = 64;

/// Scaled residual above which the interpolation solve is rejected.
pub const RESIDUAL_LIMIT: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct CmsEnvelope {
    pub kind: ChebKind,
    pub n0: usize,
    /// 1-based pivot index into `nodes`.
    pub k0: usize,
    pub nodes: Vec<f64>,
    pub upper: ChebSeries,
    pub lower: ChebSeries,
    pub cardinal: ChebSeries,
    /// Coefficients `p_0..p_{2n0−2}` of the majorant.
    pub p: Vec<f64>,
    /// Coefficients `q_0..q_{2n0−2}` of the minorant.
    pub q: Vec<f64>,
    pub gauss_weights: Vec<f64>,
    pub solve_residual: f64,
}

impl CmsEnvelope {
    /// The pivot node `x_k0`.
    pub fn pivot(&self) -> f64 {
        self.nodes[self.k0 - 1]
    }

    /// Highest coefficient index, `2n0 − 2`.
    pub fn top_index(&self) -> usize {
        2 * self.n0 - 2
    }

    pub fn p0_minus_q0(&self) -> f64 {
        self.p[0] - self.q[0]
    }

    /// Verifies every structural property of the construction.
    ///
    /// The ordering is checked on `grid_points` equispaced points of
    /// `[−1 − 2/n0, 1 + 2/n0]` plus the nodes themselves.
    pub fn check(&self, grid_points: usize) -> EnvelopeCheck {
        let k0 = self.k0;
        let dp = self.upper.derivative();
        let dq = self.lower.derivative();

        let mut interp: f64 = 0.0;
        for (i, &x) in self.nodes.iter().enumerate() {
            let k = i + 1;
            let p_target = if k >= k0 { 1.0 } else { 0.0 };
            let q_target = if k > k0 { 1.0 } else { 0.0 };
            let r_target = if k == k0 { 1.0 } else { 0.0 };
            interp = interp
                .max((self.upper.eval(x) - p_target).abs())
                .max((self.lower.eval(x) - q_target).abs())
                .max((self.cardinal.eval(x) - r_target).abs());
            if k != k0 {
                interp = interp.max(dp.eval(x).abs()).max(dq.eval(x).abs());
            }
        }

        let pivot = self.pivot();
        let lo = -1.0 - 2.0 / self.n0 as f64;
        let hi = 1.0 + 2.0 / self.n0 as f64;
        let grid = (0..grid_points)
            .map(|i| lo + (hi - lo) * i as f64 / (grid_points.max(2) - 1) as f64)
            .chain(self.nodes.iter().copied());
        let mut upper_margin = f64::INFINITY;
        let mut lower_margin = f64::INFINITY;
        for x in grid {
            let closed = if x >= pivot { 1.0 } else { 0.0 };
            let open = if x > pivot { 1.0 } else { 0.0 };
            upper_margin = upper_margin.min(self.upper.eval(x) - closed);
            lower_margin = lower_margin.min(open - self.lower.eval(x));
        }

        let d = self.top_index();
        let r = &self.cardinal;
        let r_sq = project_coeffs(|x| r.eval(x).powi(2), d, self.kind);
        let pq_residual = (0..=d)
            .map(|n| (self.p[n] - self.q[n] - r_sq[n]).abs())
            .fold(0.0, f64::max);

        let lambda = &self.gauss_weights;
        let p0_expect: f64 = lambda[k0 - 1..].iter().sum();
        let q0_expect: f64 = lambda[k0..].iter().sum();
        let gauss_residual = (self.p[0] - p0_expect)
            .abs()
            .max((self.q[0] - q0_expect).abs())
            .max((self.p0_minus_q0() - lambda[k0 - 1]).abs());

        EnvelopeCheck {
            interpolation_residual: interp,
            upper_margin,
            lower_margin,
            pq_residual,
            gauss_residual,
            passed: interp <= 1e-8
                && upper_margin >= -1e-8
                && lower_margin >= -1e-8
                && pq_residual <= 1e-8
                && gauss_residual <= 1e-10,
        }
    }
}

/// Outcome of [`CmsEnvelope::check`].
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeCheck {
    pub interpolation_residual: f64,
    /// `min (P − 1_[x_k0, ∞))` over the grid.
    pub upper_margin: f64,
    /// `min (1_(x_k0, ∞) − Q)` over the grid.
    pub lower_margin: f64,
    pub pq_residual: f64,
    pub gauss_residual: f64,
    pub passed: bool,
}

fn check_indices(n0: usize, k0: usize) -> Result<()> {
    if n0 == 0 || n0 > MAX_N0 || k0 == 0 || k0 > n0 {
        return Err(Error::IndexOutOfRange {
            n0,
            k0,
            max: MAX_N0,
        });
    }
    Ok(())
}

/// Cardinal polynomial `R = S_{n0}(x) / (S'_{n0}(x_k0) (x − x_k0))`.
///
/// `S_{n0}` is deflated by its root `x_k0` with synthetic division in the
/// Chebyshev basis; since `S_{n0} = (x − x_k0) D`, the quotient `D` satisfies
/// `D(x_k0) = S'_{n0}(x_k0)`, which supplies the scale.
pub fn build_r(kind: ChebKind, n0: usize, k0: usize) -> Result<ChebSeries> {
    check_indices(n0, k0)?;
    let root = cheb_zeros(kind, n0)[k0 - 1];
    let quotient = ChebSeries::new(kind, deflate(kind, n0, root));
    let slope = quotient.eval(root);
    Ok(quotient.scale(1.0 / slope))
}

/// Coefficients of `S_n / (x − root)` in the basis of `kind`.
fn deflate(kind: ChebKind, n: usize, root: f64) -> Vec<f64> {
    // (x − r) Σ b_j S_j = S_n, matched from the top coefficient down using
    // x S_j = (S_{j+1} + S_{j−1}) / 2 (j ≥ 1) and x T_0 = T_1, x U_0 = U_1 / 2.
    let a = |k: usize| if k == n { 1.0 } else { 0.0 };
    let mut b = vec![0.0; n + 2];
    for k in (1..=n).rev() {
        b[k - 1] = match (kind, k) {
            (ChebKind::First, 1) => a(1) + root * b[1] - 0.5 * b[2],
            _ => 2.0 * (a(k) + root * b[k]) - b[k + 1],
        };
    }
    b.truncate(n);
    b
}

/// Solves the Hermite problem for the minorant `Q` in the first-kind basis.
fn solve_lower(nodes: &[f64], k0: usize) -> Result<(ChebSeries, f64)> {
    let n0 = nodes.len();
    let dim = 2 * n0 - 1;
    let deg = dim - 1;
    let mut a = Vec::with_capacity(dim * dim);
    let mut rhs = Vec::with_capacity(dim);

    for (i, &x) in nodes.iter().enumerate() {
        a.extend(cheb_eval_all(ChebKind::First, deg, x));
        rhs.push(if i + 1 > k0 { 1.0 } else { 0.0 });
    }
    for (i, &x) in nodes.iter().enumerate() {
        if i + 1 == k0 {
            continue;
        }
        // T_j' = j U_{j−1}
        let u = cheb_eval_all(ChebKind::Second, deg, x);
        let mut row: Vec<f64> = (0..=deg)
            .map(|j| if j == 0 { 0.0 } else { j as f64 * u[j - 1] })
            .collect();
        let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        row.iter_mut().for_each(|v| *v /= scale);
        a.extend(row);
        rhs.push(0.0);
    }

    let coeffs = qr_solve(dim, &a, &rhs).ok_or(Error::IllConditioned {
        residual: f64::INFINITY,
        limit: RESIDUAL_LIMIT,
    })?;
    let residual = (0..dim)
        .map(|i| {
            let row = &a[i * dim..(i + 1) * dim];
            let lhs: f64 = row.iter().zip(&coeffs).map(|(r, c)| r * c).sum();
            (lhs - rhs[i]).abs()
        })
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > RESIDUAL_LIMIT {
        return Err(Error::IllConditioned {
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok((ChebSeries::new(ChebKind::First, coeffs), residual))
}

pub fn build_envelope(kind: ChebKind, n0: usize, k0: usize) -> Result<CmsEnvelope> {
    check_indices(n0, k0)?;
    let nodes = cheb_zeros(kind, n0);
    let cardinal = build_r(kind, n0, k0)?;
    let r_sq = series_multiply(&cardinal, &cardinal)?;
    // extreme pivots: P ≡ 1 when k0 = 1, Q ≡ 0 when k0 = n0
    let (upper, lower, solve_residual) = if k0 == 1 {
        let one = ChebSeries::constant(kind, 1.0);
        let lower = one.sub(&r_sq)?;
        (one, lower, 0.0)
    } else if k0 == n0 {
        (r_sq, ChebSeries::zero(kind), 0.0)
    } else {
        let (q, res) = solve_lower(&nodes, k0)?;
        let lower = q.to_kind(kind);
        (lower.add(&r_sq)?, lower, res)
    };

    let d = 2 * n0 - 2;
    let p: Vec<f64> = (0..=d).map(|n| upper.coeff(n)).collect();
    let q: Vec<f64> = (0..=d).map(|n| lower.coeff(n)).collect();
    let gauss_weights = gauss_rule(kind, n0).weights;

    Ok(CmsEnvelope {
        kind,
        n0,
        k0,
        nodes,
        upper,
        lower,
        cardinal,
        p,
        q,
        gauss_weights,
        solve_residual,
    })
}

/// `∫R² dσ` by a Gauss rule one node larger than needed.
pub fn p0_minus_q0(env: &CmsEnvelope) -> f64 {
    gauss_rule(env.kind, env.n0 + 1).integrate(|x| env.cardinal.eval(x).powi(2))
}

/// `∫_{x0}^∞ T_n dσ₁ = sin(nθ₀) / (nπ)` with `θ₀ = arccos x0`.
pub fn tail_integral(n: usize, x0: f64) -> f64 {
    assert!(n >= 1);
    let theta = x0.clamp(-1.0, 1.0).acos();
    (n as f64 * theta).sin() / (n as f64 * PI)
}

/// The terms of [`discrepancy_bound`]: `p_0 − q_0` and
/// `|ε_n| max(|p_n|, |q_n|)` for `n = 1..=2n0−2`.
pub fn bound_terms(env: &CmsEnvelope, eps: &MomentSequence) -> Result<(f64, Vec<f64>)> {
    let expected = MomentKind::from(env.kind);
    if eps.kind != expected {
        return Err(Error::MomentKindMismatch {
            expected,
            found: eps.kind,
        });
    }
    let top = env.top_index();
    if eps.len() < top {
        return Err(Error::InsufficientMoments {
            needed: top,
            available: eps.len(),
        });
    }
    let terms = (1..=top)
        .map(|n| eps.abs(n) * env.p[n].abs().max(env.q[n].abs()))
        .collect();
    Ok((env.p0_minus_q0(), terms))
}

/// Rigorous bound on `|μ[x_k0, ∞) − σ[x_k0, ∞)|` from the moments of `μ`.
///
/// The same bound holds for the open tail `μ(x_k0, ∞)`.
pub fn discrepancy_bound(env: &CmsEnvelope, eps: &MomentSequence) -> Result<f64> {
    let (lead, terms) = bound_terms(env, eps)?;
    Ok(lead + terms.iter().sum::<f64>())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayEntry {
    pub n: usize,
    pub p_abs: f64,
    pub q_abs: f64,
}

impl DecayEntry {
    /// `n · max(|p_n|, |q_n|)`.
    pub fn scaled(&self) -> f64 {
        self.n as f64 * self.p_abs.max(self.q_abs)
    }
}

/// `|p_n|` and `|q_n|` for `n = 1..=2n0−2`.
pub fn coefficient_decay(env: &CmsEnvelope) -> Vec<DecayEntry> {
    (1..=env.top_index())
        .map(|n| DecayEntry {
            n,
            p_abs: env.p[n].abs(),
            q_abs: env.q[n].abs(),
        })
        .collect()
}

/// All envelopes for one `(kind, n0)`, indexed by `k0 − 1`.
#[derive(Clone, Debug)]
pub struct EnvelopeFamily {
    pub kind: ChebKind,
    pub n0: usize,
    pub envelopes: Vec<CmsEnvelope>,
}

impl EnvelopeFamily {
    pub fn new(kind: ChebKind, n0: usize) -> Result<Self> {
        let envelopes = (1..=n0)
            .map(|k0| build_envelope(kind, n0, k0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind,
            n0,
            envelopes,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.envelopes[0].nodes
    }
}
