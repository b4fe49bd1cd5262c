//! Finite atomic probability measures on the line and on the circle.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_eval_all, cheb_zeros, gauss_rule, sigma_tail, ChebKind, QuadratureRule};
use crate::error::{Error, Result};

/// Atoms closer than this after sorting are merged into one.
pub const MERGE_TOL: f64 = 1e-14;

/// Input weights may deviate from a unit sum by this much without a warning.
pub const WEIGHT_SUM_WARN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Line,
    /// Positions are angles in `[0, 2π)`.
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    domain: Domain,
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    /// Builds a probability measure from `(position, weight)` pairs.
    ///
    /// Weights are rescaled to sum to one; circle positions are reduced to
    /// `[0, 2π)`; atoms are sorted and coincident ones merged.
    pub fn new(domain: Domain, atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut raw: Vec<Atom> = Vec::new();
        for (position, weight) in atoms {
            if !position.is_finite() {
                return Err(Error::InvalidMeasure(format!("non-finite position {position}")));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::InvalidMeasure(format!("weight {weight} is not positive")));
            }
            let position = match domain {
                Domain::Line => position,
                Domain::Circle => {
                    let t = position.rem_euclid(TAU);
                    if t >= TAU {
                        0.0
                    } else {
                        t
                    }
                }
            };
            raw.push(Atom { position, weight });
        }
        if raw.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let total: f64 = raw.iter().map(|a| a.weight).sum();
        raw.sort_by(|a, b| a.position.total_cmp(&b.position));

        let mut atoms: Vec<Atom> = Vec::with_capacity(raw.len());
        let mut group_start = f64::NAN;
        for a in raw {
            match atoms.last_mut() {
                Some(last) if a.position - group_start <= MERGE_TOL => {
                    let w = last.weight + a.weight;
                    last.position = (last.position * last.weight + a.position * a.weight) / w;
                    last.weight = w;
                }
                _ => {
                    group_start = a.position;
                    atoms.push(a);
                }
            }
        }
        for a in &mut atoms {
            a.weight /= total;
        }
        Ok(Self { domain, atoms })
    }

    pub fn line(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(Domain::Line, atoms)
    }

    pub fn circle(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(Domain::Circle, atoms)
    }

    pub fn dirac(x: f64) -> Self {
        Self::line([(x, 1.0)]).expect("finite point mass")
    }

    /// Equal weights on the given positions.
    pub fn uniform(domain: Domain, positions: &[f64]) -> Result<Self> {
        Self::new(domain, positions.iter().map(|&x| (x, 1.0)))
    }

    /// The atomic measure carried by a quadrature rule.
    pub fn from_rule(rule: &QuadratureRule) -> Self {
        Self::line(rule.nodes.iter().copied().zip(rule.weights.iter().copied()))
            .expect("Gauss rules have positive weights")
    }

    /// Uniform measure on the `k`-th roots of unity.
    pub fn roots_of_unity(k: usize) -> Self {
        let angles: Vec<f64> = (0..k).map(|j| TAU * j as f64 / k as f64).collect();
        Self::uniform(Domain::Circle, &angles).expect("k ≥ 1")
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `μ[x0, +∞)`.
    pub fn tail(&self, x0: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.position < x0);
        self.atoms[i..].iter().map(|a| a.weight).sum()
    }

    /// `μ(x0, +∞)`.
    pub fn open_tail(&self, x0: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.position <= x0);
        self.atoms[i..].iter().map(|a| a.weight).sum()
    }

    /// Reads the `position,weight` / `theta,weight` CSV format.
    ///
    /// Returns the measure and the raw weight sum before normalization.
    pub fn read_csv(path: &Path) -> Result<(Self, f64)> {
        let mut rdr = csv::Reader::from_path(path)?;
        let headers = rdr.headers()?.clone();
        let domain = match (headers.get(0).map(str::trim), headers.get(1).map(str::trim)) {
            (Some("position"), Some("weight")) => Domain::Line,
            (Some("theta"), Some("weight")) => Domain::Circle,
            _ => {
                return Err(Error::InvalidMeasure(format!(
                    "{}: expected header `position,weight` or `theta,weight`, found `{}`",
                    path.display(),
                    headers.iter().collect::<Vec<_>>().join(",")
                )))
            }
        };
        let mut pairs = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .map(str::trim)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| {
                        Error::InvalidMeasure(format!(
                            "{}: row {} is not two numbers",
                            path.display(),
                            line + 2
                        ))
                    })
            };
            pairs.push((field(0)?, field(1)?));
        }
        let raw_sum: f64 = pairs.iter().map(|p| p.1).sum();
        if (raw_sum - 1.0).abs() > WEIGHT_SUM_WARN {
            log::warn!(
                "{}: weights sum to {raw_sum}, normalizing",
                path.display()
            );
        }
        Ok((Self::new(domain, pairs)?, raw_sum))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        match self.domain {
            Domain::Line => w.write_record(["position", "weight"])?,
            Domain::Circle => w.write_record(["theta", "weight"])?,
        }
        for a in &self.atoms {
            w.write_record([a.position.to_string(), a.weight.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MomentKind {
    T,
    U,
    Fourier,
}

impl From<ChebKind> for MomentKind {
    fn from(kind: ChebKind) -> Self {
        match kind {
            ChebKind::First => MomentKind::T,
            ChebKind::Second => MomentKind::U,
        }
    }
}

/// `ε_1..ε_{n_max}`: Chebyshev moments or Fourier coefficients of a measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    pub kind: MomentKind,
    values: Vec<Complex64>,
}

impl MomentSequence {
    pub fn new(kind: MomentKind, values: Vec<Complex64>) -> Self {
        Self { kind, values }
    }

    pub fn from_real(kind: MomentKind, values: Vec<f64>) -> Self {
        Self::new(kind, values.into_iter().map(Complex64::from).collect())
    }

    pub fn zeros(kind: MomentKind, n_max: usize) -> Self {
        Self::from_real(kind, vec![0.0; n_max])
    }

    /// Highest available order.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `ε_n`, 1-based.
    pub fn get(&self, n: usize) -> Complex64 {
        self.values[n - 1]
    }

    pub fn abs(&self, n: usize) -> f64 {
        self.get(n).norm()
    }

    pub fn real(&self, n: usize) -> f64 {
        self.get(n).re
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `ε_n = Σ_j w_j S_n(x_j)` for `n = 1..=n_max`.
pub fn moments(mu: &DiscreteMeasure, kind: ChebKind, n_max: usize) -> MomentSequence {
    assert_eq!(mu.domain, Domain::Line, "Chebyshev moments need a line measure");
    let mut acc = vec![0.0; n_max + 1];
    for a in &mu.atoms {
        for (s, v) in acc.iter_mut().zip(cheb_eval_all(kind, n_max, a.position)) {
            *s += a.weight * v;
        }
    }
    acc.remove(0);
    MomentSequence::from_real(kind.into(), acc)
}

/// `ν̂(n) = Σ_j w_j e^{−inθ_j}` for `n = 1..=n_max`.
pub fn fourier(nu: &DiscreteMeasure, n_max: usize) -> MomentSequence {
    assert_eq!(nu.domain, Domain::Circle, "Fourier coefficients need a circle measure");
    let values = (1..=n_max)
        .map(|n| {
            nu.atoms
                .iter()
                .map(|a| Complex64::from_polar(a.weight, -(n as f64) * a.position))
                .sum()
        })
        .collect();
    MomentSequence::new(MomentKind::Fourier, values)
}

/// Rotates `arc_center` to zero and pushes the circle measure forward under
/// `θ ↦ cos θ`. Symmetric pairs `±θ` land on the same point, so the result is
/// the pushforward of the symmetrization.
pub fn circle_to_interval(nu: &DiscreteMeasure, arc_center: f64) -> DiscreteMeasure {
    assert_eq!(nu.domain, Domain::Circle);
    DiscreteMeasure::line(
        nu.atoms
            .iter()
            .map(|a| ((a.position - arc_center).cos(), a.weight)),
    )
    .expect("pushforward of a valid measure")
}

/// `max(|μ[x0,∞) − σ[x0,∞)|, |μ(x0,∞) − σ[x0,∞)|)`.
pub fn pointwise_discrepancy(mu: &DiscreteMeasure, kind: ChebKind, x0: f64) -> f64 {
    let s = sigma_tail(kind, x0);
    (mu.tail(x0) - s).abs().max((mu.open_tail(x0) - s).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub value: f64,
    /// Where the supremum is attained (as a one-sided limit when `closed` is false).
    pub x0: f64,
    /// Whether the maximizing tail is `[x0, ∞)` rather than `(x0, ∞)`.
    pub closed: bool,
}

/// `sup_x0 |μ[x0,∞) − σ[x0,∞)|` over both tail conventions.
///
/// Between atoms the tail of `μ` is constant and `σ`'s is continuous and
/// monotone, so the supremum is a one-sided limit at an atom.
pub fn true_discrepancy(mu: &DiscreteMeasure, kind: ChebKind) -> Discrepancy {
    let mut best = Discrepancy {
        value: 0.0,
        x0: mu.atoms[0].position,
        closed: true,
    };
    let mut above = 1.0;
    for a in &mu.atoms {
        let s = sigma_tail(kind, a.position);
        let closed = (above - s).abs();
        above -= a.weight;
        let open = (above.max(0.0) - s).abs();
        for (value, is_closed) in [(closed, true), (open, false)] {
            if value > best.value {
                best = Discrepancy {
                    value,
                    x0: a.position,
                    closed: is_closed,
                };
            }
        }
    }
    best
}

/// `sup_A |ν(A) − |A|/2π|` over closed and open arcs `A`.
///
/// With `G(t) = ν[0, t] − t/2π`, the arc discrepancy is `sup G − inf G`
/// taken over both one-sided limits at every atom (and `G(0⁻) = 0`).
pub fn arc_discrepancy(nu: &DiscreteMeasure) -> f64 {
    assert_eq!(nu.domain, Domain::Circle);
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    let mut mass = 0.0;
    for a in &nu.atoms {
        let t = a.position / TAU;
        let before = mass - t;
        mass += a.weight;
        let after = mass - t;
        hi = hi.max(before).max(after);
        lo = lo.min(before).min(after);
    }
    hi - lo
}

/// The semicircle Gauss measure on `n0 + 1` nodes: its `U`-moments vanish for
/// `1 ≤ n ≤ 2n0 + 1`, yet its jumps keep the discrepancy of order `ρ/n0`.
pub fn sharpness_witness(n0: usize) -> DiscreteMeasure {
    assert!(n0 >= 1);
    DiscreteMeasure::from_rule(&gauss_rule(ChebKind::Second, n0 + 1))
}

/// Number of random line measures in [`test_corpus`].
pub const CORPUS_RANDOM_LINE: usize = 100;
/// Number of random circle measures in [`test_corpus`].
pub const CORPUS_RANDOM_CIRCLE: usize = 20;

/// Deterministic measure corpus for property sweeps.
///
/// Random line measures (1–40 atoms in `[−1.5, 1.5]`, simplex weights) come
/// first, then random circle measures, then the fixed named families:
/// point masses, Gauss discretizations of σ₁ and σ₂, roots of unity and
/// their pushforwards.
pub fn test_corpus(seed: u64) -> Vec<DiscreteMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let simplex = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
        (0..n).map(|_| Exp1.sample(rng)).map(|w: f64| w.max(1e-12)).collect()
    };
    for _ in 0..CORPUS_RANDOM_LINE {
        let n = rng.random_range(1..=40);
        let w = simplex(&mut rng, n);
        let atoms: Vec<(f64, f64)> = w
            .into_iter()
            .map(|w| (rng.random_range(-1.5..=1.5), w))
            .collect();
        out.push(DiscreteMeasure::line(atoms).expect("valid random measure"));
    }
    for _ in 0..CORPUS_RANDOM_CIRCLE {
        let n = rng.random_range(1..=30);
        let w = simplex(&mut rng, n);
        let atoms: Vec<(f64, f64)> = w
            .into_iter()
            .map(|w| (rng.random_range(0.0..TAU), w))
            .collect();
        out.push(DiscreteMeasure::circle(atoms).expect("valid random measure"));
    }

    out.push(DiscreteMeasure::dirac(0.0));
    out.push(DiscreteMeasure::dirac(-2.0));
    out.push(DiscreteMeasure::dirac(1.0));
    for m in [4, 16, 64] {
        let zeros = cheb_zeros(ChebKind::First, m);
        out.push(DiscreteMeasure::uniform(Domain::Line, &zeros).expect("m ≥ 1"));
    }
    for m in [2, 8, 32] {
        out.push(DiscreteMeasure::from_rule(&gauss_rule(ChebKind::Second, m)));
    }
    for k in [2, 3, 5, 8] {
        out.push(circle_to_interval(&DiscreteMeasure::roots_of_unity(k), 0.0));
    }
    for k in [2, 3, 5, 8, 13] {
        out.push(DiscreteMeasure::roots_of_unity(k));
    }
    out.push(DiscreteMeasure::circle([(0.0, 1.0)]).expect("point mass"));
    out.push(DiscreteMeasure::circle([(0.0, 0.5), (PI, 0.5)]).expect("two atoms"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn construction_normalizes_sorts_and_merges() {
        let mu = DiscreteMeasure::line([(0.5, 2.0), (-0.5, 1.0), (0.5, 1.0)]).unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.atoms()[0].position, -0.5);
        assert!(close(mu.atoms()[1].weight, 0.75, 1e-15));
        assert!(close(mu.total_weight(), 1.0, 1e-15));

        let nu = DiscreteMeasure::circle([(-PI / 2.0, 1.0), (5.0 * PI, 1.0)]).unwrap();
        assert!(close(nu.atoms()[0].position, PI, 1e-12));
        assert!(close(nu.atoms()[1].position, 1.5 * PI, 1e-12));

        assert!(DiscreteMeasure::line([(0.0, -1.0)]).is_err());
        assert!(DiscreteMeasure::line([(f64::NAN, 1.0)]).is_err());
        assert!(DiscreteMeasure::line(Vec::<(f64, f64)>::new()).is_err());
    }

    #[test]
    fn moments_of_point_mass() {
        let m = moments(&DiscreteMeasure::dirac(0.0), ChebKind::First, 4);
        let want = [0.0, -1.0, 0.0, 1.0];
        for (n, w) in (1..=4).zip(want) {
            assert!(close(m.real(n), w, 1e-15));
        }
    }

    #[test]
    fn moments_of_chebyshev_nodes() {
        // oracle: (1/m) Σ_k cos(n(2k−1)π/(2m)); vanishes for n < 2m, equals −1 at n = 2m
        for m in [1, 3, 8, 17] {
            let mu = DiscreteMeasure::uniform(Domain::Line, &cheb_zeros(ChebKind::First, m)).unwrap();
            let eps = moments(&mu, ChebKind::First, 2 * m);
            for n in 1..=2 * m {
                let oracle: f64 = (1..=m)
                    .map(|k| (n as f64 * (2 * k - 1) as f64 * PI / (2 * m) as f64).cos())
                    .sum::<f64>()
                    / m as f64;
                assert!(close(eps.real(n), oracle, 1e-12), "m={m} n={n}");
                if n < 2 * m {
                    assert!(eps.abs(n) < 1e-12);
                }
            }
            assert!(close(eps.real(2 * m), -1.0, 1e-12));
        }
    }

    #[test]
    fn moments_of_semicircle_gauss_measure() {
        for m in [1, 4, 9] {
            let rule = gauss_rule(ChebKind::Second, m);
            let mu = DiscreteMeasure::from_rule(&rule);
            let eps = moments(&mu, ChebKind::Second, 2 * m - 1);
            for n in 1..=2 * m - 1 {
                let direct: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| w * crate::chebyshev::cheb_eval(ChebKind::Second, n, x))
                    .sum();
                assert!(direct.abs() < 1e-12 && eps.abs(n) < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_examples() {
        for k in [1, 3, 7] {
            let f = fourier(&DiscreteMeasure::roots_of_unity(k), k);
            for n in 1..k {
                assert!(f.abs(n) < 1e-14);
            }
            assert!(close(f.get(k).re, 1.0, 1e-14) && f.get(k).im.abs() < 1e-14);
        }
        let f = fourier(&DiscreteMeasure::circle([(0.0, 1.0)]).unwrap(), 5);
        assert!((1..=5).all(|n| f.get(n) == Complex64::new(1.0, 0.0)));
        let half = DiscreteMeasure::circle([(0.0, 0.5), (PI, 0.5)]).unwrap();
        let f = fourier(&half, 2);
        assert!(f.abs(1) < 1e-15 && close(f.get(2).re, 1.0, 1e-15));
    }

    #[test]
    fn pushforward_examples() {
        let nu = DiscreteMeasure::circle([(PI / 3.0, 1.0)]).unwrap();
        let mu = circle_to_interval(&nu, 0.0);
        assert_eq!(mu.len(), 1);
        assert!(close(mu.atoms()[0].position, 0.5, 1e-15));

        let mu = circle_to_interval(&DiscreteMeasure::roots_of_unity(4), 0.0);
        let got: Vec<(f64, f64)> = mu.atoms().iter().map(|a| (a.position, a.weight)).collect();
        let want = [(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)];
        assert_eq!(got.len(), 3);
        for ((x, w), (xe, we)) in got.into_iter().zip(want) {
            assert!(close(x, xe, 1e-15) && close(w, we, 1e-15));
        }
    }

    #[test]
    fn tails() {
        let d = DiscreteMeasure::dirac(0.0);
        assert_eq!((d.tail(0.0), d.open_tail(0.0)), (1.0, 0.0));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mu = DiscreteMeasure::uniform(Domain::Line, &[-r, r]).unwrap();
        assert_eq!((mu.tail(0.0), mu.open_tail(0.0)), (0.5, 0.5));
        assert!(close(mu.tail(-1e10), 1.0, 1e-15));
    }

    #[test]
    fn true_discrepancy_examples() {
        let d = true_discrepancy(&DiscreteMeasure::from_rule(&gauss_rule(ChebKind::Second, 1)), ChebKind::Second);
        assert!(close(d.value, 0.5, 1e-15) && d.x0 == 0.0);

        for m in [1, 5, 32] {
            let mu = DiscreteMeasure::uniform(Domain::Line, &cheb_zeros(ChebKind::First, m)).unwrap();
            let d = true_discrepancy(&mu, ChebKind::First);
            // direct scan oracle over a fine grid plus the atoms
            let scan = (0..=20000)
                .map(|i| -1.1 + 2.2 * i as f64 / 20000.0)
                .chain(mu.atoms().iter().map(|a| a.position))
                .map(|x| pointwise_discrepancy(&mu, ChebKind::First, x))
                .fold(0.0, f64::max);
            assert!(d.value <= 1.0 / m as f64 + 1e-15);
            assert!(d.value >= scan - 1e-15);
        }

        let d = true_discrepancy(&DiscreteMeasure::dirac(-2.0), ChebKind::First);
        assert_eq!(d.value, 1.0);
        assert_eq!(pointwise_discrepancy(&DiscreteMeasure::dirac(-2.0), ChebKind::First, -1.5), 1.0);
    }

    #[test]
    fn arc_discrepancy_examples() {
        assert!(close(arc_discrepancy(&DiscreteMeasure::circle([(1.0, 1.0)]).unwrap()), 1.0, 1e-15));
        for k in [2, 5, 16] {
            let v = arc_discrepancy(&DiscreteMeasure::roots_of_unity(k));
            assert!(close(v, 1.0 / k as f64, 1e-14), "k={k} {v}");
        }
    }

    #[test]
    fn witness_examples() {
        let w = sharpness_witness(1);
        assert_eq!(w.len(), 2);
        for (a, x) in w.atoms().iter().zip([-0.5, 0.5]) {
            assert!(close(a.position, x, 1e-15) && close(a.weight, 0.5, 1e-15));
        }
        let eps = moments(&w, ChebKind::Second, 3);
        assert!((1..=3).all(|n| eps.abs(n) < 1e-15));
        assert!(pointwise_discrepancy(&w, ChebKind::Second, w.atoms()[1].position) >= 0.25);
        for n0 in [1, 7, 64] {
            assert!(close(sharpness_witness(n0).total_weight(), 1.0, 1e-14));
        }
    }

    #[test]
    fn corpus_contract() {
        let a = test_corpus(0);
        let b = test_corpus(0);
        assert_eq!(a[0], b[0]);
        assert_eq!(a, b);
        assert_ne!(a[0], test_corpus(1)[0]);
        for m in &a {
            assert!(close(m.total_weight(), 1.0, 1e-12));
        }
        for k in [2, 3, 5, 8] {
            let want = circle_to_interval(&DiscreteMeasure::roots_of_unity(k), 0.0);
            assert!(a.contains(&want));
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let mu = sharpness_witness(5);
        mu.write_csv(&path).unwrap();
        let (back, sum) = DiscreteMeasure::read_csv(&path).unwrap();
        assert!(close(sum, 1.0, 1e-14));
        let (e1, e2) = (moments(&mu, ChebKind::Second, 10), moments(&back, ChebKind::Second, 10));
        for n in 1..=10 {
            assert!(close(e1.real(n), e2.real(n), 1e-14));
        }

        std::fs::write(&path, "theta,weight\n0,3\n3.14159,1\n").unwrap();
        let (nu, sum) = DiscreteMeasure::read_csv(&path).unwrap();
        assert_eq!(nu.domain(), Domain::Circle);
        assert_eq!(sum, 4.0);
        assert!(close(nu.atoms()[0].weight, 0.75, 1e-15));

        std::fs::write(&path, "x,y\n0,1\n").unwrap();
        assert!(DiscreteMeasure::read_csv(&path).is_err());
        std::fs::write(&path, "position,weight\n0,abc\n").unwrap();
        assert!(DiscreteMeasure::read_csv(&path).is_err());
    }

    fn arb_line_measure() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-1.5f64..1.5, 0.01f64..1.0), 1..30)
    }

    fn arb_circle_measure() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0f64..TAU, 0.01f64..1.0), 1..30)
    }

    proptest! {
        #[test]
        fn discrepancy_ignores_order_and_duplicates(mut atoms in arb_line_measure()) {
            let mu = DiscreteMeasure::line(atoms.clone()).unwrap();
            atoms.reverse();
            let (x, w) = atoms[0];
            atoms[0] = (x, w / 2.0);
            atoms.push((x, w / 2.0));
            let nu = DiscreteMeasure::line(atoms).unwrap();
            for kind in [ChebKind::First, ChebKind::Second] {
                let (a, b) = (true_discrepancy(&mu, kind).value, true_discrepancy(&nu, kind).value);
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn pushforward_moment_identity(atoms in arb_circle_measure(), center in 0.0f64..TAU) {
            let nu = DiscreteMeasure::circle(atoms).unwrap();
            let mu = circle_to_interval(&nu, center);
            let t = moments(&mu, ChebKind::First, 20);
            let f = fourier(&nu, 20);
            for n in 1..=20 {
                let rotated = Complex64::from_polar(1.0, n as f64 * center) * f.get(n);
                prop_assert!((t.real(n) - rotated.re).abs() < 1e-12);
            }
        }
    }
}
