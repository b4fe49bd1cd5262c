//! Chebyshev polynomials of the first and second kind, their zeros, the
//! Gauss rules of their orthogonality measures, and series arithmetic.
//!
//! Both families are normalized so that the weight measures are probability
//! measures on `[-1, 1]`:
//!
//! ```text
//! First:  dσ₁(x) = (1/π) (1 − x²)^(−1/2) dx,   T_n(cos θ) = cos nθ
//! Second: dσ₂(x) = (2/π) (1 − x²)^(1/2) dx,    U_n(cos θ) = sin((n+1)θ) / sin θ
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebKind {
    /// `T_n`, orthogonal for the arcsine law σ₁.
    First,
    /// `U_n`, orthogonal for the semicircle law σ₂.
    Second,
}

impl ChebKind {
    /// Density of the orthogonality measure; zero outside `(-1, 1)`.
    pub fn density(self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let s = (1.0 - x * x).sqrt();
        match self {
            ChebKind::First => 1.0 / (PI * s),
            ChebKind::Second => 2.0 / PI * s,
        }
    }

    /// `∫ S_n² dσ`.
    pub fn norm_sq(self, n: usize) -> f64 {
        match (self, n) {
            (ChebKind::First, 0) => 1.0,
            (ChebKind::First, _) => 0.5,
            (ChebKind::Second, _) => 1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ChebKind::First => 'T',
            ChebKind::Second => 'U',
        }
    }
}

/// `S_n(x)` by the three-term recurrence, valid for every real `x`.
pub fn cheb_eval(kind: ChebKind, n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = match kind {
        ChebKind::First => x,
        ChebKind::Second => 2.0 * x,
    };
    let two_x = 2.0 * x;
    for _ in 1..n {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `S_0(x), …, S_{n_max}(x)`.
pub fn cheb_eval_all(kind: ChebKind, n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(match kind {
        ChebKind::First => x,
        ChebKind::Second => 2.0 * x,
    });
    let two_x = 2.0 * x;
    for k in 2..=n_max {
        let next = two_x * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

/// Zeros of `S_n` in increasing order.
///
/// Written with `sin` so the set is exactly symmetric about the origin and
/// contains an exact `0.0` when `n` is odd.
pub fn cheb_zeros(kind: ChebKind, n: usize) -> Vec<f64> {
    assert!(n >= 1, "S_0 has no zeros");
    let nf = n as f64;
    (1..=n)
        .map(|k| {
            let j = (2 * k) as f64 - nf - 1.0;
            match kind {
                ChebKind::First => (j * PI / (2.0 * nf)).sin(),
                ChebKind::Second => (j * PI / (2.0 * (nf + 1.0))).sin(),
            }
        })
        .collect()
}

/// A Gauss rule for σ₁ or σ₂: positive weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub kind: ChebKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// The `m`-node Gauss–Chebyshev rule of the given kind, exact for degree ≤ 2m − 1.
pub fn gauss_rule(kind: ChebKind, m: usize) -> QuadratureRule {
    assert!(m >= 1, "a Gauss rule needs at least one node");
    let nodes = cheb_zeros(kind, m);
    let weights = match kind {
        ChebKind::First => vec![1.0 / m as f64; m],
        ChebKind::Second => {
            let h = PI / (m as f64 + 1.0);
            (1..=m)
                .map(|k| {
                    let s = (k as f64 * h).sin();
                    2.0 / (m as f64 + 1.0) * s * s
                })
                .collect()
        }
    };
    QuadratureRule {
        kind,
        nodes,
        weights,
    }
}

/// `Σ c_n S_n` in the Chebyshev basis of one kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebSeries {
    kind: ChebKind,
    coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Trailing zero coefficients are dropped; an empty input is the zero series.
    pub fn new(kind: ChebKind, mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { kind, coeffs }
    }

    pub fn constant(kind: ChebKind, c: f64) -> Self {
        Self::new(kind, vec![c])
    }

    pub fn zero(kind: ChebKind) -> Self {
        Self::constant(kind, 0.0)
    }

    /// The single basis polynomial `S_n`.
    pub fn basis(kind: ChebKind, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self::new(kind, coeffs)
    }

    pub fn kind(&self) -> ChebKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `S_n`, zero past the degree.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Clenshaw backward recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        let two_x = 2.0 * x;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c[1..].iter().rev() {
            let b0 = ck + two_x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        match self.kind {
            ChebKind::First => c[0] + x * b1 - b2,
            ChebKind::Second => c[0] + two_x * b1 - b2,
        }
    }

    /// Re-expand in the basis of `kind`.
    pub fn to_kind(&self, kind: ChebKind) -> Self {
        match (self.kind, kind) {
            (a, b) if a == b => self.clone(),
            (ChebKind::First, ChebKind::Second) => Self::new(kind, t_to_u(&self.coeffs)),
            _ => Self::new(kind, u_to_t(&self.coeffs)),
        }
    }

    pub fn derivative(&self) -> Self {
        let t = self.to_kind(ChebKind::First);
        let a = t.coeffs();
        let d = a.len() - 1;
        if d == 0 {
            return Self::zero(self.kind);
        }
        // c'_{k-1} = c'_{k+1} + 2k c_k, halved at k = 0
        let mut der = vec![0.0; d + 1];
        for k in (1..=d).rev() {
            der[k - 1] = der.get(k + 1).copied().unwrap_or(0.0) + 2.0 * k as f64 * a[k];
        }
        der[0] *= 0.5;
        der.pop();
        Self::new(ChebKind::First, der).to_kind(self.kind)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch(self.kind, other.kind));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|n| self.coeff(n) + sign * other.coeff(n))
            .collect();
        Ok(Self::new(self.kind, coeffs))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.kind, self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        series_multiply(self, other)
    }
}

fn t_to_u(a: &[f64]) -> Vec<f64> {
    // T_0 = U_0, T_1 = U_1 / 2, T_n = (U_n − U_{n−2}) / 2
    let mut u = vec![0.0; a.len()];
    for (n, &an) in a.iter().enumerate() {
        match n {
            0 => u[0] += an,
            1 => u[1] += 0.5 * an,
            _ => {
                u[n] += 0.5 * an;
                u[n - 2] -= 0.5 * an;
            }
        }
    }
    u
}

fn u_to_t(u: &[f64]) -> Vec<f64> {
    // U_n = 2 Σ_{0<j≤n, j≡n (2)} T_j + [n even] T_0
    let d = u.len();
    let mut t = vec![0.0; d];
    let mut suffix = [0.0, 0.0];
    for j in (0..d).rev() {
        suffix[j % 2] += u[j];
        t[j] = if j == 0 { suffix[0] } else { 2.0 * suffix[j % 2] };
    }
    t
}

pub fn series_eval(s: &ChebSeries, x: f64) -> f64 {
    s.eval(x)
}

/// Product of two series of the same kind, via `T_m T_n = (T_{m+n} + T_{|m−n|}) / 2`.
pub fn series_multiply(a: &ChebSeries, b: &ChebSeries) -> Result<ChebSeries> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch(a.kind, b.kind));
    }
    let ta = a.to_kind(ChebKind::First);
    let tb = b.to_kind(ChebKind::First);
    let (x, y) = (ta.coeffs(), tb.coeffs());
    let mut out = vec![0.0; x.len() + y.len() - 1];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            let h = 0.5 * xi * yj;
            out[i + j] += h;
            out[i.abs_diff(j)] += h;
        }
    }
    Ok(ChebSeries::new(ChebKind::First, out).to_kind(a.kind))
}

/// Orthogonal projection of `f` onto `S_0..S_degree` by a `(degree+1)`-node
/// Gauss rule; exact whenever `f` is a polynomial of degree ≤ `degree + 1`.
///
/// The returned series always carries `degree + 1` coefficients in
/// [`ChebSeries::coeffs`] unless trailing ones vanish exactly.
pub fn project(f: impl Fn(f64) -> f64, degree: usize, kind: ChebKind) -> ChebSeries {
    ChebSeries::new(kind, project_coeffs(f, degree, kind))
}

/// As [`project`], returning exactly `degree + 1` coefficients.
pub fn project_coeffs(f: impl Fn(f64) -> f64, degree: usize, kind: ChebKind) -> Vec<f64> {
    let rule = gauss_rule(kind, degree + 1);
    let mut c = vec![0.0; degree + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = w * f(x);
        for (cn, s) in c.iter_mut().zip(cheb_eval_all(kind, degree, x)) {
            *cn += fx * s;
        }
    }
    for (n, cn) in c.iter_mut().enumerate() {
        *cn /= kind.norm_sq(n);
    }
    c
}

/// `σ[x0, +∞)` for σ₁ or σ₂.
pub fn sigma_tail(kind: ChebKind, x0: f64) -> f64 {
    if x0 <= -1.0 {
        return 1.0;
    }
    if x0 >= 1.0 {
        return 0.0;
    }
    let theta = x0.acos();
    match kind {
        ChebKind::First => theta / PI,
        ChebKind::Second => (theta - x0 * (1.0 - x0 * x0).sqrt()) / PI,
    }
}
