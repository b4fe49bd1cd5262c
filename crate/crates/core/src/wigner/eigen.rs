//! Eigenvalues of dense Hermitian matrices: Householder reduction to a real
//! symmetric tridiagonal matrix followed by implicit-shift QL iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal entries below this fraction of their diagonal neighbours are
/// treated as zero.
pub const DEFLATION_TOL: f64 = 1e-12;

/// QL iterations allowed per eigenvalue.
pub const MAX_ITERATIONS: usize = 40;

/// Dense Hermitian matrix in column-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Builds the matrix from its upper triangle `entry(i, j)`, `i ≤ j`.
    /// Diagonal imaginary parts are dropped.
    pub fn from_upper(n: usize, mut entry: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, entry(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.n + i]
    }

    /// Sets `(i, j)` and its mirror `(j, i)` to the conjugate.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let n = self.n;
        if i == j {
            self.data[i * n + i] = Complex64::new(v.re, 0.0);
        } else {
            self.data[j * n + i] = v;
            self.data[i * n + j] = v.conj();
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i).conj()))
    }

    /// `P H Pᵀ` for the permutation `i ↦ perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[perm[j] * self.n + perm[i]] = self.get(i, j);
            }
        }
        out
    }
}

/// Reduces `h` to real symmetric tridiagonal form `(diagonal, off_diagonal)`.
///
/// Each step applies a Hermitian reflector `I − β u u*` to the trailing block.
/// The complex subdiagonal left behind is replaced by its modulus, which is a
/// further diagonal unitary similarity.
pub fn tridiagonalize(h: &HermitianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.n;
    let mut a = h.data.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let zero = Complex64::new(0.0, 0.0);
    let mut u = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(1) {
        diag[k] = a[k * n + k].re;
        let m = n - k - 1;
        let col = &a[k * n + k + 1..(k + 1) * n];
        let x1 = col[0];
        let tail_sq: f64 = col[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail_sq == 0.0 {
            off[k] = x1.norm();
            continue;
        }
        let norm = (x1.norm_sqr() + tail_sq).sqrt();
        let x1_abs = x1.norm();
        let phase = if x1_abs == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x1 / x1_abs
        };
        off[k] = norm;

        let u = &mut u[..m];
        u.copy_from_slice(col);
        u[0] += phase * norm;
        let beta = 1.0 / (norm * (norm + x1_abs));

        // p = β B u over the trailing block B = a[k+1.., k+1..]
        let p = &mut p[..m];
        p.iter_mut().for_each(|v| *v = zero);
        for (j, &uj) in u.iter().enumerate() {
            let uj = uj * beta;
            let start = (k + 1 + j) * n + k + 1;
            for (pi, bij) in p.iter_mut().zip(&a[start..start + m]) {
                *pi += bij * uj;
            }
        }
        // w = p − (β/2)(u* p) u
        let upp: Complex64 = u.iter().zip(p.iter()).map(|(ui, pi)| ui.conj() * pi).sum();
        let kk = 0.5 * beta * upp.re;
        for (pi, ui) in p.iter_mut().zip(u.iter()) {
            *pi -= ui * kk;
        }
        // B ← B − u w* − w u*
        for j in 0..m {
            let wj = p[j].conj();
            let uj = u[j].conj();
            let start = (k + 1 + j) * n + k + 1;
            for ((bij, ui), wi) in a[start..start + m].iter_mut().zip(u.iter()).zip(p.iter()) {
                *bij -= ui * wj + wi * uj;
            }
        }
    }
    if n > 0 {
        diag[n - 1] = a[n * n - 1].re;
    }
    (diag, off)
}

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.resize(n, 0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= DEFLATION_TOL * dd || dd + e[m].abs() == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITERATIONS {
                return Err(Error::NoConvergence { index: l });
            }
            // Wilkinson-type shift from the leading 2×2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// All eigenvalues of `h`, ascending.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let (d, e) = tridiagonalize(h);
    tridiagonal_eigenvalues(&d, &e)
}
