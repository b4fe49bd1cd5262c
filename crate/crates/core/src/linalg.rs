//! Dense Householder QR for the small square systems of the envelope
//! construction.

/// Solves `A x = b` for square `A` (row-major, `n×n`) by Householder QR.
///
/// Returns `None` when `R` has an exactly zero pivot.
pub fn qr_solve(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    // column-major copy so each reflector touches contiguous memory
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[j * n + i] = a[i * n + j];
        }
    }
    let mut rhs = b.to_vec();
    let mut v = vec![0.0; n];

    for k in 0..n {
        let col = &m[k * n..(k + 1) * n];
        let norm = col[k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if col[k] > 0.0 { -norm } else { norm };
        v[k..].copy_from_slice(&col[k..]);
        v[k] -= alpha;
        let vnorm_sq: f64 = v[k..].iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        for j in k..n {
            let c = &mut m[j * n..(j + 1) * n];
            let dot: f64 = v[k..].iter().zip(&c[k..]).map(|(x, y)| x * y).sum();
            let f = beta * dot;
            for (ci, vi) in c[k..].iter_mut().zip(&v[k..]) {
                *ci -= f * vi;
            }
        }
        let dot: f64 = v[k..].iter().zip(&rhs[k..]).map(|(x, y)| x * y).sum();
        let f = beta * dot;
        for (ri, vi) in rhs[k..].iter_mut().zip(&v[k..]) {
            *ri -= f * vi;
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in (i + 1)..n {
            s -= m[j * n + i] * x[j];
        }
        let d = m[i * n + i];
        if d == 0.0 {
            return None;
        }
        x[i] = s / d;
    }
    Some(x)
}
