use super::tridiag::{ql_implicit, sort_pairs, tridiag_eigen, TridiagEigen};
use super::{LinalgError, SymMatrix};

/// Ascending eigenvalues with optional column eigenvectors (row-major n×n).
pub type SymEigen = TridiagEigen;

/// Householder reduction `A = Q T Qᵀ`. Returns (d, e, Q) with Q row-major.
fn householder(a: &SymMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<Vec<f64>>) {
    let n = a.dim();
    let mut w = a.to_dense();
    let mut q = want_q.then(|| {
        let mut q = vec![0.0; n * n];
        (0..n).for_each(|i| q[i * n + i] = 1.0);
        q
    });
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = k + 1;
        let scale = (m..n).fold(0.0_f64, |s, i| s.max(w[i * n + k].abs()));
        if scale == 0.0 {
            continue;
        }
        let mut sq = 0.0;
        for i in m..n {
            v[i] = w[i * n + k] / scale;
            sq += v[i] * v[i];
        }
        let xnorm = sq.sqrt();
        let alpha = -xnorm.copysign(v[m]);
        v[m] -= alpha;
        let vn = (m..n).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        (m..n).for_each(|i| v[i] /= vn);
        for i in m..n {
            p[i] = (m..n).map(|j| w[i * n + j] * v[j]).sum();
        }
        let kk: f64 = (m..n).map(|i| v[i] * p[i]).sum();
        (m..n).for_each(|i| p[i] -= kk * v[i]);
        for i in m..n {
            for j in m..=i {
                let val = w[i * n + j] - 2.0 * (v[i] * p[j] + p[i] * v[j]);
                w[i * n + j] = val;
                w[j * n + i] = val;
            }
        }
        w[m * n + k] = alpha * scale;
        w[k * n + m] = alpha * scale;
        for i in m + 1..n {
            w[i * n + k] = 0.0;
            w[k * n + i] = 0.0;
        }
        if let Some(q) = q.as_mut() {
            for r in 0..n {
                let s: f64 = (m..n).map(|j| q[r * n + j] * v[j]).sum();
                for j in m..n {
                    q[r * n + j] -= 2.0 * s * v[j];
                }
            }
        }
    }
    let d = (0..n).map(|i| w[i * n + i]).collect();
    let e = (0..n.saturating_sub(1)).map(|i| w[(i + 1) * n + i]).collect();
    (d, e, q)
}

/// Full symmetric eigendecomposition. Tridiagonal input goes straight to QL.
pub fn sym_eigen(a: &SymMatrix, vectors: bool) -> Result<SymEigen, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if let Some((d, e)) = a.as_tridiagonal() {
        return tridiag_eigen(d, e, vectors);
    }
    let (mut d, e, mut q) = householder(a, vectors);
    ql_implicit(&mut d, &e, q.as_deref_mut())?;
    Ok(sort_pairs(d, q))
}

/// `(A^{1/2}, A^{-1/2})` for symmetric positive definite `A`.
///
/// Fails with [`LinalgError::NotSpd`] when the smallest eigenvalue is below
/// `1e-12` times the largest in magnitude.
pub fn sym_sqrt_and_invsqrt(a: &SymMatrix) -> Result<(SymMatrix, SymMatrix), LinalgError> {
    let n = a.dim();
    if a.is_diagonal() {
        let d = a.diagonal_entries();
        check_spd(&d)?;
        let s = SymMatrix::diagonal(d.iter().map(|v| v.sqrt()).collect())?;
        let si = SymMatrix::diagonal(d.iter().map(|v| 1.0 / v.sqrt()).collect())?;
        return Ok((s, si));
    }
    let eig = sym_eigen(a, true)?;
    check_spd(&eig.values)?;
    let z = eig.vectors.as_ref().expect("vectors requested");
    let build = |f: &dyn Fn(f64) -> f64| {
        let fv: Vec<f64> = eig.values.iter().map(|&v| f(v)).collect();
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| z[i * n + k] * fv[k] * z[j * n + k]).sum())
    };
    Ok((build(&|v| v.sqrt())?, build(&|v| 1.0 / v.sqrt())?))
}

fn check_spd(values: &[f64]) -> Result<(), LinalgError> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let big = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if !(min > 1e-12 * big) {
        return Err(LinalgError::NotSpd { min_eigenvalue: min });
    }
    Ok(())
}
