use super::LinalgError;

/// Sweep cap per eigenvalue for the QL iteration.
pub const MAX_QL_SWEEPS: usize = 50;

/// Result of [`tridiag_eigen`]: ascending eigenvalues and, optionally, the
/// eigenvectors as columns of a row-major `n×n` array.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<f64>>,
}

impl TridiagEigen {
    /// Column `j` of the eigenvector matrix.
    pub fn vector(&self, j: usize) -> Option<Vec<f64>> {
        let n = self.values.len();
        self.vectors.as_ref().map(|z| (0..n).map(|i| z[i * n + j]).collect())
    }
}

/// Eigenvalues (and optionally eigenvectors) of the symmetric tridiagonal
/// matrix with diagonal `d` and off-diagonal `e`, by implicit QL with
/// Wilkinson shifts.
pub fn tridiag_eigen(d: &[f64], e: &[f64], vectors: bool) -> Result<TridiagEigen, LinalgError> {
    let n = d.len();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    if e.len() + 1 != n {
        return Err(LinalgError::Dimension(format!(
            "|d| = {n} requires |e| = {}, got {}",
            n - 1,
            e.len()
        )));
    }
    let mut z = if vectors {
        let mut z = vec![0.0; n * n];
        (0..n).for_each(|i| z[i * n + i] = 1.0);
        Some(z)
    } else {
        None
    };
    let mut dd = d.to_vec();
    ql_implicit(&mut dd, e, z.as_deref_mut())?;
    Ok(sort_pairs(dd, z))
}

/// QL on (d, e) accumulating rotations into `z` (row-major, columns are
/// vectors). `z` may hold a prior orthogonal basis, e.g. from Householder.
pub(crate) fn ql_implicit(d: &mut [f64], e_in: &[f64], mut z: Option<&mut [f64]>) -> Result<(), LinalgError> {
    let n = d.len();
    if d.iter().chain(e_in).any(|v| !v.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(e_in);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(LinalgError::NoConvergence {
                    index: l,
                    sweeps: MAX_QL_SWEEPS,
                });
            }
            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

pub(crate) fn sort_pairs(d: Vec<f64>, z: Option<Vec<f64>>) -> TridiagEigen {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = z.map(|z| {
        let mut out = vec![0.0; n * n];
        for (j, &k) in order.iter().enumerate() {
            for i in 0..n {
                out[i * n + j] = z[i * n + k];
            }
        }
        out
    });
    TridiagEigen { values, vectors }
}

/// Number of eigenvalues strictly below `x` (Sturm count via the LDLᵀ pivots
/// of `T − xI`).
pub fn tridiag_count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    tridiag_count_below_checked(d, e, x).0
}

/// Like [`tridiag_count_below`], also reporting whether a pivot was exactly
/// zero (the count is then a tie-break and `x` sits on an eigenvalue).
pub fn tridiag_count_below_checked(d: &[f64], e: &[f64], x: f64) -> (usize, bool) {
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut count = 0;
    let mut hit = false;
    let mut q = d[0] - x;
    for i in 0.. {
        if q == 0.0 {
            q = -tiny;
            hit = true;
        }
        if q < 0.0 {
            count += 1;
        }
        if i + 1 == d.len() {
            break;
        }
        q = (d[i + 1] - x) - e[i] * (e[i] / q);
    }
    (count, hit)
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += e[i - 1].abs();
        }
        if i + 1 < n {
            r += e[i].abs();
        }
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    (lo - pad, hi + pad)
}

/// `k`-th smallest eigenvalue (0-based) by bisection on Sturm counts.
pub fn tridiag_kth_eigenvalue(d: &[f64], e: &[f64], k: usize) -> f64 {
    tridiag_kth_eigenvalue_tol(d, e, k, 0.0)
}

/// As [`tridiag_kth_eigenvalue`], stopping once the bracket is narrower than
/// `abs_tol` (or relative machine precision, whichever is larger).
pub fn tridiag_kth_eigenvalue_tol(d: &[f64], e: &[f64], k: usize, abs_tol: f64) -> f64 {
    let (mut lo, mut hi) = gershgorin(d, e);
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if tridiag_count_below(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= (2.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(abs_tol) {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn tridiag_min_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    tridiag_kth_eigenvalue(d, e, 0)
}

pub fn tridiag_max_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    tridiag_kth_eigenvalue(d, e, d.len() - 1)
}
