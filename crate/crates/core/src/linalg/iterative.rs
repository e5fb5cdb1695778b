use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ldlt::ldlt_inertia;
use super::tridiag::tridiag_eigen;
use super::{dot, norm2, normalize, LinalgError, SymMatrix};

const LANCZOS_MAX_STEPS: usize = 600;
const DIRECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct InverseIteration {
    /// Rayleigh quotient of the returned vector.
    pub value: f64,
    /// Unit 2-norm vector.
    pub vector: Vec<f64>,
    /// `‖A x − value·x‖₂`.
    pub residual: f64,
    pub iterations: usize,
}

fn seeded_start(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut x);
    x
}

/// Shifted inverse iteration on `A − shift·I`.
///
/// Converges when the residual is at most `tol·‖A‖_∞` and the direction
/// changes by at most 1e-12 between steps. A settled direction with a large
/// residual (a shift midway between two eigenvalues) is reported as
/// [`LinalgError::Stagnation`], as is running out of iterations.
pub fn inverse_iteration(
    a: &SymMatrix,
    shift: f64,
    start: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<InverseIteration, LinalgError> {
    let n = a.dim();
    let mut x = match start {
        Some(s) if s.len() != n => {
            return Err(LinalgError::Dimension(format!(
                "start vector has length {}, matrix is {n}x{n}",
                s.len()
            )))
        }
        Some(s) => s.to_vec(),
        None => seeded_start(n, 42),
    };
    if normalize(&mut x) == 0.0 {
        x = seeded_start(n, 42);
    }
    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    let f = ldlt_inertia(&a.shift_diag(-shift));
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let mut y = f.solve_regularized(&x);
        if !y.iter().all(|v| v.is_finite()) || normalize(&mut y) == 0.0 {
            return Err(LinalgError::NonFinite);
        }
        if dot(&x, &y) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        let change = norm2(&x.iter().zip(&y).map(|(p, q)| p - q).collect::<Vec<_>>());
        let ay = a.matvec(&y);
        let value = dot(&y, &ay);
        residual = norm2(&ay.iter().zip(&y).map(|(p, q)| p - value * q).collect::<Vec<_>>());
        x = y;
        if change <= DIRECTION_TOL {
            if residual <= tol * scale {
                return Ok(InverseIteration {
                    value,
                    vector: x,
                    residual,
                    iterations: it,
                });
            }
            return Err(LinalgError::Stagnation {
                iterations: it,
                residual,
            });
        }
    }
    Err(LinalgError::Stagnation {
        iterations: max_iter,
        residual,
    })
}

/// Largest eigenvalue of a symmetric operator given by `apply`, using Lanczos
/// with full reorthogonalization.
pub fn largest_sym_eigenvalue(
    mut apply: impl FnMut(&[f64]) -> Vec<f64>,
    n: usize,
    tol: f64,
) -> Result<f64, LinalgError> {
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    let cap = n.min(LANCZOS_MAX_STEPS);
    let mut basis: Vec<Vec<f64>> = vec![seeded_start(n, 42)];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut theta = 0.0_f64;
    for j in 0..cap {
        let mut w = apply(&basis[j]);
        if w.len() != n {
            return Err(LinalgError::Dimension(format!("operator returned length {}", w.len())));
        }
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let b = norm2(&w);
        let steps = j + 1;
        let exhausted = steps == cap || b <= 1e-14 * a.abs().max(theta.abs()).max(f64::MIN_POSITIVE);
        if steps % 5 == 0 || exhausted {
            let eig = tridiag_eigen(&alpha, &beta, true)?;
            theta = eig.values[steps - 1];
            let last = eig.vectors.as_ref().map_or(0.0, |z| z[(steps - 1) * steps + steps - 1]);
            let ritz_res = (b * last).abs();
            if ritz_res <= tol * theta.abs().max(f64::MIN_POSITIVE) || b <= 1e-14 * theta.abs() || steps == n {
                return Ok(theta);
            }
            if steps == cap {
                return Err(LinalgError::IterationCap(cap));
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|v| *v /= b);
        basis.push(w);
    }
    Err(LinalgError::IterationCap(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymMatrix {
        SymMatrix::tridiagonal(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn inverse_iteration_finds_nearest_eigenpair() {
        let a = laplacian(30);
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / 31.0).cos();
        let r = inverse_iteration(&a, 0.0, None, 1e-12, 100).unwrap();
        assert!((r.value - exact).abs() < 1e-12);
        // exact shift: singular factor still yields the eigenvector
        let r = inverse_iteration(&a, exact, None, 1e-12, 100).unwrap();
        assert!((r.value - exact).abs() < 1e-12);
    }

    #[test]
    fn midway_shift_stagnates() {
        let a = SymMatrix::diagonal(vec![1.0, 3.0]).unwrap();
        let err = inverse_iteration(&a, 2.0, Some(&[1.0, 1.0]), 1e-10, 50).unwrap_err();
        assert!(matches!(err, LinalgError::Stagnation { .. }));
    }

    #[test]
    fn lanczos_largest_of_laplacian() {
        let n = 200;
        let a = laplacian(n);
        let exact = 2.0 - 2.0 * (n as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let top = largest_sym_eigenvalue(|x| a.matvec(x), n, 1e-12).unwrap();
        assert!((top - exact).abs() < 1e-9, "{top} vs {exact}");
    }

    #[test]
    fn lanczos_small_dense() {
        let a = SymMatrix::diagonal(vec![0.5, -4.0, 2.0]).unwrap();
        let top = largest_sym_eigenvalue(|x| a.matvec(x), 3, 1e-14).unwrap();
        assert!((top - 2.0).abs() < 1e-13);
    }
}
