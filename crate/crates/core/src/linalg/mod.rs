//! Dense and tridiagonal symmetric kernels.
//!
//! Everything the pencil machinery needs is implemented here directly:
//! implicit-shift QL for tridiagonal eigenproblems, Householder reduction for
//! full matrices, symmetric-indefinite LDLᵀ with 1×1/2×2 pivots for inertia
//! counts and solves, inverse iteration and Lanczos.

mod dense;
mod iterative;
mod ldlt;
mod sym;
mod tridiag;

pub use dense::{sym_eigen, sym_sqrt_and_invsqrt, SymEigen};
pub use iterative::{inverse_iteration, largest_sym_eigenvalue, InverseIteration};
pub use ldlt::{inertia, ldlt_inertia, solve_with_factor, Inertia, LdltFactor};
pub use sym::{Band, SymMatrix};
pub use tridiag::{
    tridiag_count_below, tridiag_count_below_checked, tridiag_eigen, tridiag_kth_eigenvalue,
    tridiag_kth_eigenvalue_tol, tridiag_max_eigenvalue, tridiag_min_eigenvalue, TridiagEigen,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix dimension must be at least 1")]
    Empty,
    #[error("tridiagonal QL did not converge for eigenvalue {index} within {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },
    #[error("factorization is singular (pivot below {threshold:e})")]
    SingularFactor { threshold: f64 },
    #[error("inverse iteration stagnated after {iterations} iterations (residual {residual:e})")]
    Stagnation { iterations: usize, residual: f64 },
    #[error("iteration cap of {0} steps exceeded")]
    IterationCap(usize),
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotSpd { min_eigenvalue: f64 },
    #[error("non-finite entry encountered")]
    NonFinite,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    // scaled to survive very small or very large components
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * a.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

pub fn normalize(a: &mut [f64]) -> f64 {
    let n = norm2(a);
    if n > 0.0 {
        a.iter_mut().for_each(|v| *v /= n);
    }
    n
}
