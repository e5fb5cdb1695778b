//! Random pencil generators and a dense-QL bisection oracle shared by the
//! integration tests.
#![allow(dead_code)]

use kgpencil::eig::det_scan_oracle;
use kgpencil::linalg::{sym_eigen, SymMatrix};
use kgpencil::pencil::KGPencil;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric with entries uniform in `[-scale, scale]`.
pub fn random_sym(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymMatrix {
    let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-scale..=scale)).collect();
    SymMatrix::from_fn(n, |i, j| 0.5 * (a[i * n + j] + a[j * n + i])).unwrap()
}

/// `BᵀB/n` for a random `B`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymMatrix {
    let b: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-scale..=scale)).collect();
    SymMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum::<f64>() / n as f64
    })
    .unwrap()
}

pub fn min_eigenvalue(a: &SymMatrix) -> f64 {
    sym_eigen(a, false).unwrap().values[0]
}

/// `H₀ = V² + 0.1·I + BᵀB/n`, so `T(0) ≻ 0`; `m` just below `√λ_min(H₀)`.
pub fn damped_pencil(rng: &mut ChaCha8Rng, n: usize) -> KGPencil {
    let v = random_sym(rng, n, 1.0);
    let h0 = v
        .square()
        .shift_diag(0.1)
        .add_scaled(1.0, &random_psd(rng, n, 1.0))
        .unwrap();
    let m = 0.999 * min_eigenvalue(&h0).sqrt();
    KGPencil::synthetic(h0, v, m).unwrap()
}

/// `H₀ = m²·I + BᵀB/n` with `V` random and rescaled to `‖V H₀^{-1/2}‖ = s`
/// (`s_now` is the current value for the unscaled `V`).
pub fn pencil_with_s(h0: SymMatrix, v: SymMatrix, m: f64, s_now: f64, s: f64) -> KGPencil {
    KGPencil::synthetic(h0, v.scaled(s / s_now), m).unwrap()
}

/// Eigenvalues of the pencil in `[lo, hi]` with multiplicity, by bisection on
/// dense-QL negative counts (via [`det_scan_oracle`]) down to width `tol`.
pub fn oracle_eigenvalues(p: &KGPencil, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let mid = 0.5 * (a + b);
        for br in det_scan_oracle(p, &[a, mid, b]).unwrap() {
            if br.hi - br.lo <= tol {
                out.extend(std::iter::repeat_n(br.midpoint(), br.jump));
            } else {
                stack.push((br.lo, br.hi));
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Sup-norm relative distance `max|x−y| / max|y|`.
pub fn sup_rel(x: &[f64], y: &[f64]) -> f64 {
    let top = y.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    x.iter().zip(y).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs())) / top
}
