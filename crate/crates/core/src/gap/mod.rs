//! The gap `(ν−, ν+)` between the two root zones, damping certificates and
//! a-priori bounds on the gap.
//!
//! `g(λ) = λ_min(T(λ))` is concave, positive exactly on `(ν−, ν+)` when the
//! pencil is strongly damped, and zero at `ν±`.

pub mod bounds;
pub mod quadrature;
pub mod rollnik;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{
    inverse_iteration, normalize, sym_eigen, tridiag_kth_eigenvalue, tridiag_kth_eigenvalue_tol, LinalgError,
};
use crate::pencil::{KGPencil, PencilError};

pub use bounds::{
    a_of_b, apriori_intervals, default_b_grid, form_bound_constants, profile_lower_bound, s_norm, s_norm_lanczos,
    ExtraBounds, FormBoundConstants, FormPair, Interval,
};
pub use rollnik::{rollnik_norm, RollnikResult};

/// Absolute bisection tolerance for `g` on tridiagonal `T(λ)`, in units of `m²`.
const G_ABS_TOL: f64 = 1e-13;
const GOLDEN_ITERATIONS: usize = 200;
const BASIS_PROBES: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("T({lambda}) is not positive definite; no damping certificate")]
    NotCertified { lambda: f64 },
    #[error("no sign change of g on the {side} side within |lambda| <= {cap:e}; root zones nearly touch")]
    BracketNotFound { side: &'static str, cap: f64 },
    #[error("g fails concavity at lambda = {lambda}: {value:e} below the chord {chord:e}")]
    Concavity { lambda: f64, value: f64, chord: f64 },
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

impl From<LinalgError> for GapError {
    fn from(e: LinalgError) -> Self {
        GapError::Pencil(e.into())
    }
}

/// `λ_min(T(λ))`.
pub fn g_of_lambda(p: &KGPencil, lambda: f64) -> f64 {
    let t = p.t_of_lambda(lambda);
    if let Some((d, e)) = t.as_tridiagonal() {
        return tridiag_kth_eigenvalue_tol(d, e, 0, G_ABS_TOL * p.m() * p.m());
    }
    match sym_eigen(&t, false) {
        Ok(ev) => ev.values[0],
        Err(_) => dense_min_by_inertia(p, lambda),
    }
}

fn dense_min_by_inertia(p: &KGPencil, lambda: f64) -> f64 {
    let t = p.t_of_lambda(lambda);
    let r = t.norm_inf();
    let (mut lo, mut hi) = (-r, r);
    while hi - lo > 2.0 * f64::EPSILON * r.max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if crate::linalg::inertia(&t.shift_diag(-mid)).n_neg >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The lowest `k` eigenvectors of `T(λ)` (fewer if inverse iteration stalls).
pub fn lowest_eigenvectors(p: &KGPencil, lambda: f64, k: usize) -> Vec<Vec<f64>> {
    let t = p.t_of_lambda(lambda);
    let k = k.min(t.dim());
    if let Some((d, e)) = t.as_tridiagonal() {
        return (0..k)
            .filter_map(|j| {
                let ev = tridiag_kth_eigenvalue(d, e, j);
                inverse_iteration(&t, ev, None, 1e-10, 60).ok().map(|r| r.vector)
            })
            .collect();
    }
    match sym_eigen(&t, true) {
        Ok(ev) => (0..k).filter_map(|j| ev.vector(j)).collect(),
        Err(_) => Vec::new(),
    }
}

/// Outcome of the damping check.
#[derive(Debug, Clone, PartialEq)]
pub enum Damping {
    /// `T(λ₀) ≻ 0`.
    Certified { lambda0: f64, g: f64 },
    /// `x` has no two distinct real roots.
    Counterexample { x: Vec<f64>, discriminant: f64 },
    /// `g ≤ 0` everywhere sampled but no counterexample vector found.
    Inconclusive { best_lambda: f64, best_g: f64 },
}

impl Damping {
    pub fn lambda0(&self) -> Option<f64> {
        match self {
            Damping::Certified { lambda0, .. } => Some(*lambda0),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Damping::Certified { .. } => "certified",
            Damping::Counterexample { .. } => "counterexample",
            Damping::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - gr * (hi - lo);
    let mut x2 = lo + gr * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs() + hi.abs()) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Certifies strong damping by finding `λ₀` with `T(λ₀) ≻ 0`, trying the
/// hints first and then maximizing the concave `g`. Failing that, looks for
/// a vector whose quadratic `t(·)[x]` lacks two distinct real roots.
pub fn certify_strong_damping(p: &KGPencil, hints: &[f64], n_samples: usize, seed: u64) -> Result<Damping, GapError> {
    for &h in hints.iter().filter(|h| h.is_finite()) {
        if p.is_positive_at(h) {
            return Ok(Damping::Certified {
                lambda0: h,
                g: g_of_lambda(p, h),
            });
        }
    }
    let cap = p.lambda_cap()?;
    let (best_lambda, best_g) = golden_max(|l| g_of_lambda(p, l), -cap, cap);
    if p.is_positive_at(best_lambda) {
        return Ok(Damping::Certified {
            lambda0: best_lambda,
            g: best_g,
        });
    }

    let n = p.dim();
    let test = |x: &[f64]| -> Option<Damping> {
        match p.root_functionals(x) {
            Err(PencilError::NotStronglyDampedAt { x, discriminant }) => {
                Some(Damping::Counterexample { x, discriminant })
            }
            _ => None,
        }
    };
    let vecs = lowest_eigenvectors(p, best_lambda, 2);
    let mut candidates: Vec<Vec<f64>> = vecs.clone();
    if vecs.len() == 2 {
        for sgn in [1.0, -1.0] {
            let mut c: Vec<f64> = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a + sgn * b).collect();
            normalize(&mut c);
            candidates.push(c);
        }
    }
    for x in &candidates {
        if let Some(d) = test(x) {
            return Ok(d);
        }
    }
    for i in 0..n.min(BASIS_PROBES) {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        if let Some(d) = test(&e) {
            return Ok(d);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if let Some(d) = test(&x) {
            return Ok(d);
        }
    }
    Ok(Damping::Inconclusive { best_lambda, best_g })
}

/// `ν±` with the values of `g` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuPair {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub g_minus: f64,
    pub g_plus: f64,
}

/// Bisects the sign change of `T(λ) ≻ 0` on each side of `λ₀` down to
/// adjacent floats, then checks `|g(ν±)| ≤ tol·m²` and concavity of `g` inside.
pub fn compute_nu(p: &KGPencil, lambda0: f64, tol: f64) -> Result<NuPair, GapError> {
    if !p.is_positive_at(lambda0) {
        return Err(GapError::NotCertified { lambda: lambda0 });
    }
    let cap = p.lambda_cap()?;
    let m = p.m();
    let edge = |dir: f64, side: &'static str| -> Result<f64, GapError> {
        let mut inside = lambda0;
        let mut step = 1e-2 * m;
        let mut outside;
        loop {
            let probe = lambda0 + dir * step;
            if probe.abs() > cap {
                return Err(GapError::BracketNotFound { side, cap });
            }
            if p.is_positive_at(probe) {
                inside = probe;
                step *= 2.0;
            } else {
                outside = probe;
                break;
            }
        }
        loop {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if p.is_positive_at(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        // adjacent floats: keep the one closer to the zero of g
        if g_of_lambda(p, outside).abs() < g_of_lambda(p, inside).abs() {
            Ok(outside)
        } else {
            Ok(inside)
        }
    };
    let nu_minus = edge(-1.0, "minus")?;
    let nu_plus = edge(1.0, "plus")?;
    let g_minus = g_of_lambda(p, nu_minus);
    let g_plus = g_of_lambda(p, nu_plus);
    let scale = m * m;
    for (lambda, g) in [(nu_minus, g_minus), (nu_plus, g_plus)] {
        if g.abs() > tol * scale {
            return Err(GapError::Concavity {
                lambda,
                value: g,
                chord: 0.0,
            });
        }
    }
    for i in 1..8 {
        let t = i as f64 / 8.0;
        let lambda = nu_minus + t * (nu_plus - nu_minus);
        let value = g_of_lambda(p, lambda);
        let chord = (1.0 - t) * g_minus + t * g_plus;
        if value < chord - 1e-10 * scale {
            return Err(GapError::Concavity { lambda, value, chord });
        }
    }
    Ok(NuPair {
        nu_minus,
        nu_plus,
        g_minus,
        g_plus,
    })
}

/// `(λ, g(λ))` at `points` equally spaced values in `[lo, hi]`.
pub fn g_profile(p: &KGPencil, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
    let k = points.max(2);
    (0..k)
        .into_par_iter()
        .map(|i| {
            let l = lo + (hi - lo) * i as f64 / (k - 1) as f64;
            (l, g_of_lambda(p, l))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct GapOptions {
    pub b_grid: Vec<f64>,
    pub nu_tol: f64,
    pub profile_points: usize,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self {
            b_grid: default_b_grid(),
            nu_tol: 1e-8,
            profile_points: 101,
            n_samples: 1000,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub damping: Damping,
    pub nu: Option<NuPair>,
    pub constants: FormBoundConstants,
    pub intervals: Vec<Interval>,
    pub g_profile: Vec<(f64, f64)>,
    /// `ν+ < m`, tested rather than assumed.
    pub nu_plus_below_mass: Option<bool>,
}

/// Damping certificate, `ν±`, form bounds, every a-priori interval and a
/// sampled profile of `g`.
pub fn gap_report(p: &KGPencil, opts: &GapOptions, extra: &ExtraBounds, hints: &[f64]) -> Result<GapReport, GapError> {
    let constants = form_bound_constants(p, &opts.b_grid)?;
    let intervals = apriori_intervals(&constants, p.v_sign(), extra);
    let mut all_hints = hints.to_vec();
    all_hints.extend(intervals.iter().filter(|i| i.applicable).map(|i| 0.5 * (i.lo + i.hi)));
    let damping = certify_strong_damping(p, &all_hints, opts.n_samples, opts.seed)?;
    let nu = match damping.lambda0() {
        Some(l0) => Some(compute_nu(p, l0, opts.nu_tol)?),
        None => None,
    };
    let (lo, hi) = match nu {
        Some(n) => {
            let w = 0.25 * (n.nu_plus - n.nu_minus);
            (n.nu_minus - w, n.nu_plus + w)
        }
        None => {
            let r = 1.5 * (p.m() + p.v_norm()?);
            (-r, r)
        }
    };
    let g_profile = g_profile(p, lo, hi, opts.profile_points);
    Ok(GapReport {
        nu_plus_below_mass: nu.map(|n| n.nu_plus < p.m()),
        damping,
        nu,
        constants,
        intervals,
        g_profile,
    })
}
