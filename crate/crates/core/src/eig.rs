//! Real eigenvalues of a strongly damped pencil by inertia slicing.
//!
//! Outside the gap, `n_neg(T(λ))` counts the eigenvalues of the plus zone
//! below `λ` (for `λ ≥ ν+`) and of the minus zone above `λ` (for `λ ≤ ν−`).
//! Brackets where the count jumps are bisected, then each eigenpair is polished
//! by Rayleigh functional iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{dot, inverse_iteration, ldlt_inertia, norm2, normalize, sym_eigen, LinalgError};
use crate::pencil::{KGPencil, PencilError};

/// Jitter applied when `T(λ)` is exactly singular, in units of `m`.
pub const JITTER: f64 = 1e-10;
pub const MAX_REFINE_ITERATIONS: usize = 40;
/// Minimum semi-simplicity margin, in units of `m`.
pub const SEMISIMPLE_THRESHOLD: f64 = 1e-6;
/// Strictness threshold for one-signed eigenvectors.
pub const POSITIVITY_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigError {
    #[error("n_neg is not monotone outside the gap: count {count} at lambda = {lambda} lies outside [{lo}, {hi}]")]
    Monotonicity {
        lambda: f64,
        count: usize,
        lo: usize,
        hi: usize,
    },
    #[error("interval [{a}, {b}] is empty or reversed")]
    Interval { a: f64, b: f64 },
    #[error("no eigenvector found near lambda = {lambda}")]
    NoVector { lambda: f64 },
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

impl From<LinalgError> for EigError {
    fn from(e: LinalgError) -> Self {
        EigError::Pencil(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Minus => "minus_zone",
            Side::Plus => "plus_zone",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    StrictlyPositive,
    /// Nonnegative, but the smallest component is within `POSITIVITY_RATIO`
    /// of zero relative to the largest.
    BelowThreshold,
    SignChanging,
    NotApplicable,
}

impl Positivity {
    pub fn as_str(self) -> &'static str {
        match self {
            Positivity::StrictlyPositive => "strictly_positive",
            Positivity::BelowThreshold => "below_threshold",
            Positivity::SignChanging => "sign_changing",
            Positivity::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCount {
    /// Where the count was taken (after any jitter).
    pub lambda: f64,
    pub n_neg: usize,
    pub jittered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueRecord {
    pub lambda: f64,
    pub side: Side,
    pub multiplicity: usize,
    /// Orthonormal basis of the (numerical) kernel of `T(λ)`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖T(λ)x‖/‖x‖` per basis vector.
    pub residuals: Vec<f64>,
    /// `min |xᵀT′(λ)x|/‖x‖²` over the basis.
    pub semisimple_margin: f64,
    pub positivity: Positivity,
    /// Slicing bracket that isolated the eigenvalue.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

impl EigenvalueRecord {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0_f64, |a, &r| a.max(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOptions {
    /// Bracket width at which slicing stops, in units of `m`.
    pub bracket_tol: f64,
    /// Residual target of the refinement, in units of `m²`.
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            bracket_tol: 1e-9,
            residual_tol: 1e-10,
            seed: 42,
        }
    }
}

/// `n_neg(T(λ))`, nudged by `1e-10·m` (up to three times) off an exactly
/// singular `T(λ)`.
pub fn count_below(p: &KGPencil, lambda: f64) -> SliceCount {
    let mut l = lambda;
    for k in 0..4 {
        let c = p.negative_count(l);
        if !c.singular || k == 3 {
            return SliceCount {
                lambda: l,
                n_neg: c.n_neg,
                jittered: k > 0,
            };
        }
        l = lambda + JITTER * p.m() * (k + 1) as f64;
    }
    unreachable!()
}

/// Eigenvalues of `side` inside `[a, b]`, ascending.
pub fn eigenvalues_in(
    p: &KGPencil,
    a: f64,
    b: f64,
    side: Side,
    opts: &EigOptions,
) -> Result<Vec<EigenvalueRecord>, EigError> {
    if !(a < b) {
        return Err(EigError::Interval { a, b });
    }
    let brackets = isolate(p, a, b, opts.bracket_tol * p.m())?;
    let mut records: Vec<EigenvalueRecord> = brackets
        .par_iter()
        .map(|&(lo, hi, mult)| resolve_bracket(p, lo, hi, mult, side, opts))
        .collect::<Result<_, _>>()?;
    records.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(records)
}

/// Sequential bracket discovery: `(lo, hi, jump)` with `hi − lo ≤ width`.
fn isolate(p: &KGPencil, a: f64, b: f64, width: f64) -> Result<Vec<(f64, f64, usize)>, EigError> {
    let ca = count_below(p, a).n_neg;
    let cb = count_below(p, b).n_neg;
    let mut out = Vec::new();
    let mut stack = vec![(a, b, ca, cb)];
    while let Some((lo, hi, clo, chi)) = stack.pop() {
        if clo == chi {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width || mid <= lo || mid >= hi {
            out.push((lo, hi, clo.abs_diff(chi)));
            continue;
        }
        let cm = count_below(p, mid).n_neg;
        let (small, big) = (clo.min(chi), clo.max(chi));
        if cm < small || cm > big {
            return Err(EigError::Monotonicity {
                lambda: mid,
                count: cm,
                lo: small,
                hi: big,
            });
        }
        stack.push((mid, hi, cm, chi));
        stack.push((lo, mid, clo, cm));
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

fn residual(p: &KGPencil, lambda: f64, x: &[f64]) -> f64 {
    let t = p.t_of_lambda(lambda);
    norm2(&t.matvec(x)) / norm2(x)
}

fn side_root(p: &KGPencil, x: &[f64], side: Side) -> Option<f64> {
    let r = p.root_functionals(x).ok()?;
    Some(match side {
        Side::Minus => r.p_minus,
        Side::Plus => r.p_plus,
    })
}

/// Largest-magnitude component positive; ties go to the lowest index.
pub fn normalize_sign(x: &mut [f64]) {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x.get(best).is_some_and(|&v| v < 0.0) {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

fn resolve_bracket(
    p: &KGPencil,
    lo: f64,
    hi: f64,
    mult: usize,
    side: Side,
    opts: &EigOptions,
) -> Result<EigenvalueRecord, EigError> {
    let mid = 0.5 * (lo + hi);
    if mult == 1 {
        let t = p.t_of_lambda(mid);
        let start = inverse_iteration(&t, 0.0, None, 1e-6, 100)
            .map(|r| r.vector)
            .or_else(|_| single_vector(p, mid, opts.seed))?;
        let mut rec = refine_eigenpair_in(p, mid, &start, side, Some((lo, hi)), opts)?;
        rec.bracket = (lo, hi);
        return Ok(rec);
    }
    block_eigenpair(p, lo, hi, mult, side, opts)
}

fn single_vector(p: &KGPencil, lambda: f64, seed: u64) -> Result<Vec<f64>, EigError> {
    let mut v = block_inverse_iteration(p, lambda, 1, seed);
    v.pop().ok_or(EigError::NoVector { lambda })
}

/// `k` orthonormal vectors spanning the dominant subspace of `T(λ)⁻¹`.
fn block_inverse_iteration(p: &KGPencil, lambda: f64, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = p.dim();
    let f = ldlt_inertia(&p.t_of_lambda(lambda));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut block: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    orthonormalize(&mut block);
    for _ in 0..30 {
        let mut next: Vec<Vec<f64>> = block.iter().map(|x| f.solve_regularized(x)).collect();
        if next.iter().flatten().any(|v| !v.is_finite()) {
            break;
        }
        orthonormalize(&mut next);
        // subspace change via projections of the new basis on the old one
        let captured: f64 = next
            .iter()
            .map(|y| block.iter().map(|x| dot(x, y).powi(2)).sum::<f64>())
            .sum();
        block = next;
        if (k as f64 - captured).abs() <= 1e-24_f64.max(1e-15 * k as f64) {
            break;
        }
    }
    block
}

/// Modified Gram–Schmidt, twice; vectors that vanish are dropped.
fn orthonormalize(block: &mut Vec<Vec<f64>>) {
    for _ in 0..2 {
        let mut done: Vec<Vec<f64>> = Vec::with_capacity(block.len());
        for mut x in block.drain(..) {
            for q in &done {
                let c = dot(&x, q);
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
            }
            if normalize(&mut x) > 0.0 {
                done.push(x);
            }
        }
        *block = done;
    }
}

fn block_eigenpair(
    p: &KGPencil,
    lo: f64,
    hi: f64,
    mult: usize,
    side: Side,
    opts: &EigOptions,
) -> Result<EigenvalueRecord, EigError> {
    let mut lambda = 0.5 * (lo + hi);
    let mut block = Vec::new();
    let mut iterations = 0;
    for it in 1..=8 {
        iterations = it;
        block = block_inverse_iteration(p, lambda, mult, opts.seed);
        let roots: Vec<f64> = block.iter().filter_map(|x| side_root(p, x, side)).collect();
        if roots.is_empty() {
            break;
        }
        let next = roots.iter().sum::<f64>() / roots.len() as f64;
        let moved = (next - lambda).abs();
        lambda = next.clamp(lo, hi);
        if moved <= 4.0 * f64::EPSILON * lambda.abs().max(p.m()) {
            break;
        }
    }
    if block.is_empty() {
        return Err(EigError::NoVector { lambda });
    }
    for x in &mut block {
        normalize_sign(x);
    }
    Ok(finish_record(p, lambda, block, side, (lo, hi), iterations))
}

fn finish_record(
    p: &KGPencil,
    lambda: f64,
    vectors: Vec<Vec<f64>>,
    side: Side,
    bracket: (f64, f64),
    iterations: usize,
) -> EigenvalueRecord {
    let residuals = vectors.iter().map(|x| residual(p, lambda, x)).collect();
    let semisimple_margin = vectors
        .iter()
        .map(|x| derivative_form(p, lambda, x).abs())
        .fold(f64::INFINITY, f64::min);
    let positivity = if vectors.len() == 1 && p.is_irreducible_tridiagonal() {
        one_signed(&vectors[0])
    } else {
        Positivity::NotApplicable
    };
    EigenvalueRecord {
        lambda,
        side,
        multiplicity: vectors.len(),
        eigenvectors: vectors,
        residuals,
        semisimple_margin,
        positivity,
        bracket,
        iterations,
    }
}

/// `xᵀT′(λ)x/‖x‖² = 2((V−λ)x, x)/‖x‖²`.
fn derivative_form(p: &KGPencil, lambda: f64, x: &[f64]) -> f64 {
    let vx = p.v().matvec(x);
    2.0 * (dot(&vx, x) - lambda * dot(x, x)) / dot(x, x)
}

/// Strictly one-signed when every component, after sign normalization,
/// exceeds `POSITIVITY_RATIO` times the largest.
pub fn one_signed(x: &[f64]) -> Positivity {
    match min_component_ratio(x) {
        r if r > POSITIVITY_RATIO => Positivity::StrictlyPositive,
        r if r >= 0.0 => Positivity::BelowThreshold,
        _ => Positivity::SignChanging,
    }
}

/// `min xᵢ / max xᵢ` after sign normalization (NaN for the zero vector).
pub fn min_component_ratio(x: &[f64]) -> f64 {
    let mut y = x.to_vec();
    normalize_sign(&mut y);
    let max = y.iter().fold(0.0_f64, |a, &v| a.max(v));
    let min = y.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if max > 0.0 {
        min / max
    } else {
        f64::NAN
    }
}

/// Rayleigh functional iteration `λ ← p_side(x)`, `x ← T(λ)⁻¹x` from
/// `(λ̂, x̂)`. An exact input returns after zero iterations.
pub fn refine_eigenpair(
    p: &KGPencil,
    lambda_hat: f64,
    x_hat: &[f64],
    side: Side,
) -> Result<EigenvalueRecord, EigError> {
    refine_eigenpair_in(p, lambda_hat, x_hat, side, None, &EigOptions::default())
}

fn refine_eigenpair_in(
    p: &KGPencil,
    lambda_hat: f64,
    x_hat: &[f64],
    side: Side,
    bracket: Option<(f64, f64)>,
    opts: &EigOptions,
) -> Result<EigenvalueRecord, EigError> {
    let scale = p.m() * p.m();
    let target = opts.residual_tol * scale;
    let mut x = x_hat.to_vec();
    if normalize(&mut x) == 0.0 {
        return Err(EigError::Pencil(PencilError::ZeroVector));
    }
    let mut lambda = lambda_hat;
    let mut res = residual(p, lambda, &x);
    let mut history = vec![res];
    let mut best = (res, lambda, x.clone());
    let mut iterations = 0;
    let inside = |l: f64| bracket.is_none_or(|(lo, hi)| l >= lo && l <= hi);
    while res > target && iterations < MAX_REFINE_ITERATIONS {
        iterations += 1;
        let Some(next) = side_root(p, &x, side) else { break };
        if !inside(next) {
            break;
        }
        lambda = next;
        let f = ldlt_inertia(&p.t_of_lambda(lambda));
        let mut y = f.solve_regularized(&x);
        if !y.iter().all(|v| v.is_finite()) || normalize(&mut y) == 0.0 {
            break;
        }
        if dot(&x, &y) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        x = y;
        // the Rayleigh functional of the new vector is the better estimate
        if let Some(l) = side_root(p, &x, side).filter(|&l| inside(l)) {
            lambda = l;
        }
        res = residual(p, lambda, &x);
        history.push(res);
        if res < best.0 {
            best = (res, lambda, x.clone());
        }
        // stalled at the rounding floor: no decrease over the last 5 steps
        let k = history.len();
        if k > 5 && history[k - 5..].windows(2).all(|w| w[1] >= w[0]) {
            break;
        }
    }
    let (res, mut lambda, mut x) = best;
    if let Some((mut lo, mut hi)) = bracket.filter(|_| res > target) {
        // fall back to bisection on the count within the bracket
        let clo = count_below(p, lo).n_neg;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(p, mid).n_neg == clo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let candidate = 0.5 * (lo + hi);
        if let Ok(r) = inverse_iteration(&p.t_of_lambda(candidate), 0.0, Some(&x), 1e-14, 100) {
            if residual(p, candidate, &r.vector) < res {
                lambda = candidate;
                x = r.vector;
            }
        }
    }
    normalize_sign(&mut x);
    let b = bracket.unwrap_or((lambda, lambda));
    Ok(finish_record(p, lambda, vec![x], side, b, iterations))
}

/// Outcome of the semi-simplicity test at one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemisimpleCertificate {
    pub margin: f64,
    pub passes: bool,
    /// `max | |xᵀT′(λ)x|/‖x‖² − 2√(μ(x)²+c(x)) |` over the basis.
    pub cross_check: f64,
}

pub fn semisimplicity_certificate(rec: &EigenvalueRecord, p: &KGPencil) -> SemisimpleCertificate {
    let mut cross = 0.0_f64;
    for x in &rec.eigenvectors {
        let d = derivative_form(p, rec.lambda, x).abs();
        match p.root_functionals(x) {
            Ok(r) => cross = cross.max((d - 2.0 * r.discriminant.sqrt()).abs()),
            Err(_) => cross = f64::INFINITY,
        }
    }
    SemisimpleCertificate {
        margin: rec.semisimple_margin,
        passes: rec.semisimple_margin >= SEMISIMPLE_THRESHOLD * p.m(),
        cross_check: cross,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalCertificate {
    pub side: Side,
    pub lambda: f64,
    pub simple: bool,
    pub positivity: Positivity,
    /// [`min_component_ratio`] of the eigenvector when the eigenvalue is simple.
    pub min_ratio: Option<f64>,
}

/// Simplicity and positivity at the eigenvalues equal to `ν−` or `ν+`
/// (within `tol·m`).
pub fn extremal_certificates(
    records: &[EigenvalueRecord],
    nu_minus: f64,
    nu_plus: f64,
    p: &KGPencil,
    tol: f64,
) -> Vec<ExtremalCertificate> {
    let irreducible = p.is_irreducible_tridiagonal();
    records
        .iter()
        .filter(|r| match r.side {
            Side::Minus => (r.lambda - nu_minus).abs() <= tol * p.m(),
            Side::Plus => (r.lambda - nu_plus).abs() <= tol * p.m(),
        })
        .map(|r| ExtremalCertificate {
            side: r.side,
            lambda: r.lambda,
            simple: r.multiplicity == 1,
            positivity: if irreducible && r.multiplicity == 1 {
                one_signed(&r.eigenvectors[0])
            } else {
                Positivity::NotApplicable
            },
            min_ratio: (r.multiplicity == 1).then(|| min_component_ratio(&r.eigenvectors[0])),
        })
        .collect()
}

/// Every eigenvalue of both zones, from `±λ_cap` to `ν∓`. The sweeps reach
/// slightly into the gap so that eigenvalues at `ν±` are bracketed.
pub fn all_eigenvalues(
    p: &KGPencil,
    nu_minus: f64,
    nu_plus: f64,
    opts: &EigOptions,
) -> Result<Vec<EigenvalueRecord>, EigError> {
    let cap = p.lambda_cap()?;
    let pad = (opts.bracket_tol * p.m()).min(0.25 * (nu_plus - nu_minus));
    let mut out = eigenvalues_in(p, -cap, nu_minus + pad, Side::Minus, opts)?;
    out.extend(eigenvalues_in(p, nu_plus - pad, cap, Side::Plus, opts)?);
    Ok(out)
}

/// A grid step where the negative count or the (nonzero) sign of `det T`
/// changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBracket {
    pub lo: f64,
    pub hi: f64,
    /// `|Δn_neg|`, or 1 for a determinant sign change without a count jump.
    pub jump: usize,
}

impl OracleBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Brute-force scan over `grid` (ascending): negative counts from a dense QL
/// eigensolve and determinant signs from LDLᵀ.
pub fn det_scan_oracle(p: &KGPencil, grid: &[f64]) -> Result<Vec<OracleBracket>, EigError> {
    let sample = |l: f64| -> Result<(usize, i8), EigError> {
        let t = p.t_of_lambda(l).to_full();
        let ev = sym_eigen(&t, false)?;
        Ok((
            ev.values.iter().filter(|&&v| v < 0.0).count(),
            ldlt_inertia(&t).det_sign(),
        ))
    };
    let samples: Vec<(usize, i8)> = grid.par_iter().map(|&l| sample(l)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (w, s) in grid.windows(2).zip(samples.windows(2)) {
        let jump = s[0].0.abs_diff(s[1].0);
        if jump > 0 {
            out.push(OracleBracket {
                lo: w[0],
                hi: w[1],
                jump,
            });
        } else if s[0].1 != 0 && s[1].1 != 0 && s[0].1 != s[1].1 {
            out.push(OracleBracket {
                lo: w[0],
                hi: w[1],
                jump: 1,
            });
        }
    }
    Ok(out)
}
