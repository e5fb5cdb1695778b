//! Symmetric indefinite LDLᵀ with 1×1 and 2×2 pivots.
//!
//! Full matrices use Bunch–Kaufman partial pivoting. Tridiagonal matrices use
//! Bunch's pivoting without interchanges, which keeps the factor banded and
//! costs O(n); its 1×1 pivots are exactly the Sturm sequence of the matrix.

use super::{LinalgError, SymMatrix};

/// Pivots smaller than this multiple of `‖A‖_∞` count as zero.
pub const ZERO_PIVOT_REL: f64 = 1e-14;

const BK_ALPHA: f64 = 0.640_388_203_202_207_6; // (1 + √17) / 8
const BUNCH_TRIDIAG_ALPHA: f64 = 0.618_033_988_749_894_9; // (√5 − 1) / 2

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inertia {
    pub n_neg: usize,
    pub n_zero: usize,
    pub n_pos: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.n_neg + self.n_zero + self.n_pos
    }
}

#[derive(Debug, Clone, Copy)]
enum Pivot {
    One(f64),
    Two { a: f64, b: f64, c: f64 },
}

#[derive(Debug, Clone)]
enum Lower {
    /// Multipliers for columns i−1 and i−2 of row i.
    Banded { l1: Vec<f64>, l2: Vec<f64> },
    /// Unit lower triangular, row-major n×n.
    Dense { l: Vec<f64>, perm: Vec<usize> },
}

/// Reusable LDLᵀ factorization handle. Immutable once built.
#[derive(Debug, Clone)]
pub struct LdltFactor {
    a: SymMatrix,
    threshold: f64,
    blocks: Vec<(usize, Pivot)>,
    lower: Lower,
    inertia: Inertia,
    det_sign: i8,
    log_abs_det: f64,
}

fn block_eigs(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let disc = (0.5 * (a - c)).hypot(b);
    let det = a * c - b * b;
    let big = if mean >= 0.0 { mean + disc } else { mean - disc };
    let small = if big != 0.0 { det / big } else { 0.0 };
    if small <= big {
        (small, big)
    } else {
        (big, small)
    }
}

struct Tally {
    inertia: Inertia,
    sign: i8,
    log_abs: f64,
}

impl Tally {
    fn new() -> Self {
        Self {
            inertia: Inertia::default(),
            sign: 1,
            log_abs: 0.0,
        }
    }

    fn push_value(&mut self, v: f64, threshold: f64) {
        if v.abs() < threshold || v == 0.0 {
            self.inertia.n_zero += 1;
            self.sign = 0;
        } else if v < 0.0 {
            self.inertia.n_neg += 1;
            self.sign = -self.sign;
        } else {
            self.inertia.n_pos += 1;
        }
        self.log_abs += v.abs().ln();
    }

    fn push(&mut self, p: &Pivot, threshold: f64) {
        match *p {
            Pivot::One(d) => self.push_value(d, threshold),
            Pivot::Two { a, b, c } => {
                let (e1, e2) = block_eigs(a, b, c);
                self.push_value(e1, threshold);
                self.push_value(e2, threshold);
            }
        }
    }
}

/// Factors `A` and reports its inertia. Never fails: near-zero pivots are
/// flagged through `n_zero` and the singular flag.
pub fn ldlt_inertia(a: &SymMatrix) -> LdltFactor {
    let threshold = ZERO_PIVOT_REL * a.norm_inf();
    let (blocks, lower) = match a.as_tridiagonal() {
        Some((d, e)) => factor_tridiagonal(d, e, a.max_abs()),
        None => factor_dense(a, threshold),
    };
    let mut tally = Tally::new();
    for (_, p) in &blocks {
        tally.push(p, threshold);
    }
    LdltFactor {
        a: a.clone(),
        threshold,
        blocks,
        lower,
        inertia: tally.inertia,
        det_sign: tally.sign,
        log_abs_det: tally.log_abs,
    }
}

/// Inertia only. For tridiagonal input this runs in O(n) without allocating.
pub fn inertia(a: &SymMatrix) -> Inertia {
    match a.as_tridiagonal() {
        Some((d, e)) => {
            let threshold = ZERO_PIVOT_REL * a.norm_inf();
            let mut tally = Tally::new();
            bunch_tridiagonal(d, e, a.max_abs(), |_, p, _| tally.push(&p, threshold));
            tally.inertia
        }
        None => ldlt_inertia(a).inertia,
    }
}

/// Solves `A x = b` with one step of iterative refinement.
pub fn solve_with_factor(f: &LdltFactor, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    f.solve(b)
}

/// Runs Bunch's tridiagonal pivoting; `emit(k, pivot, (l1, l2) for row after block)`.
fn bunch_tridiagonal(d: &[f64], e: &[f64], sigma: f64, mut emit: impl FnMut(usize, Pivot, Option<(usize, f64, f64)>)) {
    let n = d.len();
    let mut k = 0;
    let mut dk = d[0];
    while k < n {
        if k + 1 == n {
            emit(k, Pivot::One(dk), None);
            break;
        }
        if dk.abs() * sigma >= BUNCH_TRIDIAG_ALPHA * e[k] * e[k] {
            let l = if dk != 0.0 { e[k] / dk } else { 0.0 };
            emit(k, Pivot::One(dk), Some((k + 1, l, 0.0)));
            dk = d[k + 1] - l * e[k];
            k += 1;
        } else {
            let (a, b, c) = (dk, e[k], d[k + 1]);
            let det = a * c - b * b;
            if k + 2 < n {
                let ep = e[k + 1];
                let l1 = ep * a / det;
                let l2 = -ep * b / det;
                emit(k, Pivot::Two { a, b, c }, Some((k + 2, l1, l2)));
                dk = d[k + 2] - ep * l1;
            } else {
                emit(k, Pivot::Two { a, b, c }, None);
            }
            k += 2;
        }
    }
}

fn factor_tridiagonal(d: &[f64], e: &[f64], sigma: f64) -> (Vec<(usize, Pivot)>, Lower) {
    let n = d.len();
    let mut l1 = vec![0.0; n];
    let mut l2 = vec![0.0; n];
    let mut blocks = Vec::with_capacity(n);
    bunch_tridiagonal(d, e, sigma, |k, p, next| {
        blocks.push((k, p));
        if let Some((row, a, b)) = next {
            l1[row] = a;
            l2[row] = b;
        }
    });
    (blocks, Lower::Banded { l1, l2 })
}

fn factor_dense(a: &SymMatrix, threshold: f64) -> (Vec<(usize, Pivot)>, Lower) {
    let n = a.dim();
    let mut w = a.to_dense();
    let mut l = vec![0.0; n * n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    let mut k = 0;
    while k < n {
        let absakk = w[k * n + k].abs();
        let (mut imax, mut colmax) = (k, 0.0_f64);
        for i in k + 1..n {
            let v = w[i * n + k].abs();
            if v > colmax {
                colmax = v;
                imax = i;
            }
        }
        let negligible = absakk.max(colmax) < threshold;
        let (kp, kstep) = if negligible || absakk >= BK_ALPHA * colmax {
            (k, 1)
        } else {
            let mut rowmax = 0.0_f64;
            for j in k..n {
                if j != imax {
                    rowmax = rowmax.max(w[imax * n + j].abs());
                }
            }
            if absakk >= BK_ALPHA * colmax * (colmax / rowmax) {
                (k, 1)
            } else if w[imax * n + imax].abs() >= BK_ALPHA * rowmax {
                (imax, 1)
            } else {
                (imax, 2)
            }
        };
        let kk = k + kstep - 1;
        if kp != kk {
            for j in 0..n {
                w.swap(kk * n + j, kp * n + j);
            }
            for i in 0..n {
                w.swap(i * n + kk, i * n + kp);
            }
            for j in 0..k {
                l.swap(kk * n + j, kp * n + j);
            }
            perm.swap(kk, kp);
        }
        if kstep == 1 {
            let dkk = w[k * n + k];
            blocks.push((k, Pivot::One(dkk)));
            if !negligible && dkk != 0.0 {
                for i in k + 1..n {
                    l[i * n + k] = w[i * n + k] / dkk;
                }
                for i in k + 1..n {
                    let lik = l[i * n + k];
                    if lik == 0.0 {
                        continue;
                    }
                    for j in k + 1..=i {
                        w[i * n + j] -= lik * w[j * n + k];
                        w[j * n + i] = w[i * n + j];
                    }
                }
            }
        } else {
            let (a, b, c) = (w[k * n + k], w[(k + 1) * n + k], w[(k + 1) * n + k + 1]);
            let det = a * c - b * b;
            blocks.push((k, Pivot::Two { a, b, c }));
            for i in k + 2..n {
                let (w0, w1) = (w[i * n + k], w[i * n + k + 1]);
                l[i * n + k] = (c * w0 - b * w1) / det;
                l[i * n + k + 1] = (a * w1 - b * w0) / det;
            }
            for i in k + 2..n {
                let (li0, li1) = (l[i * n + k], l[i * n + k + 1]);
                for j in k + 2..=i {
                    w[i * n + j] -= li0 * w[j * n + k] + li1 * w[j * n + k + 1];
                    w[j * n + i] = w[i * n + j];
                }
            }
        }
        k += kstep;
    }
    (blocks, Lower::Dense { l, perm })
}

impl LdltFactor {
    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    /// Sign of det A: −1, 0 (singular to threshold) or +1.
    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn log_abs_det(&self) -> f64 {
        self.log_abs_det
    }

    pub fn is_singular(&self) -> bool {
        self.inertia.n_zero > 0
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.a
    }

    fn apply_inverse(&self, b: &[f64], clamp: Option<f64>) -> Vec<f64> {
        let n = self.a.dim();
        let mut y: Vec<f64> = match &self.lower {
            Lower::Banded { .. } => b.to_vec(),
            Lower::Dense { perm, .. } => perm.iter().map(|&p| b[p]).collect(),
        };
        // L z = y
        match &self.lower {
            Lower::Banded { l1, l2 } => {
                for i in 1..n {
                    let mut v = y[i] - l1[i] * y[i - 1];
                    if i >= 2 {
                        v -= l2[i] * y[i - 2];
                    }
                    y[i] = v;
                }
            }
            Lower::Dense { l, .. } => {
                for i in 1..n {
                    let s: f64 = (0..i).map(|j| l[i * n + j] * y[j]).sum();
                    y[i] -= s;
                }
            }
        }
        // D w = z
        for &(k, p) in &self.blocks {
            match p {
                Pivot::One(d) => {
                    let d = match clamp {
                        Some(t) if d.abs() < t => t.copysign(if d == 0.0 { 1.0 } else { d }),
                        _ => d,
                    };
                    y[k] /= d;
                }
                Pivot::Two { a, b, c } => {
                    let (y0, y1) = (y[k], y[k + 1]);
                    let (r0, r1) = solve_block(a, b, c, y0, y1, clamp);
                    y[k] = r0;
                    y[k + 1] = r1;
                }
            }
        }
        // Lᵀ u = w
        match &self.lower {
            Lower::Banded { l1, l2 } => {
                for i in (0..n).rev() {
                    let mut v = y[i];
                    if i + 1 < n {
                        v -= l1[i + 1] * y[i + 1];
                    }
                    if i + 2 < n {
                        v -= l2[i + 2] * y[i + 2];
                    }
                    y[i] = v;
                }
                y
            }
            Lower::Dense { l, perm } => {
                for i in (0..n).rev() {
                    let s: f64 = (i + 1..n).map(|j| l[j * n + i] * y[j]).sum();
                    y[i] -= s;
                }
                let mut x = vec![0.0; n];
                for (i, &p) in perm.iter().enumerate() {
                    x[p] = y[i];
                }
                x
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if b.len() != self.a.dim() {
            return Err(LinalgError::Dimension(format!(
                "right-hand side has length {}, matrix is {}x{}",
                b.len(),
                self.a.dim(),
                self.a.dim()
            )));
        }
        if self.is_singular() {
            return Err(LinalgError::SingularFactor {
                threshold: self.threshold,
            });
        }
        let mut x = self.apply_inverse(b, None);
        let ax = self.a.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let dx = self.apply_inverse(&r, None);
        x.iter_mut().zip(&dx).for_each(|(xi, di)| *xi += di);
        Ok(x)
    }

    /// Plain forward/diagonal/backward solve without refinement. For an
    /// M-matrix this involves no cancellation, so signs are exact.
    pub fn solve_unrefined(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if b.len() != self.a.dim() {
            return Err(LinalgError::Dimension(format!(
                "right-hand side has length {}, matrix is {}x{}",
                b.len(),
                self.a.dim(),
                self.a.dim()
            )));
        }
        if self.is_singular() {
            return Err(LinalgError::SingularFactor {
                threshold: self.threshold,
            });
        }
        Ok(self.apply_inverse(b, None))
    }

    /// Solve with near-zero pivots replaced by ±threshold. Used by inverse
    /// iteration, where the shifted matrix is singular on purpose.
    pub(crate) fn solve_regularized(&self, b: &[f64]) -> Vec<f64> {
        let t = self.threshold.max(f64::MIN_POSITIVE);
        self.apply_inverse(b, Some(t))
    }
}

fn solve_block(a: f64, b: f64, c: f64, y0: f64, y1: f64, clamp: Option<f64>) -> (f64, f64) {
    let det = a * c - b * b;
    let (e1, e2) = block_eigs(a, b, c);
    let needs_clamp = matches!(clamp, Some(t) if e1.abs() < t || e2.abs() < t);
    if !needs_clamp {
        return ((c * y0 - b * y1) / det, (a * y1 - b * y0) / det);
    }
    let t = clamp.unwrap_or(0.0);
    // eigenvector of e1: (b, e1 − a) or (e1 − c, b)
    let (mut v0, mut v1) = if (e1 - a).abs().max(b.abs()) >= (e1 - c).abs() {
        (b, e1 - a)
    } else {
        (e1 - c, b)
    };
    let nv = v0.hypot(v1);
    if nv == 0.0 {
        v0 = 1.0;
        v1 = 0.0;
    } else {
        v0 /= nv;
        v1 /= nv;
    }
    let (w0, w1) = (-v1, v0);
    let fix = |e: f64| {
        if e.abs() < t {
            t.copysign(if e == 0.0 { 1.0 } else { e })
        } else {
            e
        }
    };
    let p = (v0 * y0 + v1 * y1) / fix(e1);
    let q = (w0 * y0 + w1 * y1) / fix(e2);
    (p * v0 + q * w0, p * v1 + q * w1)
}
