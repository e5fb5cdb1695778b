use super::LinalgError;

/// Structural tag of a [`SymMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Tridiagonal,
    Full,
}

/// Real symmetric matrix.
///
/// Only the independent entries are stored (the three diagonals or the packed
/// lower triangle), so symmetry is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    storage: Storage,
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Tridiagonal { diag: Vec<f64>, off: Vec<f64> },
    Full { lower: Vec<f64> },
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn tridiagonal(diag: Vec<f64>, off: Vec<f64>) -> Result<Self, LinalgError> {
        if diag.is_empty() {
            return Err(LinalgError::Empty);
        }
        if off.len() + 1 != diag.len() {
            return Err(LinalgError::Dimension(format!(
                "diagonal has {} entries but off-diagonal has {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self {
            n: diag.len(),
            storage: Storage::Tridiagonal { diag, off },
        })
    }

    pub fn diagonal(diag: Vec<f64>) -> Result<Self, LinalgError> {
        let off = vec![0.0; diag.len().saturating_sub(1)];
        Self::tridiagonal(diag, off)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![1.0; n.max(1)]).expect("nonempty")
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n: n.max(1),
            storage: Storage::Full {
                lower: vec![0.0; n.max(1) * (n.max(1) + 1) / 2],
            },
        }
    }

    /// Builds a full matrix from entry function evaluated on the lower triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        Ok(Self {
            n,
            storage: Storage::Full { lower },
        })
    }

    /// Row-major lower triangle: a00, a10, a11, a20, a21, a22, ...
    pub fn from_lower_rows(n: usize, lower: Vec<f64>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        if lower.len() != n * (n + 1) / 2 {
            return Err(LinalgError::Dimension(format!(
                "expected {} lower-triangle entries for n = {n}, got {}",
                n * (n + 1) / 2,
                lower.len()
            )));
        }
        Ok(Self {
            n,
            storage: Storage::Full { lower },
        })
    }

    /// Symmetric matrix from a row-major dense square array; the lower triangle is used.
    pub fn from_dense(n: usize, a: &[f64]) -> Result<Self, LinalgError> {
        if a.len() != n * n {
            return Err(LinalgError::Dimension(format!(
                "dense array of length {} is not {n}x{n}",
                a.len()
            )));
        }
        Self::from_fn(n, |i, j| a[i * n + j])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> Band {
        match self.storage {
            Storage::Tridiagonal { .. } => Band::Tridiagonal,
            Storage::Full { .. } => Band::Full,
        }
    }

    pub fn as_tridiagonal(&self) -> Option<(&[f64], &[f64])> {
        match &self.storage {
            Storage::Tridiagonal { diag, off } => Some((diag, off)),
            Storage::Full { .. } => None,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        match &self.storage {
            Storage::Tridiagonal { off, .. } => off.iter().all(|&v| v == 0.0),
            Storage::Full { .. } => (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == 0.0)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Tridiagonal { diag, off } => {
                if i == j {
                    diag[i]
                } else if i.abs_diff(j) == 1 {
                    off[i.min(j)]
                } else {
                    0.0
                }
            }
            Storage::Full { lower } => lower[packed(i, j)],
        }
    }

    /// Sets entry (i, j) and its mirror. Tridiagonal storage rejects entries
    /// outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<(), LinalgError> {
        match &mut self.storage {
            Storage::Tridiagonal { diag, off } => {
                if i == j {
                    diag[i] = v;
                } else if i.abs_diff(j) == 1 {
                    off[i.min(j)] = v;
                } else {
                    return Err(LinalgError::Dimension(format!(
                        "entry ({i}, {j}) is outside the tridiagonal band"
                    )));
                }
            }
            Storage::Full { lower } => lower[packed(i, j)] = v,
        }
        Ok(())
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn to_full(&self) -> SymMatrix {
        match &self.storage {
            Storage::Full { .. } => self.clone(),
            Storage::Tridiagonal { .. } => SymMatrix::from_fn(self.n, |i, j| self.get(i, j)).expect("nonempty"),
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let n = self.n;
        match &self.storage {
            Storage::Tridiagonal { diag, off } => {
                let mut y: Vec<f64> = diag.iter().zip(x).map(|(d, v)| d * v).collect();
                for i in 0..n - 1 {
                    y[i] += off[i] * x[i + 1];
                    y[i + 1] += off[i] * x[i];
                }
                y
            }
            Storage::Full { lower } => {
                let mut y = vec![0.0; n];
                for i in 0..n {
                    let row = &lower[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
                    let mut acc = row[i] * x[i];
                    for j in 0..i {
                        acc += row[j] * x[j];
                        y[j] += row[j] * x[i];
                    }
                    y[i] += acc;
                }
                y
            }
        }
    }

    /// xᵀ A x
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        super::dot(x, &self.matvec(x))
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.n;
        match &self.storage {
            Storage::Tridiagonal { diag, off } => (0..n)
                .map(|i| {
                    let mut s = diag[i].abs();
                    if i > 0 {
                        s += off[i - 1].abs();
                    }
                    if i + 1 < n {
                        s += off[i].abs();
                    }
                    s
                })
                .fold(0.0, f64::max),
            Storage::Full { .. } => (0..n)
                .map(|i| (0..n).map(|j| self.get(i, j).abs()).sum::<f64>())
                .fold(0.0, f64::max),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Tridiagonal { diag, off } => diag.iter().chain(off.iter()).fold(0.0_f64, |m, v| m.max(v.abs())),
            Storage::Full { lower } => lower.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        }
    }

    /// `self + alpha * other`; the result is tridiagonal only when both are.
    pub fn add_scaled(&self, alpha: f64, other: &SymMatrix) -> Result<SymMatrix, LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        match (&self.storage, &other.storage) {
            (Storage::Tridiagonal { diag: d1, off: e1 }, Storage::Tridiagonal { diag: d2, off: e2 }) => {
                SymMatrix::tridiagonal(
                    d1.iter().zip(d2).map(|(a, b)| a + alpha * b).collect(),
                    e1.iter().zip(e2).map(|(a, b)| a + alpha * b).collect(),
                )
            }
            _ => SymMatrix::from_fn(self.n, |i, j| self.get(i, j) + alpha * other.get(i, j)),
        }
    }

    pub fn scaled(&self, alpha: f64) -> SymMatrix {
        let mut out = self.clone();
        match &mut out.storage {
            Storage::Tridiagonal { diag, off } => diag.iter_mut().chain(off.iter_mut()).for_each(|v| *v *= alpha),
            Storage::Full { lower } => lower.iter_mut().for_each(|v| *v *= alpha),
        }
        out
    }

    /// `self + s I`
    pub fn shift_diag(&self, s: f64) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            let v = out.get(i, i) + s;
            out.set(i, i, v).expect("diagonal is always in band");
        }
        out
    }

    /// A², symmetric because A is. Diagonal inputs stay diagonal.
    pub fn square(&self) -> SymMatrix {
        if self.is_diagonal() {
            return SymMatrix::diagonal(self.diagonal_entries().iter().map(|v| v * v).collect()).expect("nonempty");
        }
        let n = self.n;
        let dense = self.to_dense();
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| dense[i * n + k] * dense[k * n + j]).sum()).expect("nonempty")
    }

    /// Congruence `Bᵀ A B` with B given row-major dense (n×n).
    pub fn congruence(&self, b: &[f64]) -> SymMatrix {
        let n = self.n;
        assert_eq!(b.len(), n * n);
        let a = self.to_dense();
        // AB
        let mut ab = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    ab[i * n + j] += aik * b[k * n + j];
                }
            }
        }
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| b[k * n + i] * ab[k * n + j]).sum()).expect("nonempty")
    }

    /// Switches to tridiagonal storage when every entry outside the band is zero.
    pub fn compact(self) -> SymMatrix {
        if self.band() == Band::Tridiagonal {
            return self;
        }
        let n = self.n;
        let banded = (0..n).all(|i| (0..i.saturating_sub(1)).all(|j| self.get(i, j) == 0.0));
        if !banded {
            return self;
        }
        let diag = (0..n).map(|i| self.get(i, i)).collect();
        let off = (1..n).map(|i| self.get(i, i - 1)).collect();
        SymMatrix::tridiagonal(diag, off).expect("consistent lengths")
    }

    pub fn is_finite(&self) -> bool {
        match &self.storage {
            Storage::Tridiagonal { diag, off } => diag.iter().chain(off.iter()).all(|v| v.is_finite()),
            Storage::Full { lower } => lower.iter().all(|v| v.is_finite()),
        }
    }
}
