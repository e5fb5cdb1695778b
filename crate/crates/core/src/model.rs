//! Radial discretization of `H₀ = −Δ + m²` and of multiplication potentials,
//! one angular-momentum sector at a time.
//!
//! The reduced radial operator `−u″ + l(l+1)/r²·u + m²u` is discretized with
//! Dirichlet conditions at `0` and `r_max` on the graded grid
//! `r_i = r_max·(i/(N+1))^g`. The nonuniform three-point stencil `W⁻¹K` is
//! symmetrized as `W^{-1/2} K W^{-1/2}`, so a discrete vector holds
//! `√w_i·u(r_i)` and the discrete norm is `Σ w_i u_i²`.

use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{ldlt_inertia, tridiag_count_below, tridiag_min_eigenvalue, LinalgError, SymMatrix};

/// Smallest interior point count accepted by [`build_h0`].
pub const MIN_GRID_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid too coarse: N = {0} < {MIN_GRID_POINTS}")]
    GridTooCoarse(usize),
    #[error("discretized H0 has smallest eigenvalue {min} below m^2 = {m2}")]
    BelowMass { min: f64, m2: f64 },
    #[error("potential is not finite at r = {r}")]
    NonFinite { r: f64 },
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("sign hint {hint:?} contradicted by V({r}) = {value}")]
    SignHint { hint: SignHint, r: f64, value: f64 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("gamma = {0} outside [0, 1/2)")]
    GammaOutOfRange(f64),
    #[error("potential table: {0}")]
    Table(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Graded radial grid on `(0, r_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    grading: f64,
    nodes: Vec<f64>,
    spacings: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize, grading: f64) -> Result<Self, ModelError> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(ModelError::InvalidGrid(format!("r_max must be positive, got {r_max}")));
        }
        if n == 0 {
            return Err(ModelError::InvalidGrid("need at least one interior node".into()));
        }
        if !(grading.is_finite() && grading >= 1.0) {
            return Err(ModelError::InvalidGrid(format!("grading must be >= 1, got {grading}")));
        }
        let full: Vec<f64> = (0..=n + 1)
            .map(|i| r_max * (i as f64 / (n + 1) as f64).powf(grading))
            .collect();
        let spacings: Vec<f64> = full.windows(2).map(|w| w[1] - w[0]).collect();
        if spacings.iter().any(|&h| !(h > 0.0)) {
            return Err(ModelError::InvalidGrid("nodes are not strictly increasing".into()));
        }
        let weights = (1..=n).map(|i| 0.5 * (full[i + 1] - full[i - 1])).collect();
        Ok(Self {
            r_max,
            grading,
            nodes: full[1..=n].to_vec(),
            spacings,
            weights,
        })
    }

    pub fn uniform(r_max: f64, n: usize) -> Result<Self, ModelError> {
        Self::new(r_max, n, 1.0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Interior nodes `r_1 < … < r_N`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `h_i = r_{i+1} − r_i` for `i = 0..=N` (N+1 values).
    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    /// Quadrature weights `w_i = (r_{i+1} − r_{i−1})/2` of the interior nodes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Maps a grid function `u` to the symmetric-frame vector `√w·u`.
    pub fn to_vector(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.weights).map(|(u, w)| u * w.sqrt()).collect()
    }

    /// Inverse of [`RadialGrid::to_vector`].
    pub fn to_grid_function(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.weights).map(|(x, w)| x / w.sqrt()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignHint {
    Negative,
    Positive,
    Indefinite,
}

/// Two-column `(r, v)` table, linearly interpolated, constant beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct TablePotential {
    r: Vec<f64>,
    v: Vec<f64>,
}

impl TablePotential {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self, ModelError> {
        if r.is_empty() || r.len() != v.len() {
            return Err(ModelError::Table("need matching, nonempty r and v columns".into()));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ModelError::Table("r must be strictly increasing".into()));
        }
        if r.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(ModelError::Table("non-finite sample".into()));
        }
        Ok(Self { r, v })
    }

    /// Parses CSV text. Blank lines, `#` comments and a non-numeric header
    /// line are skipped.
    pub fn parse_csv(text: &str) -> Result<Self, ModelError> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return Err(ModelError::Table(format!("line {}: expected two columns", lineno + 1)));
            }
            match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    r.push(a);
                    v.push(b);
                }
                _ if r.is_empty() && lineno == 0 => continue,
                _ => return Err(ModelError::Table(format!("line {}: not a number", lineno + 1))),
            }
        }
        Self::new(r, v)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Table(format!("{}: {e}", path.display())))?;
        Self::parse_csv(&text)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        if x <= self.r[0] {
            return self.v[0];
        }
        if x >= self.r[n - 1] {
            return self.v[n - 1];
        }
        let k = self.r.partition_point(|&ri| ri <= x);
        let (r0, r1, v0, v1) = (self.r[k - 1], self.r[k], self.v[k - 1], self.v[k]);
        v0 + (v1 - v0) * (x - r0) / (r1 - r0)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn first(&self) -> f64 {
        self.v[0]
    }

    pub fn last(&self) -> f64 {
        self.v[self.v.len() - 1]
    }

    pub fn sup_abs(&self) -> f64 {
        self.v.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Radial potential `eq(r)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// `−Ze²/r`.
    Coulomb {
        ze2: f64,
    },
    /// `base(r) + c`.
    Shifted {
        base: Box<PotentialKind>,
        c: f64,
    },
    Table(TablePotential),
    /// `depth·exp(−r²/width²)`.
    Gaussian {
        depth: f64,
        width: f64,
    },
    Zero,
}

impl PotentialKind {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            PotentialKind::Coulomb { ze2 } if !(ze2.is_finite() && *ze2 > 0.0) => Err(ModelError::InvalidPotential(
                format!("coulomb needs Ze^2 > 0, got {ze2}"),
            )),
            PotentialKind::Gaussian { depth, width } if !(depth.is_finite() && width.is_finite() && *width > 0.0) => {
                Err(ModelError::InvalidPotential(format!(
                    "gaussian needs finite depth and width > 0, got ({depth}, {width})"
                )))
            }
            PotentialKind::Shifted { base, c } => {
                if !c.is_finite() {
                    return Err(ModelError::InvalidPotential(format!("shift {c} is not finite")));
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            PotentialKind::Coulomb { ze2 } => -ze2 / r,
            PotentialKind::Shifted { base, c } => base.eval(r) + c,
            PotentialKind::Table(t) => t.eval(r),
            PotentialKind::Gaussian { depth, width } => depth * (-(r / width).powi(2)).exp(),
            PotentialKind::Zero => 0.0,
        }
    }

    pub fn shifted(self, c: f64) -> PotentialKind {
        PotentialKind::Shifted {
            base: Box::new(self),
            c,
        }
    }

    /// Coefficients `(c₋₁, c₀)` of the behaviour `c₋₁/r + c₀ + o(1)` as `r → 0`.
    pub fn origin_expansion(&self) -> (f64, f64) {
        match self {
            PotentialKind::Coulomb { ze2 } => (-ze2, 0.0),
            PotentialKind::Shifted { base, c } => {
                let (a, b) = base.origin_expansion();
                (a, b + c)
            }
            PotentialKind::Table(t) => (0.0, t.first()),
            PotentialKind::Gaussian { depth, .. } => (0.0, *depth),
            PotentialKind::Zero => (0.0, 0.0),
        }
    }

    /// `lim_{r→∞} eq(r)`.
    pub fn limit_at_infinity(&self) -> f64 {
        match self {
            PotentialKind::Shifted { base, c } => base.limit_at_infinity() + c,
            PotentialKind::Table(t) => t.last(),
            PotentialKind::Coulomb { .. } | PotentialKind::Gaussian { .. } | PotentialKind::Zero => 0.0,
        }
    }

    /// Whether `eq(r) → 0` as `r → ∞`.
    pub fn is_decaying(&self) -> bool {
        self.limit_at_infinity() == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub sign: SignHint,
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, sign: SignHint) -> Self {
        Self { kind, sign }
    }

    /// Sign hint implied by the kind (used when none is configured).
    pub fn natural(kind: PotentialKind) -> Self {
        let sign = natural_sign(&kind);
        Self { kind, sign }
    }

    fn check_sign(&self, grid: &RadialGrid) -> Result<(), ModelError> {
        for &r in grid.nodes() {
            let value = self.kind.eval(r);
            let bad = match self.sign {
                SignHint::Negative => value > 0.0,
                SignHint::Positive => value < 0.0,
                SignHint::Indefinite => false,
            };
            if bad {
                return Err(ModelError::SignHint {
                    hint: self.sign,
                    r,
                    value,
                });
            }
        }
        Ok(())
    }
}

fn natural_sign(kind: &PotentialKind) -> SignHint {
    match kind {
        PotentialKind::Coulomb { .. } => SignHint::Negative,
        PotentialKind::Gaussian { depth, .. } if *depth <= 0.0 => SignHint::Negative,
        PotentialKind::Gaussian { .. } => SignHint::Positive,
        PotentialKind::Zero => SignHint::Indefinite,
        PotentialKind::Shifted { base, c } => match (natural_sign(base), *c) {
            (SignHint::Negative, c) if c <= 0.0 => SignHint::Negative,
            (SignHint::Positive, c) if c >= 0.0 => SignHint::Positive,
            _ => SignHint::Indefinite,
        },
        PotentialKind::Table(t) => {
            if t.v.iter().all(|&v| v <= 0.0) {
                SignHint::Negative
            } else if t.v.iter().all(|&v| v >= 0.0) {
                SignHint::Positive
            } else {
                SignHint::Indefinite
            }
        }
    }
}

/// One angular-momentum sector of the radial problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    pub grid: RadialGrid,
    pub potential: PotentialSpec,
    pub l: u32,
    pub m: f64,
}

impl RadialProblem {
    pub fn new(grid: RadialGrid, potential: PotentialSpec, l: u32, m: f64) -> Result<Self, ModelError> {
        if !(m.is_finite() && m > 0.0) {
            return Err(ModelError::InvalidProblem(format!("mass must be positive, got {m}")));
        }
        potential.kind.validate()?;
        potential.check_sign(&grid)?;
        Ok(Self { grid, potential, l, m })
    }

    /// Multiplicity `2l+1` carried by every level of this sector in 3D.
    pub fn degeneracy(&self) -> u32 {
        2 * self.l + 1
    }
}

/// Symmetrized three-point stencil of `−d²/dr² + l(l+1)/r² + m²` on `grid`,
/// without the size and mass checks of [`build_h0`].
pub fn radial_stencil(grid: &RadialGrid, l: u32, m: f64) -> SymMatrix {
    let h = grid.spacings();
    let w = grid.weights();
    let cent = (l as f64) * (l as f64 + 1.0);
    let n = grid.len();
    let diag = (0..n)
        .map(|i| (1.0 / h[i] + 1.0 / h[i + 1]) / w[i] + cent / grid.nodes()[i].powi(2) + m * m)
        .collect();
    let off = (0..n.saturating_sub(1))
        .map(|i| -1.0 / (h[i + 1] * (w[i] * w[i + 1]).sqrt()))
        .collect();
    SymMatrix::tridiagonal(diag, off).expect("stencil lengths are consistent")
}

/// Discretized `H₀` for one sector; verifies `λ_min(H₀) ≥ m²`.
pub fn build_h0(problem: &RadialProblem) -> Result<SymMatrix, ModelError> {
    let n = problem.grid.len();
    if n < MIN_GRID_POINTS {
        return Err(ModelError::GridTooCoarse(n));
    }
    let h0 = radial_stencil(&problem.grid, problem.l, problem.m);
    let (d, e) = h0.as_tridiagonal().expect("stencil is tridiagonal");
    let m2 = problem.m * problem.m;
    // The Laplacian and centrifugal parts are positive, so any count here is a bug.
    if tridiag_count_below(d, e, m2 * (1.0 - 1e-12)) > 0 {
        return Err(ModelError::BelowMass {
            min: tridiag_min_eigenvalue(d, e),
            m2,
        });
    }
    Ok(h0)
}

/// Diagonal `V` with `V_ii = eq(r_i)`.
pub fn build_v(problem: &RadialProblem) -> Result<SymMatrix, ModelError> {
    let mut diag = Vec::with_capacity(problem.grid.len());
    for &r in problem.grid.nodes() {
        let v = problem.potential.kind.eval(r);
        if !v.is_finite() {
            return Err(ModelError::NonFinite { r });
        }
        diag.push(v);
    }
    Ok(SymMatrix::diagonal(diag)?)
}

/// Result of the pointwise criterion on `eq(r) ∓ √(m² + γ²/r²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NajmanBounds {
    pub q_minus: f64,
    pub q_plus: f64,
    /// `q− < q+`; otherwise the criterion is inapplicable.
    pub applicable: bool,
}

fn origin_limit(lead: f64, c0: f64) -> f64 {
    if lead > 0.0 {
        f64::INFINITY
    } else if lead < 0.0 {
        f64::NEG_INFINITY
    } else {
        c0
    }
}

/// `q− = sup (eq − √(m²+γ²/r²))`, `q+ = inf (eq + √(m²+γ²/r²))` over the grid
/// nodes together with the analytic limits at `r → 0` and `r → ∞`.
pub fn najman_q_bounds(
    potential: &PotentialKind,
    gamma: f64,
    m: f64,
    grid: &RadialGrid,
) -> Result<NajmanBounds, ModelError> {
    if !(gamma.is_finite() && (0.0..0.5).contains(&gamma)) {
        return Err(ModelError::GammaOutOfRange(gamma));
    }
    let (cm1, c0) = potential.origin_expansion();
    let v_inf = potential.limit_at_infinity();
    // r → 0: √(m²+γ²/r²) = γ/r + O(r) when γ > 0, → m when γ = 0.
    let (lo0, hi0) = if gamma > 0.0 {
        (origin_limit(cm1 - gamma, c0), origin_limit(cm1 + gamma, c0))
    } else {
        (origin_limit(cm1, c0 - m), origin_limit(cm1, c0 + m))
    };
    let mut q_minus = lo0.max(v_inf - m);
    let mut q_plus = hi0.min(v_inf + m);
    for &r in grid.nodes() {
        let v = potential.eval(r);
        let root = m.hypot(gamma / r);
        q_minus = q_minus.max(v - root);
        q_plus = q_plus.min(v + root);
    }
    Ok(NajmanBounds {
        q_minus,
        q_plus,
        applicable: q_minus < q_plus,
    })
}

/// Outcome of the entrywise positivity check of `(H₀ + c)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventPositivity {
    pub positive: bool,
    pub min_entry: f64,
}

/// Checks that every entry of `(H₀ + c)⁻¹` is strictly positive.
///
/// Columns are solved one at a time, so memory stays O(N).
pub fn discrete_positivity_resolvent(h0: &SymMatrix, c: f64) -> Result<ResolventPositivity, ModelError> {
    let n = h0.dim();
    let f = ldlt_inertia(&h0.shift_diag(c));
    if f.is_singular() {
        return Err(LinalgError::SingularFactor {
            threshold: f.threshold(),
        }
        .into());
    }
    let min_entry = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            f.solve_unrefined(&e)
                .map(|col| col.into_iter().fold(f64::INFINITY, f64::min))
        })
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))?;
    Ok(ResolventPositivity {
        positive: min_entry > 0.0,
        min_entry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tridiag_eigen;

    fn coulomb(ze2: f64) -> PotentialSpec {
        PotentialSpec::natural(PotentialKind::Coulomb { ze2 })
    }

    #[test]
    fn uniform_grid_spacing() {
        let g = RadialGrid::uniform(10.0, 9).unwrap();
        assert!(g.spacings().iter().all(|&h| (h - 1.0).abs() < 1e-14));
        assert!(g.weights().iter().all(|&w| (w - 1.0).abs() < 1e-14));
        assert!((g.nodes()[0] - 1.0).abs() < 1e-14 && (g.nodes()[8] - 9.0).abs() < 1e-13);
    }

    #[test]
    fn graded_grid_is_increasing() {
        let g = RadialGrid::new(60.0, 100, 2.0).unwrap();
        assert!(g.nodes()[0] > 0.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(*g.nodes().last().unwrap() < 60.0);
        assert!(RadialGrid::new(1.0, 10, 0.5).is_err());
    }

    #[test]
    fn two_point_uniform_stencil() {
        let g = RadialGrid::uniform(3.0, 2).unwrap();
        let h0 = radial_stencil(&g, 0, 1.0);
        let (d, e) = h0.as_tridiagonal().unwrap();
        assert!(d.iter().all(|&v| (v - 3.0).abs() < 1e-14));
        assert!((e[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn coarse_grid_rejected() {
        let p = RadialProblem::new(RadialGrid::uniform(3.0, 2).unwrap(), coulomb(0.3), 0, 1.0).unwrap();
        assert_eq!(build_h0(&p), Err(ModelError::GridTooCoarse(2)));
    }

    #[test]
    fn centrifugal_term_added() {
        let g = RadialGrid::uniform(10.0, 20).unwrap();
        let a = radial_stencil(&g, 0, 1.0);
        let b = radial_stencil(&g, 1, 1.0);
        for (i, &r) in g.nodes().iter().enumerate() {
            assert!((b.get(i, i) - a.get(i, i) - 2.0 / (r * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn h0_above_mass() {
        let p = RadialProblem::new(
            RadialGrid::uniform(10.0, 20).unwrap(),
            PotentialSpec::natural(PotentialKind::Zero),
            0,
            1.0,
        )
        .unwrap();
        let h0 = build_h0(&p).unwrap();
        let (d, e) = h0.as_tridiagonal().unwrap();
        let ev = tridiag_eigen(d, e, false).unwrap();
        assert!(ev.values[0] >= 1.0);
    }

    #[test]
    fn potential_samples() {
        let c = PotentialKind::Coulomb { ze2: 0.3 };
        assert!((c.eval(0.5) + 0.6).abs() < 1e-15);
        assert!((c.clone().shifted(0.1).eval(0.5) + 0.5).abs() < 1e-15);
        assert_eq!(PotentialKind::Zero.eval(2.0), 0.0);
        let g = PotentialKind::Gaussian {
            depth: -0.5,
            width: 1.5,
        };
        assert!((g.eval(1.5) + 0.5 / std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn sign_hint_is_enforced() {
        let grid = RadialGrid::uniform(10.0, 20).unwrap();
        let wrong = PotentialSpec::new(PotentialKind::Coulomb { ze2: 0.3 }, SignHint::Positive);
        assert!(matches!(
            RadialProblem::new(grid, wrong, 0, 1.0),
            Err(ModelError::SignHint { .. })
        ));
    }

    #[test]
    fn table_interpolation() {
        let t = TablePotential::parse_csv("r,v\n1,0\n2,1\n# tail\n4,-1\n").unwrap();
        assert_eq!(t.eval(0.5), 0.0);
        assert!((t.eval(1.5) - 0.5).abs() < 1e-15);
        assert!((t.eval(3.0) - 0.0).abs() < 1e-15);
        assert_eq!(t.eval(10.0), -1.0);
        assert!(TablePotential::parse_csv("1,0\n1,2\n").is_err());
    }

    #[test]
    fn najman_coulomb_and_free() {
        let grid = RadialGrid::new(60.0, 500, 2.0).unwrap();
        let b = najman_q_bounds(&PotentialKind::Coulomb { ze2: 0.3 }, 0.3, 1.0, &grid).unwrap();
        assert!((b.q_minus + 1.0).abs() < 1e-12 && b.q_plus.abs() < 1e-12 && b.applicable);
        let z = najman_q_bounds(&PotentialKind::Zero, 0.0, 1.0, &grid).unwrap();
        assert_eq!((z.q_minus, z.q_plus), (-1.0, 1.0));
        assert!(najman_q_bounds(&PotentialKind::Zero, 0.5, 1.0, &grid).is_err());
    }

    #[test]
    fn najman_bounded_table() {
        let grid = RadialGrid::uniform(10.0, 50).unwrap();
        let t = TablePotential::new(vec![0.0, 2.0, 4.0], vec![-0.2, 0.2, 0.0]).unwrap();
        let b = najman_q_bounds(&PotentialKind::Table(t), 0.0, 1.0, &grid).unwrap();
        assert!(b.q_minus <= -0.8 + 1e-15 && b.q_plus >= 0.8 - 1e-15);
    }

    #[test]
    fn resolvent_positivity() {
        let a = SymMatrix::tridiagonal(vec![2.0, 2.0], vec![-1.0]).unwrap();
        let r = discrete_positivity_resolvent(&a, 0.0).unwrap();
        assert!(r.positive && (r.min_entry - 1.0 / 3.0).abs() < 1e-15);
        let d = SymMatrix::diagonal(vec![2.0, 3.0]).unwrap();
        let r = discrete_positivity_resolvent(&d, 0.0).unwrap();
        assert!(!r.positive && r.min_entry == 0.0);
    }
}
