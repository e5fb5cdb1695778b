//! The quadratic pencil `T(λ) = H₀ − V² + 2λV − λ²I = H₀ − (V − λ)²`.

use std::path::Path;

use thiserror::Error;

use crate::linalg::{
    dot, inertia, norm2, sym_eigen, sym_sqrt_and_invsqrt, tridiag_count_below, tridiag_count_below_checked,
    tridiag_min_eigenvalue, LinalgError, SymMatrix,
};
use crate::model::{build_h0, build_v, ModelError, RadialProblem};

/// Largest dimension for which the dense `H₀^{±1/2}` route is attempted.
pub const MAX_DENSE_FACTOR_DIM: usize = 2000;

/// Relative discriminant threshold below which damping is reported broken.
pub const DISCRIMINANT_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PencilError {
    #[error("dimension mismatch: H0 is {h0}x{h0}, V is {v}x{v}")]
    Dimension { h0: usize, v: usize },
    #[error("H0 has smallest eigenvalue {min} below m^2 = {m2}")]
    BelowMass { min: f64, m2: f64 },
    #[error("mass must be positive, got {0}")]
    Mass(f64),
    #[error("zero vector has no root functionals")]
    ZeroVector,
    #[error("quadratic form has no two distinct real roots at the given vector (discriminant {discriminant:e})")]
    NotStronglyDampedAt { x: Vec<f64>, discriminant: f64 },
    #[error("dimension {n} exceeds the dense limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("matrix file: {0}")]
    MatrixFile(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Where a pencil came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Radial sector with angular momentum `l`.
    Radial {
        l: u32,
    },
    Synthetic,
}

/// The two real roots of `λ ↦ t(λ)[x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub p_minus: f64,
    pub p_plus: f64,
    /// `μ(x)² + c(x)`.
    pub discriminant: f64,
    pub mu: f64,
    pub c: f64,
}

/// Sign structure of `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VSign {
    pub nonneg: bool,
    pub nonpos: bool,
}

/// Negative count of `T(λ)`, with a flag for an exactly singular pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegativeCount {
    pub n_neg: usize,
    pub singular: bool,
}

/// Matrix triple `(H₀, V, m)`.
#[derive(Debug, Clone)]
pub struct KGPencil {
    h0: SymMatrix,
    v: SymMatrix,
    m: f64,
    origin: Origin,
    h0_minus_v2: SymMatrix,
}

impl KGPencil {
    pub fn new(h0: SymMatrix, v: SymMatrix, m: f64, origin: Origin) -> Result<Self, PencilError> {
        if h0.dim() != v.dim() {
            return Err(PencilError::Dimension {
                h0: h0.dim(),
                v: v.dim(),
            });
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(PencilError::Mass(m));
        }
        if !h0.is_finite() || !v.is_finite() {
            return Err(LinalgError::NonFinite.into());
        }
        let m2 = m * m;
        let floor = m2 - 1e-10 * h0.norm_inf();
        let below = match h0.as_tridiagonal() {
            Some((d, e)) => tridiag_count_below(d, e, floor) > 0,
            None => inertia(&h0.shift_diag(-floor)).n_neg > 0,
        };
        if below {
            let min = match h0.as_tridiagonal() {
                Some((d, e)) => tridiag_min_eigenvalue(d, e),
                None => sym_eigen(&h0, false)?.values[0],
            };
            return Err(PencilError::BelowMass { min, m2 });
        }
        let h0_minus_v2 = h0.add_scaled(-1.0, &v.square())?;
        Ok(Self {
            h0,
            v,
            m,
            origin,
            h0_minus_v2,
        })
    }

    pub fn synthetic(h0: SymMatrix, v: SymMatrix, m: f64) -> Result<Self, PencilError> {
        Self::new(h0, v, m, Origin::Synthetic)
    }

    pub fn from_radial(problem: &RadialProblem) -> Result<Self, PencilError> {
        let h0 = build_h0(problem)?;
        let v = build_v(problem)?;
        Self::new(h0, v, problem.m, Origin::Radial { l: problem.l })
    }

    /// Parses the plain-text matrix format: the dimension `N`, then the lower
    /// triangle of `H₀` row by row, then that of `V`. `#` starts a comment.
    /// Without an explicit mass, `m = √λ_min(H₀)`.
    pub fn parse_matrix_text(text: &str, m: Option<f64>) -> Result<Self, PencilError> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let n: usize = tokens
            .next()
            .ok_or_else(|| PencilError::MatrixFile("empty file".into()))?
            .parse()
            .map_err(|e| PencilError::MatrixFile(format!("dimension header: {e}")))?;
        if n == 0 {
            return Err(PencilError::MatrixFile("dimension must be positive".into()));
        }
        let count = n * (n + 1) / 2;
        let mut read = |what: &str| -> Result<Vec<f64>, PencilError> {
            (0..count)
                .map(|k| {
                    tokens
                        .next()
                        .ok_or_else(|| PencilError::MatrixFile(format!("{what}: expected {count} entries, got {k}")))?
                        .parse::<f64>()
                        .map_err(|e| PencilError::MatrixFile(format!("{what} entry {k}: {e}")))
                })
                .collect()
        };
        let h0 = SymMatrix::from_lower_rows(n, read("H0")?)?.compact();
        let v = SymMatrix::from_lower_rows(n, read("V")?)?.compact();
        if tokens.next().is_some() {
            return Err(PencilError::MatrixFile("trailing data after V".into()));
        }
        let m = match m {
            Some(m) => m,
            None => {
                let min = match h0.as_tridiagonal() {
                    Some((d, e)) => tridiag_min_eigenvalue(d, e),
                    None => sym_eigen(&h0, false)?.values[0],
                };
                if !(min > 0.0) {
                    return Err(PencilError::BelowMass { min, m2: 0.0 });
                }
                min.sqrt()
            }
        };
        Self::synthetic(h0, v, m)
    }

    pub fn from_matrix_file(path: &Path, m: Option<f64>) -> Result<Self, PencilError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| PencilError::MatrixFile(format!("{}: {e}", path.display())))?;
        Self::parse_matrix_text(&text, m)
    }

    /// Serializes to the format read by [`KGPencil::parse_matrix_text`].
    pub fn to_matrix_text(&self) -> String {
        let n = self.dim();
        let mut out = format!("{n}\n# H0\n");
        for a in [&self.h0, &self.v] {
            if !std::ptr::eq(a, &self.h0) {
                out.push_str("# V\n");
            }
            for i in 0..n {
                let row: Vec<String> = (0..=i).map(|j| format!("{:e}", a.get(i, j))).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }

    pub fn h0(&self) -> &SymMatrix {
        &self.h0
    }

    pub fn v(&self) -> &SymMatrix {
        &self.v
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Same `H₀`, potential `V + cI`.
    pub fn shifted(&self, c: f64) -> Result<Self, PencilError> {
        Self::new(self.h0.clone(), self.v.shift_diag(c), self.m, self.origin)
    }

    /// `T(λ) = H₀ − (V − λ)²`; tridiagonal whenever `H₀` is tridiagonal and
    /// `V` diagonal.
    pub fn t_of_lambda(&self, lambda: f64) -> SymMatrix {
        if self.v.is_diagonal() {
            if let Some((d, e)) = self.h0.as_tridiagonal() {
                let vd = self.v.diagonal_entries();
                let diag = d
                    .iter()
                    .zip(&vd)
                    .map(|(h, v)| h - (v - lambda) * (v - lambda))
                    .collect();
                return SymMatrix::tridiagonal(diag, e.to_vec()).expect("shapes agree");
            }
        }
        self.h0_minus_v2
            .add_scaled(2.0 * lambda, &self.v)
            .expect("shapes agree")
            .shift_diag(-lambda * lambda)
    }

    /// `T′(λ) = 2(V − λI)`.
    pub fn t_prime(&self, lambda: f64) -> SymMatrix {
        self.v.shift_diag(-lambda).scaled(2.0)
    }

    /// `t(λ)[x] = (H₀x, x) − ‖(V − λ)x‖²`.
    pub fn t_form(&self, lambda: f64, x: &[f64]) -> f64 {
        let shifted: Vec<f64> = self
            .v
            .matvec(x)
            .iter()
            .zip(x)
            .map(|(vx, xi)| vx - lambda * xi)
            .collect();
        let n = norm2(&shifted);
        self.h0.quad_form(x) - n * n
    }

    /// `xᵀT(λ)x` through the assembled matrix.
    pub fn t_quad(&self, lambda: f64, x: &[f64]) -> f64 {
        self.t_of_lambda(lambda).quad_form(x)
    }

    /// `(μ(x), c(x))` with `t(λ)[x] = ‖x‖²(c + 2λμ − λ²)`.
    pub fn form_coefficients(&self, x: &[f64]) -> Result<(f64, f64), PencilError> {
        let nx = norm2(x);
        if nx == 0.0 {
            return Err(PencilError::ZeroVector);
        }
        let y: Vec<f64> = x.iter().map(|v| v / nx).collect();
        let vy = self.v.matvec(&y);
        let mu = dot(&vy, &y);
        let vn = norm2(&vy);
        let c = self.h0.quad_form(&y) - vn * vn;
        Ok((mu, c))
    }

    /// Roots `p∓(x) = μ ∓ √(μ² + c)` of `λ ↦ t(λ)[x]`.
    pub fn root_functionals(&self, x: &[f64]) -> Result<RootPair, PencilError> {
        let (mu, c) = self.form_coefficients(x)?;
        let discriminant = mu * mu + c;
        if discriminant <= DISCRIMINANT_REL_TOL * (mu * mu).max(c.abs()) {
            return Err(PencilError::NotStronglyDampedAt {
                x: x.to_vec(),
                discriminant,
            });
        }
        let sq = discriminant.sqrt();
        // larger-magnitude root first, the other from the product −c
        let (p_minus, p_plus) = if mu >= 0.0 {
            let p = mu + sq;
            (-c / p, p)
        } else {
            let p = mu - sq;
            (p, -c / p)
        };
        Ok(RootPair {
            p_minus,
            p_plus,
            discriminant,
            mu,
            c,
        })
    }

    /// `‖T(λ) − [T(μ) + 2(λ−μ)(V−μI) − (λ−μ)²I]‖_∞`.
    pub fn shift_identity_residual(&self, lambda: f64, mu: f64) -> f64 {
        let d = lambda - mu;
        let rhs = self
            .t_of_lambda(mu)
            .add_scaled(2.0 * d, &self.v.shift_diag(-mu))
            .expect("shapes agree")
            .shift_diag(-d * d);
        self.t_of_lambda(lambda)
            .add_scaled(-1.0, &rhs)
            .expect("shapes agree")
            .norm_inf()
    }

    /// Negative eigenvalue count of `T(λ)` by sign only (no zero threshold),
    /// so it stays exact on badly scaled tridiagonal matrices.
    pub fn negative_count(&self, lambda: f64) -> NegativeCount {
        let t = self.t_of_lambda(lambda);
        match t.as_tridiagonal() {
            Some((d, e)) => {
                let (n_neg, singular) = tridiag_count_below_checked(d, e, 0.0);
                NegativeCount { n_neg, singular }
            }
            None => {
                let i = inertia(&t);
                NegativeCount {
                    n_neg: i.n_neg,
                    singular: i.n_zero > 0,
                }
            }
        }
    }

    /// `T(λ) ≻ 0`.
    pub fn is_positive_at(&self, lambda: f64) -> bool {
        let c = self.negative_count(lambda);
        c.n_neg == 0 && !c.singular
    }

    /// Spectral norm of `V`.
    pub fn v_norm(&self) -> Result<f64, PencilError> {
        if self.v.is_diagonal() {
            return Ok(self.v.diagonal_entries().iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        }
        let ev = sym_eigen(&self.v, false)?;
        Ok(ev.values[0].abs().max(ev.values[ev.values.len() - 1].abs()))
    }

    pub fn v_sign(&self) -> VSign {
        if self.v.is_diagonal() {
            let d = self.v.diagonal_entries();
            return VSign {
                nonneg: d.iter().all(|&v| v >= 0.0),
                nonpos: d.iter().all(|&v| v <= 0.0),
            };
        }
        let i = inertia(&self.v);
        VSign {
            nonneg: i.n_neg == 0,
            nonpos: i.n_pos == 0,
        }
    }

    /// Upper bound for every root zone: `10·(‖V‖ + √‖H₀‖_∞)`.
    pub fn lambda_cap(&self) -> Result<f64, PencilError> {
        Ok(10.0 * (self.v_norm()? + self.h0.norm_inf().sqrt()))
    }

    /// Whether `T(λ)` has the sign pattern of an irreducible M-matrix
    /// (tridiagonal, all off-diagonals strictly negative).
    pub fn is_irreducible_tridiagonal(&self) -> bool {
        self.v.is_diagonal()
            && self
                .h0
                .as_tridiagonal()
                .is_some_and(|(_, e)| !e.is_empty() && e.iter().all(|&x| x < 0.0))
    }
}

/// `H₀^{±1/2}` of a pencil, for the `L(λ)` factorization.
#[derive(Debug, Clone)]
pub struct LFactorization {
    sqrt: SymMatrix,
    invsqrt: SymMatrix,
    pencil: KGPencil,
}

impl LFactorization {
    pub fn new(p: &KGPencil) -> Result<Self, PencilError> {
        if p.dim() > MAX_DENSE_FACTOR_DIM {
            return Err(PencilError::TooLarge {
                n: p.dim(),
                max: MAX_DENSE_FACTOR_DIM,
            });
        }
        let (sqrt, invsqrt) = sym_sqrt_and_invsqrt(p.h0())?;
        Ok(Self {
            sqrt,
            invsqrt,
            pencil: p.clone(),
        })
    }

    pub fn h0_sqrt(&self) -> &SymMatrix {
        &self.sqrt
    }

    pub fn h0_invsqrt(&self) -> &SymMatrix {
        &self.invsqrt
    }

    /// `L(λ) = I − H₀^{-1/2}(V − λ)²H₀^{-1/2}`.
    pub fn l_of(&self, lambda: f64) -> SymMatrix {
        let n = self.pencil.dim();
        let w = self.pencil.v().shift_diag(-lambda).square();
        let inner = w.congruence(&self.invsqrt.to_dense());
        SymMatrix::identity(n).add_scaled(-1.0, &inner).expect("shapes agree")
    }

    /// `‖T(λ) − H₀^{1/2} L(λ) H₀^{1/2}‖_∞`.
    pub fn residual(&self, lambda: f64) -> f64 {
        let back = self.l_of(lambda).congruence(&self.sqrt.to_dense());
        self.pencil
            .t_of_lambda(lambda)
            .add_scaled(-1.0, &back)
            .expect("shapes agree")
            .norm_inf()
    }
}

/// `L(λ)` for a pencil of dimension at most [`MAX_DENSE_FACTOR_DIM`].
pub fn build_l(p: &KGPencil, lambda: f64) -> Result<SymMatrix, PencilError> {
    Ok(LFactorization::new(p)?.l_of(lambda))
}
