//! Relative form bounds of `V` and the gap intervals they certify.

use crate::linalg::{
    largest_sym_eigenvalue, ldlt_inertia, sym_eigen, sym_sqrt_and_invsqrt, tridiag_count_below_checked,
    tridiag_max_eigenvalue, SymMatrix,
};
use crate::model::NajmanBounds;
use crate::pencil::{KGPencil, PencilError, VSign, MAX_DENSE_FACTOR_DIM};

use super::rollnik::RollnikResult;

/// `‖Vx‖² ≤ a‖x‖² + b‖H₀^{1/2}x‖²` (unprimed) or `‖Vx‖ ≤ a‖x‖ + b‖H₀^{1/2}x‖`
/// (primed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormPair {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormBoundConstants {
    pub m: f64,
    /// Certified unprimed pairs, sorted by `b`.
    pub pareto: Vec<FormPair>,
    /// Primed pairs: `(√a, √b)` for every unprimed pair, plus `(0, s_norm)`.
    pub primed: Vec<FormPair>,
    /// `‖V H₀^{-1/2}‖`.
    pub s_norm: f64,
}

impl FormBoundConstants {
    /// `min (a′ + b′m)` over primed pairs with `b′ < 1`.
    pub fn delta1(&self) -> Option<f64> {
        min_over(&self.primed, |p| p.a + p.b * self.m)
    }

    /// `min (√a + √b·m)` over unprimed pairs with `b < 1`.
    pub fn delta2(&self) -> Option<f64> {
        min_over(&self.pareto, |p| p.a.sqrt() + p.b.sqrt() * self.m)
    }

    /// `min √(a + b m²)` over unprimed pairs with `b < 1`.
    pub fn delta3(&self) -> Option<f64> {
        min_over(&self.pareto, |p| (p.a + p.b * self.m * self.m).sqrt())
    }

    /// The primed pair attaining [`delta1`](Self::delta1).
    pub fn best_primed(&self) -> Option<FormPair> {
        self.primed
            .iter()
            .filter(|p| p.b < 1.0)
            .copied()
            .min_by(|x, y| (x.a + x.b * self.m).total_cmp(&(y.a + y.b * self.m)))
    }
}

fn min_over(pairs: &[FormPair], f: impl Fn(&FormPair) -> f64) -> Option<f64> {
    pairs.iter().filter(|p| p.b < 1.0).map(f).min_by(f64::total_cmp)
}

/// `max(0, λ_max(V² − bH₀))`.
///
/// Zero is decided by an exact sign count, so pairs at or beyond the optimal
/// `b` get `a = 0` rather than a rounding residue.
pub fn a_of_b(p: &KGPencil, b: f64) -> Result<f64, PencilError> {
    let w = p.v().square().add_scaled(-b, p.h0())?;
    let n = w.dim();
    if let Some((d, e)) = w.as_tridiagonal() {
        let (below, hit) = tridiag_count_below_checked(d, e, 0.0);
        if below == n && !hit {
            return Ok(0.0);
        }
        return Ok(tridiag_max_eigenvalue(d, e).max(0.0));
    }
    let f = ldlt_inertia(&w);
    if f.inertia().n_neg == n {
        return Ok(0.0);
    }
    let ev = sym_eigen(&w, false)?;
    Ok(ev.values[n - 1].max(0.0))
}

/// `‖V H₀^{-1/2}‖`, the square root of the largest generalized eigenvalue of
/// `(V², H₀)`.
pub fn s_norm(p: &KGPencil) -> Result<f64, PencilError> {
    let v2 = p.v().square();
    if v2.max_abs() == 0.0 {
        return Ok(0.0);
    }
    if v2.as_tridiagonal().is_some() && p.h0().as_tridiagonal().is_some() {
        return Ok(s_norm_sturm(p, &v2));
    }
    if p.dim() <= MAX_DENSE_FACTOR_DIM {
        let (_, inv) = sym_sqrt_and_invsqrt(p.h0())?;
        let k = v2.congruence(&inv.to_dense());
        let ev = sym_eigen(&k, false)?;
        return Ok(ev.values[ev.values.len() - 1].max(0.0).sqrt());
    }
    s_norm_lanczos(p)
}

/// Bisection on `θ` for the sign change of `λ_max(V² − θH₀)`.
fn s_norm_sturm(p: &KGPencil, v2: &SymMatrix) -> f64 {
    let n = p.dim();
    let m2 = p.m() * p.m();
    let (mut lo, mut hi) = (
        0.0_f64,
        v2.diagonal_entries().iter().fold(0.0_f64, |a, &x| a.max(x)) / m2,
    );
    let has_nonneg = |theta: f64| {
        let w = v2.add_scaled(-theta, p.h0()).expect("same dimension");
        let (d, e) = w.as_tridiagonal().expect("tridiagonal");
        let (below, hit) = tridiag_count_below_checked(d, e, 0.0);
        below < n || hit
    };
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if has_nonneg(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).sqrt()
}

/// `‖V H₀^{-1/2}‖` by Lanczos on `V H₀^{-1} V`; the independent route.
pub fn s_norm_lanczos(p: &KGPencil) -> Result<f64, PencilError> {
    let f = ldlt_inertia(p.h0());
    let v = p.v();
    let top = largest_sym_eigenvalue(
        |x| {
            let y = f.solve(&v.matvec(x)).unwrap_or_else(|_| vec![f64::NAN; x.len()]);
            v.matvec(&y)
        },
        p.dim(),
        1e-12,
    )?;
    Ok(top.max(0.0).sqrt())
}

/// Default `b` grid for the Pareto scan.
pub fn default_b_grid() -> Vec<f64> {
    (0..20).map(|i| i as f64 * 0.05).collect()
}

/// Certified pairs for each `b` in `b_grid`, plus the pair minimizing
/// `a/m² + b` found by golden section.
pub fn form_bound_constants(p: &KGPencil, b_grid: &[f64]) -> Result<FormBoundConstants, PencilError> {
    let m = p.m();
    let s = s_norm(p)?;
    let mut pareto = Vec::with_capacity(b_grid.len() + 2);
    for &b in b_grid {
        if !(0.0..1.0).contains(&b) {
            continue;
        }
        pareto.push(FormPair { a: a_of_b(p, b)?, b });
    }
    // φ(b) = a(b)/m² + b is convex; its minimum is s² at b = s²
    let phi = |b: f64| a_of_b(p, b).map(|a| a / (m * m) + b);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64.min(s * s * 1.5 + 1e-3));
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - gr * (hi - lo);
    let mut x2 = lo + gr * (hi - lo);
    let (mut f1, mut f2) = (phi(x1)?, phi(x2)?);
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = phi(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = phi(x2)?;
        }
    }
    let b_opt = if f1 <= f2 { x1 } else { x2 };
    if b_opt < 1.0 {
        pareto.push(FormPair {
            a: a_of_b(p, b_opt)?,
            b: b_opt,
        });
    }
    let s2 = s * s;
    if s2 < 1.0 {
        pareto.push(FormPair {
            a: a_of_b(p, s2)?,
            b: s2,
        });
    }
    pareto.sort_by(|x, y| x.b.total_cmp(&y.b));
    let mut primed: Vec<FormPair> = pareto
        .iter()
        .map(|q| FormPair {
            a: q.a.sqrt(),
            b: q.b.sqrt(),
        })
        .collect();
    primed.push(FormPair { a: 0.0, b: s });
    primed.sort_by(|x, y| x.b.total_cmp(&y.b));
    Ok(FormBoundConstants {
        m,
        pareto,
        primed,
        s_norm: s,
    })
}

/// One labelled gap certificate; `lo`/`hi` are NaN when inapplicable.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
    pub applicable: bool,
    pub reason: Option<String>,
}

impl Interval {
    fn ok(label: &str, lo: f64, hi: f64) -> Self {
        Self {
            label: label.to_string(),
            lo,
            hi,
            applicable: true,
            reason: None,
        }
    }

    fn no(label: &str, reason: String) -> Self {
        Self {
            label: label.to_string(),
            lo: f64::NAN,
            hi: f64::NAN,
            applicable: false,
            reason: Some(reason),
        }
    }
}

/// Optional inputs from other criteria.
#[derive(Debug, Clone, Default)]
pub struct ExtraBounds {
    pub najman: Option<NajmanBounds>,
    pub rollnik: Option<RollnikResult>,
}

/// Every gap interval that the constants certify. Inapplicable criteria are
/// kept with the failed precondition.
pub fn apriori_intervals(consts: &FormBoundConstants, sign: VSign, extra: &ExtraBounds) -> Vec<Interval> {
    let m = consts.m;
    let mut out = Vec::new();
    let s = consts.s_norm;
    let sm = s * m;
    out.push(if s < 1.0 {
        Interval::ok("s-norm", -m + sm, m - sm)
    } else {
        Interval::no("s-norm", format!("s_norm = {s:.6} is not below 1"))
    });
    one_sided(&mut out, "s-norm", s, 2.0, sm, m, sign);

    let deltas = [
        ("delta1", consts.delta1()),
        ("delta2", consts.delta2()),
        ("delta3", consts.delta3()),
    ];
    for (name, delta) in deltas {
        let Some(d) = delta else {
            for suffix in ["", "-nonneg", "-nonpos"] {
                out.push(Interval::no(&format!("{name}{suffix}"), "no pair with b < 1".into()));
            }
            continue;
        };
        out.push(if d < m {
            Interval::ok(name, -m + d, m - d)
        } else {
            Interval::no(name, format!("{name} = {d:.6} is not below m"))
        });
        one_sided(&mut out, name, d / m, 2.0, d, m, sign);
    }

    out.push(match consts.delta1() {
        Some(d) if d < m => Interval::ok("profile", -(m - d), m - d),
        Some(d) => Interval::no("profile", format!("a' + b'm = {d:.6} is not below m")),
        None => Interval::no("profile", "no primed pair with b' < 1".into()),
    });

    out.push(match &extra.najman {
        Some(nj) if nj.applicable => Interval::ok("najman", nj.q_minus, nj.q_plus),
        Some(nj) => Interval::no(
            "najman",
            format!("q- = {:.6} is not below q+ = {:.6}", nj.q_minus, nj.q_plus),
        ),
        None => Interval::no("najman", "needs a radial potential".into()),
    });

    out.push(match &extra.rollnik {
        Some(r) => match r.gap {
            Some((lo, hi)) => Interval::ok("rollnik", lo, hi),
            None => Interval::no("rollnik", r.reason.clone().unwrap_or_else(|| "inapplicable".into())),
        },
        None => Interval::no("rollnik", "not requested".into()),
    });
    out
}

/// The sign-definite variants: `(−m + w, m)` for `V ≥ 0`, `(−m, m − w)` for
/// `V ≤ 0`, each needing `ratio < limit`. For `1 < ratio < 2` a matrix pencil
/// can have eigenvalues inside (`H₀ = 4`, `V = 3`, `m = 1` has `ν− = 1`), so
/// those intervals carry a caution in `reason`.
fn one_sided(out: &mut Vec<Interval>, name: &str, ratio: f64, limit: f64, w: f64, m: f64, sign: VSign) {
    let cases = [
        ("-nonneg", sign.nonneg, (-m + w, m)),
        ("-nonpos", sign.nonpos, (-m, m - w)),
    ];
    for (suffix, holds, (lo, hi)) in cases {
        let label = format!("{name}{suffix}");
        out.push(if !holds {
            Interval::no(&label, format!("V is not {}", &suffix[1..]))
        } else if ratio >= limit {
            Interval::no(&label, format!("{name} ratio {ratio:.6} is not below {limit}"))
        } else if ratio > 1.0 {
            Interval {
                reason: Some(format!(
                    "{name} ratio {ratio:.6} above 1: not guaranteed for matrix pencils"
                )),
                ..Interval::ok(&label, lo, hi)
            }
        } else {
            Interval::ok(&label, lo, hi)
        });
    }
}

/// Lower bound `m² − (a′ + b′m + |λ|)²` on `g(λ)`.
pub fn profile_lower_bound(pair: FormPair, m: f64, lambda: f64) -> f64 {
    m * m - (pair.a + pair.b * m + lambda.abs()).powi(2)
}
