//! Closed-form Klein-Gordon Coulomb levels and reduced radial eigenfunctions.
//!
//! For `q = −Ze²/r` in three dimensions with `0 < Ze² < 1/2`:
//!
//! ```text
//! μ_l      = √((l+½)² − (Ze²)²)
//! λ_{k,l}  = m·(1 + (Ze²)²/(k − l − ½ + μ_l)²)^{−1/2}
//! β_{k,l}  = 2√(m² − λ²)
//! u(r)     ∝ r^{μ+½} e^{−βr/2} ₁F₁(l+1−k, 2μ+1; βr)
//! ```
//!
//! `u = r·R` is the reduced radial function used by the discretization.

use thiserror::Error;

use crate::model::RadialGrid;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReferenceError {
    #[error("coupling Ze^2 = {0} outside (0, 1/2)")]
    Coupling(f64),
    #[error("mass must be positive, got {0}")]
    Mass(f64),
    #[error("invalid quantum numbers k = {k}, l = {l} (need k >= 1, 0 <= l <= k-1)")]
    QuantumNumbers { k: u32, l: u32 },
    #[error("1F1({a}, {b}; {z}): {reason}")]
    Kummer { a: f64, b: f64, z: f64, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    ze2: f64,
    m: f64,
}

impl CoulombParams {
    pub fn new(ze2: f64, m: f64) -> Result<Self, ReferenceError> {
        if !(ze2 > 0.0 && ze2 < 0.5) {
            return Err(ReferenceError::Coupling(ze2));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(ReferenceError::Mass(m));
        }
        Ok(Self { ze2, m })
    }

    pub fn ze2(&self) -> f64 {
        self.ze2
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn mu(&self, l: u32) -> f64 {
        let a = l as f64 + 0.5;
        ((a - self.ze2) * (a + self.ze2)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombLevel {
    pub k: u32,
    pub l: u32,
    pub lambda: f64,
    pub mu_l: f64,
    pub beta: f64,
    pub multiplicity: u32,
}

pub fn coulomb_eigenvalue(params: &CoulombParams, k: u32, l: u32) -> Result<CoulombLevel, ReferenceError> {
    if k == 0 || l >= k {
        return Err(ReferenceError::QuantumNumbers { k, l });
    }
    let mu = params.mu(l);
    let n_eff = (k - l) as f64 - 0.5 + mu;
    let ratio = params.ze2 / n_eff;
    let lambda = params.m / (1.0 + ratio * ratio).sqrt();
    // m² − λ² = m²·ratio²/(1 + ratio²), without cancellation
    let beta = 2.0 * params.m * ratio / (1.0 + ratio * ratio).sqrt();
    Ok(CoulombLevel {
        k,
        l,
        lambda,
        mu_l: mu,
        beta,
        multiplicity: 2 * l + 1,
    })
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; z)`.
///
/// Terminating series (`a` a nonpositive integer) are summed exactly. Other
/// cases use the power series and fail when it would lose accuracy.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64, ReferenceError> {
    let fail = |reason: &str| ReferenceError::Kummer {
        a,
        b,
        z,
        reason: reason.to_string(),
    };
    if b <= 0.0 && b == b.round() {
        return Err(fail("b is a nonpositive integer"));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(fail("non-finite argument"));
    }
    let terminating = a <= 0.0 && a == a.round();
    let max_terms = if terminating { (-a) as usize + 1 } else { 100_000 };
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut biggest = 1.0_f64;
    for n in 0..max_terms {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        if !term.is_finite() {
            return Err(fail("series overflow"));
        }
        sum += term;
        biggest = biggest.max(term.abs());
        if term == 0.0 {
            return Ok(sum);
        }
        if !terminating && term.abs() <= 1e-16 * sum.abs() && nf > (a * z / b).abs() {
            break;
        }
        if !terminating && n + 1 == max_terms {
            return Err(fail("series did not converge"));
        }
    }
    if !terminating && biggest > 1e4 * sum.abs() {
        return Err(fail("cancellation exceeds the accuracy target"));
    }
    Ok(sum)
}

/// Unnormalized reduced radial function `u(r)` of `level`.
pub fn coulomb_radial_function(level: &CoulombLevel, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let a = level.l as f64 + 1.0 - level.k as f64;
    let b = 2.0 * level.mu_l + 1.0;
    let x = level.beta * r;
    let poly = kummer_1f1(a, b, x).expect("terminating series for valid quantum numbers");
    ((level.mu_l + 0.5) * r.ln() - 0.5 * x).exp() * poly
}

/// `u` sampled on `grid`, scaled to `Σ w_i u_i² = 1` with positive values
/// near the origin.
pub fn coulomb_radial_on_grid(level: &CoulombLevel, grid: &RadialGrid) -> Vec<f64> {
    let mut u: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| coulomb_radial_function(level, r))
        .collect();
    let norm = u.iter().zip(grid.weights()).map(|(u, w)| w * u * u).sum::<f64>().sqrt();
    if norm > 0.0 {
        u.iter_mut().for_each(|v| *v /= norm);
    }
    u
}

/// The lowest level `(1, 0)` and its reduced radial function.
pub fn ground_state(params: &CoulombParams) -> (CoulombLevel, impl Fn(f64) -> f64 + Send + Sync) {
    let level = coulomb_eigenvalue(params, 1, 0).expect("(1,0) is always valid");
    (level, move |r| coulomb_radial_function(&level, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_level_closed_form() {
        let p = CoulombParams::new(0.3, 1.0).unwrap();
        let g = coulomb_eigenvalue(&p, 1, 0).unwrap();
        assert!((g.lambda - 3.0 / 10f64.sqrt()).abs() < 1e-15);
        assert!((g.mu_l - 0.4).abs() < 1e-15);
        assert!((g.beta - 2.0 / 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.multiplicity, 1);
    }

    #[test]
    fn excited_levels_frozen() {
        let p = CoulombParams::new(0.3, 1.0).unwrap();
        let cases = [
            (2, 0, 0.987_762_965_329_069_1),
            (2, 1, 0.988_599_123_220_749_2),
            (3, 0, 0.994_691_793_826_551_3),
            (3, 2, 0.994_977_329_945_377_4),
        ];
        for (k, l, want) in cases {
            let got = coulomb_eigenvalue(&p, k, l).unwrap().lambda;
            assert!((got - want).abs() < 2e-16, "({k},{l}) {got} vs {want}");
        }
        let weak = CoulombParams::new(0.1, 1.0).unwrap();
        let want = (1.0 + 0.01 / (0.5 + 0.24f64.sqrt()).powi(2)).powf(-0.5);
        assert!((coulomb_eigenvalue(&weak, 1, 0).unwrap().lambda - want).abs() < 1e-15);
    }

    #[test]
    fn levels_ordered_inside_mass_gap() {
        for ze2 in [0.1, 0.2, 0.3, 0.4, 0.49] {
            let p = CoulombParams::new(ze2, 1.0).unwrap();
            for l in 0..6 {
                let mut prev = 0.0;
                for k in l + 1..=6 {
                    let lv = coulomb_eigenvalue(&p, k, l).unwrap();
                    assert!(lv.lambda > prev && lv.lambda < 1.0);
                    prev = lv.lambda;
                }
            }
        }
    }

    #[test]
    fn coupling_range_is_strict() {
        assert!(CoulombParams::new(0.49, 1.0).is_ok());
        assert!(CoulombParams::new(0.5, 1.0).is_err());
        assert!(CoulombParams::new(0.0, 1.0).is_err());
        let p = CoulombParams::new(0.3, 1.0).unwrap();
        assert!(coulomb_eigenvalue(&p, 1, 1).is_err());
        assert!(coulomb_eigenvalue(&p, 0, 0).is_err());
    }

    #[test]
    fn kummer_special_values() {
        assert_eq!(kummer_1f1(0.7, 1.3, 0.0).unwrap(), 1.0);
        assert_eq!(kummer_1f1(0.0, 2.0, 5.0).unwrap(), 1.0);
        assert!((kummer_1f1(-1.0, 2.0, 3.0).unwrap() - (1.0 - 1.5)).abs() < 1e-15);
        // 1F1(1; 1; z) = e^z
        assert!((kummer_1f1(1.0, 1.0, 2.0).unwrap() - 2f64.exp()).abs() < 1e-13);
        assert!(kummer_1f1(1.0, -2.0, 1.0).is_err());
        assert!(kummer_1f1(0.5, 1.5, -60.0).is_err());
    }

    #[test]
    fn radial_shapes() {
        let p = CoulombParams::new(0.3, 1.0).unwrap();
        let (g, u) = ground_state(&p);
        assert_eq!(u(0.0), 0.0);
        for r in [1e-6, 0.1, 1.0, 10.0, 50.0] {
            assert!(u(r) > 0.0);
            let want = r.powf(0.9) * (-r / 10f64.sqrt()).exp();
            assert!((u(r) / want - 1.0).abs() < 1e-13);
        }
        assert!((g.mu_l + 0.5 - 0.9).abs() < 1e-15);
        let l20 = coulomb_eigenvalue(&p, 2, 0).unwrap();
        let changes = (1..400)
            .map(|i| coulomb_radial_function(&l20, 0.1 * i as f64))
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count();
        assert_eq!(changes, 1);
    }
}
