//! Rollnik norm of a radial `W = V²`.
//!
//! `I = ∬ W(x)W(y)/|x−y|² dx dy` over ℝ³×ℝ³. Averaging `1/|x−y|²` over both
//! directions gives the kernel `8π²/(rs)·ln|(r+s)/(r−s)|`, so
//!
//! ```text
//! I = 8π² ∫∫ W(r)W(s) r s ln|(r+s)/(r−s)| dr ds
//!   = 16π² ∫ r³ W(r) ∫₀¹ W(rt) t ln((1+t)/(1−t)) dt dr
//! ```
//!
//! The norm is `‖W‖_R = √I`, and `‖V H₀^{-1/2}‖ ≤ √(‖V²‖_R/4π)`.

use std::f64::consts::PI;

use crate::model::PotentialKind;

use super::quadrature::{gauss_legendre, graded_edges, integrate_panels};

const OUTER_PANELS: usize = 64;
const INNER_LEVELS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct RollnikResult {
    /// The double integral `I`.
    pub integral: Option<f64>,
    /// `‖V²‖_R = √I`.
    pub norm: Option<f64>,
    /// `(−m + √(‖V²‖_R/4π)·m, m − √(‖V²‖_R/4π)·m)` when `‖V²‖_R < 4π`.
    pub gap: Option<(f64, f64)>,
    /// Why the integral or the gap is unavailable.
    pub reason: Option<String>,
}

impl RollnikResult {
    fn divergent(reason: &str) -> Self {
        Self {
            integral: None,
            norm: None,
            gap: None,
            reason: Some(reason.to_string()),
        }
    }

    fn from_integral(integral: f64, m: f64) -> Self {
        let norm = integral.sqrt();
        let (gap, reason) = if norm < 4.0 * PI {
            let s = (norm / (4.0 * PI)).sqrt();
            (Some((-m + s * m, m - s * m)), None)
        } else {
            (None, Some(format!("Rollnik norm {norm:.6e} is not below 4*pi")))
        };
        Self {
            integral: Some(integral),
            norm: Some(norm),
            gap,
            reason,
        }
    }

    pub fn applicable(&self) -> bool {
        self.gap.is_some()
    }
}

/// Angle average of `1/|x−y|²` times `(4π)²` for `|x| = r`, `|y| = s`.
pub fn angular_kernel(r: f64, s: f64) -> f64 {
    8.0 * PI * PI / (r * s) * ((r + s) / (r - s)).abs().ln()
}

/// `I` for a radial profile `w` supported in `[0, r_hi]` (or negligible beyond).
///
/// `kinks` are radii where `w` is not smooth; panels are aligned with them.
pub fn rollnik_integral(w: impl Fn(f64) -> f64, r_hi: f64, kinks: &[f64], order: usize) -> f64 {
    let rule = gauss_legendre(order.max(2));
    let mut outer: Vec<f64> = (0..=OUTER_PANELS)
        .map(|i| r_hi * i as f64 / OUTER_PANELS as f64)
        .collect();
    outer.extend(kinks.iter().copied().filter(|&k| k > 0.0 && k < r_hi));
    outer.sort_by(f64::total_cmp);
    outer.dedup();
    let base_inner = graded_edges(1.0, INNER_LEVELS);
    let inner = |r: f64| -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        // u = 1 − t puts the log singularity at u = 0
        let mut edges = base_inner.clone();
        edges.extend(kinks.iter().map(|&k| 1.0 - k / r).filter(|&u| u > 0.0 && u < 1.0));
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        integrate_panels(
            |u| {
                let t = 1.0 - u;
                w(r * t) * t * ((1.0 + t).ln() - u.ln())
            },
            &edges,
            &rule,
        )
    };
    16.0 * PI * PI * integrate_panels(|r| r.powi(3) * w(r) * inner(r), &outer, &rule)
}

/// `‖V²‖_R` for a radial potential, with the induced gap for mass `m`.
///
/// Potentials that do not decay, or that are singular at the origin, are
/// reported as divergent rather than truncated.
pub fn rollnik_norm(potential: &PotentialKind, m: f64, order: usize) -> RollnikResult {
    match potential {
        PotentialKind::Zero => RollnikResult::from_integral(0.0, m),
        PotentialKind::Coulomb { .. } => {
            RollnikResult::divergent("Coulomb V^2 ~ 1/r^2 makes the double integral diverge")
        }
        PotentialKind::Shifted { base, c } => {
            if *c != 0.0 && potential.limit_at_infinity() != 0.0 {
                RollnikResult::divergent("V does not decay at infinity")
            } else if *c == 0.0 {
                rollnik_norm(base, m, order)
            } else {
                // a shift that cancels the base's limit; only tables do that
                shifted_profile(potential, m, order)
            }
        }
        PotentialKind::Gaussian { depth, width } => {
            let (d, w) = (*depth, *width);
            RollnikResult::from_integral(
                rollnik_integral(|r| d * d * (-2.0 * (r / w).powi(2)).exp(), 8.0 * w, &[], order),
                m,
            )
        }
        PotentialKind::Table(t) => {
            if t.last() != 0.0 {
                return RollnikResult::divergent("tabulated V does not vanish beyond its last node");
            }
            let nodes = t.nodes();
            let r_hi = nodes[nodes.len() - 1];
            RollnikResult::from_integral(rollnik_integral(|r| t.eval(r).powi(2), r_hi, nodes, order), m)
        }
    }
}

fn shifted_profile(potential: &PotentialKind, m: f64, order: usize) -> RollnikResult {
    match potential {
        PotentialKind::Shifted { base, .. } => match base.as_ref() {
            PotentialKind::Table(t) => {
                let nodes = t.nodes();
                let r_hi = nodes[nodes.len() - 1];
                RollnikResult::from_integral(rollnik_integral(|r| potential.eval(r).powi(2), r_hi, nodes, order), m)
            }
            _ => RollnikResult::divergent("V does not decay at infinity"),
        },
        _ => RollnikResult::divergent("V does not decay at infinity"),
    }
}

/// Closed form of `I` for `W = D²·exp(−r²/σ²)`: `D⁴π³σ⁴`.
pub fn gaussian_rollnik_integral(depth: f64, width: f64) -> f64 {
    let sigma2 = width * width / 2.0;
    depth.powi(4) * PI.powi(3) * sigma2 * sigma2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TablePotential;

    #[test]
    fn kernel_matches_direct_angle_average() {
        let (x, w) = gauss_legendre(64);
        for (r, s) in [(1.0, 3.0), (2.0, 0.5), (1.0, 1.2)] {
            // 4π·2π ∫_{-1}^{1} du / (r² + s² − 2rsu), split at u = 0
            let f = |u: f64| 1.0 / (r * r + s * s - 2.0 * r * s * u);
            let half = |lo: f64, hi: f64| {
                let (c, h) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
                h * x.iter().zip(&w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>()
            };
            let direct = 8.0 * PI * PI * (half(-1.0, 0.0) + half(0.0, 0.9) + half(0.9, 1.0));
            let k = angular_kernel(r, s);
            assert!((direct / k - 1.0).abs() < 1e-6, "({r},{s}) {direct} vs {k}");
        }
    }

    #[test]
    fn gaussian_matches_closed_form() {
        let want = gaussian_rollnik_integral(0.5, 1.5);
        assert!((want - 2.452_644_932_719_03).abs() < 1e-12);
        let got = rollnik_norm(&PotentialKind::Gaussian { depth: 0.5, width: 1.5 }, 1.0, 16);
        let i = got.integral.unwrap();
        assert!((i / want - 1.0).abs() < 1e-8, "{i} vs {want}");
        assert!((got.norm.unwrap() - want.sqrt()).abs() < 1e-8);
        let (lo, hi) = got.gap.unwrap();
        let s = (want.sqrt() / (4.0 * PI)).sqrt();
        assert!((lo + 1.0 - s).abs() < 1e-8 && (hi - 1.0 + s).abs() < 1e-8);
    }

    #[test]
    fn zero_and_divergent_cases() {
        let z = rollnik_norm(&PotentialKind::Zero, 2.0, 16);
        assert_eq!(z.norm, Some(0.0));
        assert_eq!(z.gap, Some((-2.0, 2.0)));
        let c = rollnik_norm(&PotentialKind::Coulomb { ze2: 0.3 }, 1.0, 16);
        assert!(c.integral.is_none() && !c.applicable() && c.reason.is_some());
        let shifted = PotentialKind::Gaussian { depth: 0.5, width: 1.0 }.shifted(0.1);
        assert!(rollnik_norm(&shifted, 1.0, 16).integral.is_none());
        let strong = rollnik_norm(&PotentialKind::Gaussian { depth: 5.0, width: 2.0 }, 1.0, 16);
        assert!(strong.norm.unwrap() > 4.0 * PI && strong.gap.is_none());
    }

    #[test]
    fn table_step_profile() {
        // W = 1 on the unit ball (the last segment is a 1e-9 ramp)
        let t = TablePotential::new(vec![0.0, 1.0, 1.0 + 1e-9], vec![1.0, 1.0, 0.0]).unwrap();
        let got = rollnik_norm(&PotentialKind::Table(t), 1.0, 24).integral.unwrap();
        // ∫₀¹∫₀¹ r s ln|(r+s)/(r−s)| dr ds = 1/2 (mpmath)
        let want = 8.0 * PI * PI * 0.5;
        assert!((got / want - 1.0).abs() < 1e-6, "{got} vs {want}");
    }
}
