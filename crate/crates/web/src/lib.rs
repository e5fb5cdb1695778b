//! WebAssembly bindings for the browser demo in `www/`.
//!
//! All three operations work on the Coulomb potential `−Ze²/r` with `m = 1`
//! on a graded grid, so results can be set against the closed forms.

use kgpencil::eig::{eigenvalues_in, EigOptions, Side};
use kgpencil::gap::{certify_strong_damping, compute_nu, g_profile, NuPair};
use kgpencil::model::{PotentialKind, PotentialSpec, RadialGrid, RadialProblem};
use kgpencil::pencil::KGPencil;
use kgpencil::reference::{coulomb_eigenvalue, coulomb_radial_on_grid, CoulombParams};
use wasm_bindgen::prelude::*;

const MASS: f64 = 1.0;
const MAX_POINTS: usize = 20_000;
const PLOT_POINTS: usize = 400;

/// Sampled curve with an optional closed-form companion.
#[wasm_bindgen]
pub struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
    reference: Vec<f64>,
    nu_minus: f64,
    nu_plus: f64,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    /// Empty when there is no closed form to compare with.
    #[wasm_bindgen(getter)]
    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn nu_minus(&self) -> f64 {
        self.nu_minus
    }

    #[wasm_bindgen(getter)]
    pub fn nu_plus(&self) -> f64 {
        self.nu_plus
    }
}

struct Setup {
    pencil: KGPencil,
    grid: RadialGrid,
    params: CoulombParams,
    nu: NuPair,
}

fn setup(ze2: f64, l: u32, n: usize) -> Result<Setup, String> {
    if !(8..=MAX_POINTS).contains(&n) {
        return Err(format!("grid size must lie in [8, {MAX_POINTS}], got {n}"));
    }
    let params = CoulombParams::new(ze2, MASS).map_err(|e| e.to_string())?;
    let ground = coulomb_eigenvalue(&params, 1, 0).map_err(|e| e.to_string())?;
    // 24 decay lengths of the ground state
    let grid = RadialGrid::new(48.0 / ground.beta, n, 2.0).map_err(|e| e.to_string())?;
    let spec = PotentialSpec::natural(PotentialKind::Coulomb { ze2 });
    let problem = RadialProblem::new(grid.clone(), spec, l, MASS).map_err(|e| e.to_string())?;
    let pencil = KGPencil::from_radial(&problem).map_err(|e| e.to_string())?;
    let damping = certify_strong_damping(&pencil, &[0.0], 200, 42).map_err(|e| e.to_string())?;
    let lambda0 = damping
        .lambda0()
        .ok_or_else(|| format!("strong damping not certified ({})", damping.status()))?;
    let nu = compute_nu(&pencil, lambda0, 1e-8).map_err(|e| e.to_string())?;
    Ok(Setup {
        pencil,
        grid,
        params,
        nu,
    })
}

fn plus_zone(s: &Setup, count: usize) -> Result<Vec<(f64, Vec<f64>)>, String> {
    let opts = EigOptions::default();
    let lo = s.nu.nu_plus - (opts.bracket_tol * MASS).min(0.25 * (s.nu.nu_plus - s.nu.nu_minus));
    let recs = eigenvalues_in(&s.pencil, lo, MASS, Side::Plus, &opts).map_err(|e| e.to_string())?;
    Ok(recs
        .into_iter()
        .take(count)
        .map(|r| (r.lambda, r.eigenvectors.into_iter().next().unwrap_or_default()))
        .collect())
}

/// `g(λ)` on `[ν− − w/4, ν+ + w/4]`, `w = ν+ − ν−`.
pub fn gap_profile_impl(ze2: f64, l: u32, n: usize, points: usize) -> Result<Curve, String> {
    let s = setup(ze2, l, n)?;
    let w = 0.25 * (s.nu.nu_plus - s.nu.nu_minus);
    let (x, y) = g_profile(&s.pencil, s.nu.nu_minus - w, s.nu.nu_plus + w, points.clamp(2, 2000))
        .into_iter()
        .unzip();
    Ok(Curve {
        x,
        y,
        reference: Vec::new(),
        nu_minus: s.nu.nu_minus,
        nu_plus: s.nu.nu_plus,
    })
}

/// Lowest `count` plus-zone eigenvalues of sector `l` (`x` = k, `y` = numeric,
/// `reference` = closed form).
pub fn spectrum_impl(ze2: f64, l: u32, n: usize, count: usize) -> Result<Curve, String> {
    let s = setup(ze2, l, n)?;
    let found = plus_zone(&s, count.clamp(1, 20))?;
    let mut curve = Curve {
        x: Vec::new(),
        y: Vec::new(),
        reference: Vec::new(),
        nu_minus: s.nu.nu_minus,
        nu_plus: s.nu.nu_plus,
    };
    for (i, (lambda, _)) in found.iter().enumerate() {
        let k = l + 1 + i as u32;
        let level = coulomb_eigenvalue(&s.params, k, l).map_err(|e| e.to_string())?;
        curve.x.push(k as f64);
        curve.y.push(*lambda);
        curve.reference.push(level.lambda);
    }
    Ok(curve)
}

/// Reduced radial ground state `u(r)` for `l = 0`, numeric against closed
/// form, both with `Σ wᵢuᵢ² = 1`; thinned to a few hundred points.
pub fn ground_state_impl(ze2: f64, n: usize) -> Result<Curve, String> {
    let s = setup(ze2, 0, n)?;
    let (_, x) = plus_zone(&s, 1)?
        .into_iter()
        .next()
        .ok_or("no eigenvalue found in [nu+, m]")?;
    let mut u = s.grid.to_grid_function(&x);
    let norm: f64 = u
        .iter()
        .zip(s.grid.weights())
        .map(|(u, w)| w * u * u)
        .sum::<f64>()
        .sqrt();
    u.iter_mut().for_each(|v| *v /= norm);
    let level = coulomb_eigenvalue(&s.params, 1, 0).map_err(|e| e.to_string())?;
    let exact = coulomb_radial_on_grid(&level, &s.grid);
    let step = n.div_ceil(PLOT_POINTS).max(1);
    let pick = |v: &[f64]| v.iter().step_by(step).copied().collect::<Vec<f64>>();
    Ok(Curve {
        x: pick(s.grid.nodes()),
        y: pick(&u),
        reference: pick(&exact),
        nu_minus: s.nu.nu_minus,
        nu_plus: s.nu.nu_plus,
    })
}

#[wasm_bindgen]
pub fn gap_profile(ze2: f64, l: u32, n: usize, points: usize) -> Result<Curve, JsError> {
    gap_profile_impl(ze2, l, n, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(ze2: f64, l: u32, n: usize, count: usize) -> Result<Curve, JsError> {
    spectrum_impl(ze2, l, n, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ground_state(ze2: f64, n: usize) -> Result<Curve, JsError> {
    ground_state_impl(ze2, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_vanishes_at_nu() {
        let c = gap_profile_impl(0.3, 0, 400, 41).unwrap();
        assert_eq!(c.x.len(), 41);
        assert!(c.nu_plus < MASS && c.nu_minus < -MASS);
        // the interior samples are positive, the outer ones are not
        assert!(c.y[20] > 0.0 && c.y[0] < 0.0 && c.y[40] < 0.0);
    }

    #[test]
    fn spectrum_tracks_closed_form() {
        let c = spectrum_impl(0.3, 0, 2000, 2).unwrap();
        assert_eq!(c.x, vec![1.0, 2.0]);
        for (y, r) in c.y.iter().zip(&c.reference) {
            assert!((y - r).abs() / r < 1e-4, "{y} vs {r}");
        }
    }

    #[test]
    fn ground_state_matches_closed_form() {
        let c = ground_state_impl(0.3, 2000).unwrap();
        let max = c.reference.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        let err =
            c.y.iter()
                .zip(&c.reference)
                .fold(0.0_f64, |a, (y, r)| a.max((y - r).abs()));
        assert!(err / max < 1e-3, "{}", err / max);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gap_profile_impl(0.5, 0, 100, 10).is_err());
        assert!(spectrum_impl(0.3, 0, 4, 1).is_err());
    }
}
