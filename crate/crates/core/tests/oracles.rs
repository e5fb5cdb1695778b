//! Independent oracles built on nalgebra: the companion linearization of the
//! quadratic pencil and the dense symmetric eigensolver.

mod common;

use common::{damped_pencil, random_sym, rng};
use kgpencil::eig::{all_eigenvalues, EigOptions};
use kgpencil::gap::{certify_strong_damping, compute_nu};
use kgpencil::linalg::{sym_eigen, SymMatrix};
use kgpencil::model::{PotentialKind, PotentialSpec, RadialGrid, RadialProblem};
use kgpencil::pencil::KGPencil;
use nalgebra::DMatrix;
use rand::Rng;

fn dense(a: &SymMatrix) -> DMatrix<f64> {
    let n = a.dim();
    DMatrix::from_row_slice(n, n, &a.to_dense())
}

/// Eigenvalues of `λ² − 2λV − (H₀ − V²)` from `[[0, I], [H₀ − V², 2V]]`.
fn companion_eigenvalues(p: &KGPencil) -> Vec<(f64, f64)> {
    let n = p.dim();
    let k = dense(p.h0()) - dense(&p.v().square());
    let v2 = dense(p.v()) * 2.0;
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    c.view_mut((0, n), (n, n)).fill_with_identity();
    c.view_mut((n, 0), (n, n)).copy_from(&k);
    c.view_mut((n, n), (n, n)).copy_from(&v2);
    let mut ev: Vec<(f64, f64)> = c.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    ev.sort_by(|a, b| a.0.total_cmp(&b.0));
    ev
}

fn library_eigenvalues(p: &KGPencil) -> Vec<f64> {
    let d = certify_strong_damping(p, &[0.0], 500, 3).unwrap();
    let nu = compute_nu(p, d.lambda0().expect("damped"), 1e-8).unwrap();
    let mut out: Vec<f64> = all_eigenvalues(p, nu.nu_minus, nu.nu_plus, &EigOptions::default())
        .unwrap()
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.lambda, r.multiplicity))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

fn assert_match(p: &KGPencil, tol: f64) {
    let lib = library_eigenvalues(p);
    let comp = companion_eigenvalues(p);
    assert_eq!(lib.len(), 2 * p.dim());
    assert_eq!(comp.len(), 2 * p.dim());
    let scale = 1.0 + lib.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    for (x, (re, im)) in lib.iter().zip(&comp) {
        assert!(im.abs() <= tol * scale, "complex companion eigenvalue {re} + {im}i");
        assert!((x - re).abs() <= tol * scale, "{x} vs {re}");
    }
}

#[test]
fn companion_agrees_on_random_damped_pencils() {
    let mut r = rng(11);
    for _ in 0..60 {
        let n = r.gen_range(1..=15);
        assert_match(&damped_pencil(&mut r, n), 1e-8);
    }
}

#[test]
fn companion_agrees_on_the_two_by_two_example() {
    let p = KGPencil::synthetic(
        SymMatrix::diagonal(vec![1.0, 4.0]).unwrap(),
        SymMatrix::diagonal(vec![0.3, 0.5]).unwrap(),
        1.0,
    )
    .unwrap();
    let comp: Vec<f64> = companion_eigenvalues(&p).iter().map(|z| z.0).collect();
    for (x, want) in comp.iter().zip([-1.5, -0.7, 1.3, 2.5]) {
        assert!((x - want).abs() < 1e-12, "{x} vs {want}");
    }
    assert_match(&p, 1e-10);
}

#[test]
fn companion_agrees_on_a_coarse_coulomb_sector() {
    let grid = RadialGrid::new(40.0, 120, 2.0).unwrap();
    let spec = PotentialSpec::natural(PotentialKind::Coulomb { ze2: 0.3 });
    let problem = RadialProblem::new(grid, spec, 1, 1.0).unwrap();
    let p = KGPencil::from_radial(&problem).unwrap();
    // entries near the origin reach ~1e12, so compare relative to the spectrum
    let lib = library_eigenvalues(&p);
    let comp = companion_eigenvalues(&p);
    for (x, (re, _)) in lib.iter().zip(&comp) {
        assert!((x - re).abs() <= 1e-6 * x.abs().max(1.0), "{x} vs {re}");
    }
    let bound = lib.iter().filter(|&&l| l > 0.0 && l < 1.0).count();
    assert!(bound >= 2, "only {bound} bound states in (0, m)");
}

#[test]
fn dense_eigensolver_matches_nalgebra() {
    let mut r = rng(12);
    for _ in 0..40 {
        let n = r.gen_range(1..=40);
        let a = random_sym(&mut r, n, 1.0);
        let ours = sym_eigen(&a, true).unwrap();
        let mut theirs: Vec<f64> = dense(&a).symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.values.iter().zip(&theirs) {
            assert!((x - y).abs() <= 1e-12 * n as f64, "{x} vs {y}");
        }
        let q = ours.vectors.unwrap();
        for j in 0..n {
            let col: Vec<f64> = (0..n).map(|i| q[i * n + j]).collect();
            let ax = a.matvec(&col);
            let res = ax
                .iter()
                .zip(&col)
                .map(|(a, c)| (a - ours.values[j] * c).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-12 * n as f64, "residual {res}");
        }
    }
}
