//! Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

mod common;

use std::path::Path;
use std::time::Instant;

use common::{damped_pencil, oracle_eigenvalues, random_psd, random_sym, rng, sup_rel};
use kgpencil::cli::app::{analyze, AnalyzeOutcome, SectorOutcome};
use kgpencil::cli::config::RunConfig;
use kgpencil::eig::{all_eigenvalues, semisimplicity_certificate, EigOptions, EigenvalueRecord, Positivity, Side};
use kgpencil::gap::rollnik::gaussian_rollnik_integral;
use kgpencil::gap::{g_of_lambda, gap_report, rollnik_norm, s_norm, ExtraBounds, GapOptions, GapReport};
use kgpencil::linalg::SymMatrix;
use kgpencil::model::{
    build_h0, discrete_positivity_resolvent, najman_q_bounds, PotentialKind, PotentialSpec, RadialGrid, RadialProblem,
};
use kgpencil::pencil::{KGPencil, LFactorization};
use kgpencil::reference::{coulomb_eigenvalue, coulomb_radial_on_grid, CoulombParams};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

const ZE2: f64 = 0.3;

struct Verdict {
    id: usize,
    pass: bool,
    detail: String,
}

/// One analyzed pencil, kept for the cross-cutting criteria (3, 6, 8).
struct Run {
    name: String,
    pencil: KGPencil,
    report: GapReport,
    records: Vec<EigenvalueRecord>,
    radial: bool,
}

fn coulomb_config(points: usize, sectors: &str) -> RunConfig {
    let text = format!(
        "[problem]\npotential = coulomb\nze2 = {ZE2}\nmass = 1\nsectors = {sectors}\n\
         [grid]\npoints = {points}\nr_max = 60\ngrading = 2\n[analysis]\nrollnik = off\n"
    );
    RunConfig::parse(&text, Path::new(".")).expect("valid config")
}

fn coulomb_pencil(points: usize, l: u32) -> (KGPencil, RadialGrid) {
    let grid = RadialGrid::new(60.0, points, 2.0).unwrap();
    let spec = PotentialSpec::natural(PotentialKind::Coulomb { ze2: ZE2 });
    let problem = RadialProblem::new(grid.clone(), spec, l, 1.0).unwrap();
    (KGPencil::from_radial(&problem).unwrap(), grid)
}

fn lowest_plus(s: &SectorOutcome) -> Option<&EigenvalueRecord> {
    s.records.iter().find(|r| r.side == Side::Plus)
}

fn synthetic_run(name: String, p: KGPencil) -> Result<Run, String> {
    let report = gap_report(&p, &GapOptions::default(), &ExtraBounds::default(), &[0.0]).map_err(|e| e.to_string())?;
    let nu = report
        .nu
        .ok_or_else(|| format!("{name}: damping {}", report.damping.status()))?;
    let records = all_eigenvalues(&p, nu.nu_minus, nu.nu_plus, &EigOptions::default()).map_err(|e| e.to_string())?;
    Ok(Run {
        name,
        pencil: p,
        report,
        records,
        radial: false,
    })
}

fn expanded(records: &[EigenvalueRecord]) -> Vec<f64> {
    let mut v: Vec<f64> = records
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.lambda, r.multiplicity))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn take_runs(out: &AnalyzeOutcome, cfg_name: &str, runs: &mut Vec<Run>) -> Result<(), String> {
    for s in &out.sectors {
        if let Some(f) = &s.failure {
            return Err(format!("{cfg_name} {}: {}", s.name, f.message));
        }
        let (p, _) = coulomb_pencil(s.dim, s.l.expect("radial"));
        runs.push(Run {
            name: format!("{cfg_name} {}", s.name),
            pencil: p,
            report: s.report.clone().expect("report present"),
            records: s.records.clone(),
            radial: true,
        });
    }
    Ok(())
}

/// Criteria 1–3 (Coulomb part): ladder for l = 0, the l = 1 sector at N = 8000.
fn coulomb_suite(verdicts: &mut Vec<Verdict>, runs: &mut Vec<Run>) {
    let params = CoulombParams::new(ZE2, 1.0).unwrap();
    let ground = coulomb_eigenvalue(&params, 1, 0).unwrap();
    let mut errs = Vec::new();
    let mut ok = true;
    let mut notes = Vec::new();
    let mut n8000 = None;
    let mut seconds = f64::NAN;
    for n in [1000, 2000, 4000, 8000] {
        let cfg = coulomb_config(n, "0");
        let out = if n == 8000 {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            let t = Instant::now();
            let out = pool.install(|| analyze(&cfg)).unwrap();
            seconds = t.elapsed().as_secs_f64();
            out
        } else {
            analyze(&cfg).unwrap()
        };
        if let Err(e) = take_runs(&out, &format!("coulomb N={n}"), runs) {
            notes.push(e);
            ok = false;
        }
        match lowest_plus(&out.sectors[0]) {
            Some(r) => errs.push((r.lambda - ground.lambda).abs() / ground.lambda),
            None => {
                errs.push(f64::NAN);
                ok = false;
            }
        }
        if n == 8000 {
            n8000 = Some(out);
        }
    }
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    let last = errs[3];
    let pass1 = ok && monotone && last <= 5e-3 && seconds <= 60.0;
    verdicts.push(Verdict {
        id: 1,
        pass: pass1,
        detail: format!(
            "rel. errors N=1000..8000: {}; monotone = {monotone}; single-threaded N=8000 analyze {seconds:.2} s {}",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", "),
            notes.join("; ")
        ),
    });

    let out0 = n8000.expect("N=8000 run");
    let out1 = analyze(&coulomb_config(8000, "1")).unwrap();
    if let Err(e) = take_runs(&out1, "coulomb N=8000", runs) {
        notes.push(e);
    }
    let mut pass2 = true;
    let mut detail = Vec::new();
    for (k, l) in [(2, 0), (2, 1), (3, 0)] {
        let sector = if l == 0 { &out0.sectors[0] } else { &out1.sectors[0] };
        let row = sector.levels.iter().find(|r| r.k == k && r.l == l);
        match row {
            Some(row) => {
                let rec_mult = sector
                    .records
                    .iter()
                    .find(|r| r.lambda == row.numeric)
                    .map_or(0, |r| r.multiplicity);
                let reported = rec_mult as u32 * sector.degeneracy;
                let good = row.rel_err <= 1e-2 && reported == 2 * l + 1 && row.multiplicity == 2 * l + 1;
                pass2 &= good;
                detail.push(format!("({k},{l}) rel {:.3e} multiplicity {reported}", row.rel_err));
            }
            None => {
                pass2 = false;
                detail.push(format!("({k},{l}) missing"));
            }
        }
    }
    verdicts.push(Verdict {
        id: 2,
        pass: pass2,
        detail: detail.join(", "),
    });

    // pointwise comparison of the ground state
    let (_, grid) = coulomb_pencil(8000, 0);
    let pointwise = lowest_plus(&out0.sectors[0]).map(|r| {
        let mut u = grid.to_grid_function(&r.eigenvectors[0]);
        let norm = u.iter().zip(grid.weights()).map(|(u, w)| w * u * u).sum::<f64>().sqrt();
        u.iter_mut().for_each(|v| *v /= norm);
        sup_rel(&u, &coulomb_radial_on_grid(&ground, &grid))
    });
    verdicts.push(Verdict {
        id: 3,
        pass: pointwise.is_some_and(|e| e <= 1e-2),
        detail: format!(
            "ground-state sup-norm relative error {:.3e}",
            pointwise.unwrap_or(f64::NAN)
        ),
    });
}

fn criterion_3(runs: &[Run], pointwise: Verdict) -> Verdict {
    let mut pass = pointwise.pass;
    let mut parts = Vec::new();
    let mut failing = Vec::new();
    let mut checked = 0;
    for run in runs
        .iter()
        .filter(|r| r.radial && r.pencil.is_irreducible_tridiagonal())
    {
        let Some(nu) = run.report.nu else { continue };
        let certs = kgpencil::eig::extremal_certificates(&run.records, nu.nu_minus, nu.nu_plus, &run.pencil, 1e-7);
        let Some(c) = certs.iter().find(|c| c.side == Side::Plus) else {
            continue;
        };
        checked += 1;
        let ok = c.simple && c.positivity == Positivity::StrictlyPositive;
        if !ok {
            pass = false;
            failing.push(format!(
                "{} (simple = {}, min/max = {:.2e})",
                run.name,
                c.simple,
                c.min_ratio.unwrap_or(f64::NAN)
            ));
        }
    }
    parts.push(format!("{checked} radial runs with an eigenvalue at nu+"));
    if failing.is_empty() {
        parts.push("all simple and strictly one-signed".into());
    } else {
        parts.push(format!("below the 1e-12 ratio or not simple: {}", failing.join("; ")));
    }
    parts.push(pointwise.detail);
    Verdict {
        id: 3,
        pass,
        detail: parts.join("; "),
    }
}

fn criterion_4(runs: &mut Vec<Run>) -> Verdict {
    let mut r = rng(4);
    let mut worst = 0.0_f64;
    let mut bad = Vec::new();
    for i in 0..200 {
        let n = r.gen_range(1..=12);
        let p = damped_pencil(&mut r, n);
        let run = match synthetic_run(format!("random #{i}"), p) {
            Ok(run) => run,
            Err(e) => {
                bad.push(e);
                continue;
            }
        };
        let nu = run.report.nu.unwrap();
        let lib = expanded(&run.records);
        let cap = run.pencil.lambda_cap().unwrap();
        let oracle = oracle_eigenvalues(&run.pencil, -cap, cap, 1e-9);
        if lib.len() != 2 * n || oracle.len() != 2 * n {
            bad.push(format!(
                "#{i}: N={n}, library {} / oracle {} eigenvalues",
                lib.len(),
                oracle.len()
            ));
        } else {
            let d = lib.iter().zip(&oracle).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
            worst = worst.max(d);
            if d > 1e-8 {
                bad.push(format!("#{i}: max deviation {d:.2e}"));
            }
        }
        let tol = 1e-9 * run.pencil.m();
        if lib
            .iter()
            .chain(&oracle)
            .any(|&l| l > nu.nu_minus + tol && l < nu.nu_plus - tol)
        {
            bad.push(format!("#{i}: eigenvalue inside (nu-, nu+)"));
        }
        runs.push(run);
    }
    Verdict {
        id: 4,
        pass: bad.is_empty(),
        detail: format!(
            "200 pencils, max |library - oracle| = {worst:.2e}; problems: {}",
            summary(&bad)
        ),
    }
}

fn summary(bad: &[String]) -> String {
    if bad.is_empty() {
        "none".into()
    } else {
        format!(
            "{} ({})",
            bad.len(),
            bad.iter().take(5).cloned().collect::<Vec<_>>().join("; ")
        )
    }
}

fn criterion_5(runs: &mut Vec<Run>) -> Verdict {
    let mut r = rng(5);
    let mut bad = Vec::new();
    let mut counts = [0usize; 3];
    let mut worst_violation = f64::NEG_INFINITY;
    // smallest ratio s among violated certificates, and largest among honoured ones
    let (mut s_fail, mut s_hold) = (f64::INFINITY, 0.0_f64);
    for i in 0..100 {
        let n = r.gen_range(1..=12);
        let h0 = random_psd(&mut r, n, 1.0).shift_diag(1.0);
        let kind = i % 4;
        let (v, target) = match kind {
            0 | 1 => (random_sym(&mut r, n, 1.0), r.gen_range(0.05..0.95)),
            2 => (random_psd(&mut r, n, 1.0), r.gen_range(0.05..1.9)),
            _ => (random_psd(&mut r, n, 1.0).scaled(-1.0), r.gen_range(0.05..1.9)),
        };
        let probe = KGPencil::synthetic(h0.clone(), v.clone(), 1.0).unwrap();
        let s_now = s_norm(&probe).unwrap();
        if s_now == 0.0 {
            continue;
        }
        let p = common::pencil_with_s(h0, v, 1.0, s_now, target);
        let run = match synthetic_run(format!("gap #{i}"), p) {
            Ok(run) => run,
            Err(e) => {
                bad.push(e);
                continue;
            }
        };
        let nu = run.report.nu.unwrap();
        let eig = expanded(&run.records);
        for iv in run.report.intervals.iter().filter(|iv| iv.applicable) {
            let inside = eig
                .iter()
                .map(|&l| (l - iv.lo).min(iv.hi - l))
                .fold(f64::NEG_INFINITY, f64::max);
            worst_violation = worst_violation.max(inside);
            let outside = iv.lo < nu.nu_minus - 1e-10 || iv.hi > nu.nu_plus + 1e-10;
            if inside > 1e-10 {
                bad.push(format!(
                    "#{i} {} (s = {target:.3}): eigenvalue {inside:.2e} inside",
                    iv.label
                ));
            }
            if outside {
                bad.push(format!(
                    "#{i} {} (s = {target:.3}): ({}, {}) not within ({}, {})",
                    iv.label, iv.lo, iv.hi, nu.nu_minus, nu.nu_plus
                ));
            }
            if inside > 1e-10 || outside {
                s_fail = s_fail.min(target);
            } else {
                s_hold = s_hold.max(target);
            }
            match iv.label.as_str() {
                "s-norm" => counts[0] += 1,
                "s-norm-nonneg" | "s-norm-nonpos" => counts[1 + (kind == 3) as usize] += 1,
                _ => {}
            }
        }
        let c = &run.report.constants;
        if let (Some(d2), Some(d3)) = (c.delta2(), c.delta3()) {
            if d3 > d2 {
                bad.push(format!("#{i}: delta3 {d3} > delta2 {d2}"));
            }
        }
        runs.push(run);
    }
    Verdict {
        id: 5,
        pass: bad.is_empty() && counts.iter().all(|&c| c > 0),
        detail: format!(
            "100 pencils; applicable variant i/ii/iii checks: {}/{}/{}; largest eigenvalue penetration {worst_violation:.2e}; \
             violated certificates have s >= {s_fail:.3}, honoured ones s <= {s_hold:.3}; problems: {}",
            counts[0],
            counts[1],
            counts[2],
            summary(&bad)
        ),
    }
}

fn criterion_6(runs: &[Run]) -> Verdict {
    let mut min_margin = f64::INFINITY;
    let mut worst_cross = 0.0_f64;
    let mut count = 0;
    let mut pass = true;
    for run in runs.iter().filter(|r| r.report.damping.lambda0().is_some()) {
        let m = run.pencil.m();
        for rec in &run.records {
            let c = semisimplicity_certificate(rec, &run.pencil);
            count += 1;
            min_margin = min_margin.min(c.margin / m);
            worst_cross = worst_cross.max(c.cross_check / m);
            pass &= c.margin >= 1e-6 * m && c.cross_check <= 1e-8 * m;
        }
    }
    Verdict {
        id: 6,
        pass,
        detail: format!(
            "{count} eigenvalues in {} runs; min margin/m = {min_margin:.3e}; max cross-check/m = {worst_cross:.3e}",
            runs.len()
        ),
    }
}

fn criterion_7() -> Verdict {
    let mut r = rng(7);
    let mut worst_shift = 0.0_f64;
    let mut worst_l = 0.0_f64;
    for _ in 0..50 {
        let n = r.gen_range(1..=50);
        let m: f64 = r.gen_range(0.5..2.0);
        let h0 = random_psd(&mut r, n, 1.0).shift_diag(m * m);
        let v = random_sym(&mut r, n, 1.0 / (n as f64).sqrt());
        let p = KGPencil::synthetic(h0, v, m).unwrap();
        let (lambda, mu) = (r.gen_range(-2.0..2.0) * m, r.gen_range(-2.0..2.0) * m);
        let scale = m * m;
        worst_shift = worst_shift.max(p.shift_identity_residual(lambda, mu) / scale);
        worst_l = worst_l.max(LFactorization::new(&p).unwrap().residual(lambda) / scale);
    }
    Verdict {
        id: 7,
        pass: worst_shift <= 1e-12 && worst_l <= 1e-10,
        detail: format!("50 pencils, N <= 50: max shift residual/m^2 = {worst_shift:.2e}, max factorization residual/m^2 = {worst_l:.2e}"),
    }
}

fn criterion_8(runs: &[Run]) -> Verdict {
    let mut worst_g = 0.0_f64;
    for run in runs {
        if let Some(nu) = run.report.nu {
            let m2 = run.pencil.m().powi(2);
            worst_g = worst_g.max(nu.g_minus.abs() / m2).max(nu.g_plus.abs() / m2);
        }
    }
    // midpoint concavity: 900 triples on random pencils, 100 on a Coulomb sector
    let mut r = rng(8);
    let mut failures = 0;
    let mut pencils: Vec<KGPencil> = (0..45)
        .map(|_| {
            let n = r.gen_range(1..=12);
            damped_pencil(&mut r, n)
        })
        .collect();
    pencils.push(coulomb_pencil(500, 0).0);
    let mut triples = 0;
    for (k, p) in pencils.iter().enumerate() {
        let reps = if k < 45 { 20 } else { 100 };
        for _ in 0..reps {
            let a: f64 = r.gen_range(-3.0..3.0);
            let b: f64 = r.gen_range(-3.0..3.0);
            let (ga, gb, gm) = (g_of_lambda(p, a), g_of_lambda(p, b), g_of_lambda(p, 0.5 * (a + b)));
            let tol = 1e-10 * (p.m().powi(2) + ga.abs() + gb.abs());
            triples += 1;
            if gm < 0.5 * (ga + gb) - tol {
                failures += 1;
            }
        }
    }
    let p2 = KGPencil::synthetic(
        SymMatrix::diagonal(vec![1.0, 4.0]).unwrap(),
        SymMatrix::diagonal(vec![0.3, 0.5]).unwrap(),
        1.0,
    )
    .unwrap();
    let p2_ok = match synthetic_run("P2".into(), p2) {
        Ok(run) => {
            let nu = run.report.nu.unwrap();
            let spec = expanded(&run.records);
            let want = [-1.5, -0.7, 1.3, 2.5];
            (nu.nu_minus + 0.7).abs() <= 1e-9
                && (nu.nu_plus - 1.3).abs() <= 1e-9
                && spec.len() == 4
                && spec.iter().zip(want).all(|(x, y)| (x - y).abs() <= 1e-9)
        }
        Err(_) => false,
    };
    Verdict {
        id: 8,
        pass: worst_g <= 1e-8 && failures == 0 && triples == 1000 && p2_ok,
        detail: format!(
            "max |g(nu)|/m^2 = {worst_g:.2e} over {} runs; concavity failures {failures}/{triples}; P2 example reproduced: {p2_ok}",
            runs.len()
        ),
    }
}

fn criterion_9(runs: &[Run]) -> Verdict {
    let grid = RadialGrid::new(60.0, 8000, 2.0).unwrap();
    let nj = najman_q_bounds(&PotentialKind::Coulomb { ze2: ZE2 }, ZE2, 1.0, &grid).unwrap();
    let close = (nj.q_minus + 1.0).abs() <= 1e-6 && nj.q_plus.abs() <= 1e-6;
    // every Coulomb eigenvalue in (−∞, −m] ∪ [0, ∞)
    let stray = runs
        .iter()
        .filter(|r| r.name.starts_with("coulomb"))
        .flat_map(|r| r.records.iter())
        .filter(|rec| rec.lambda > nj.q_minus + 1e-9 && rec.lambda < nj.q_plus - 1e-9)
        .count();
    Verdict {
        id: 9,
        pass: close && stray == 0,
        detail: format!(
            "(q-, q+) = ({:.10}, {:.10}); Coulomb eigenvalues inside: {stray}",
            nj.q_minus, nj.q_plus
        ),
    }
}

/// `∬ W(x)W(y)/|x−y|²` by Monte Carlo: `x ~ N(0, σ_x²I)`, `y = x + z` with
/// `|z|` half-normal and the direction of `z` uniform.
fn rollnik_monte_carlo(w: impl Fn(f64) -> f64, sigma_x: f64, sigma_z: f64, samples: usize, seed: u64) -> (f64, f64) {
    use std::f64::consts::PI;
    let mut r = rng(seed);
    let normal = |r: &mut rand_chacha::ChaCha8Rng| -> [f64; 3] {
        [
            StandardNormal.sample(r),
            StandardNormal.sample(r),
            StandardNormal.sample(r),
        ]
    };
    let norm3 = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let px = |rr: f64| (-rr * rr / (2.0 * sigma_x * sigma_x)).exp() / (2.0 * PI * sigma_x * sigma_x).powf(1.5);
    let rho = |t: f64| (2.0 / PI).sqrt() / sigma_z * (-t * t / (2.0 * sigma_z * sigma_z)).exp();
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let x = normal(&mut r).map(|v| v * sigma_x);
        let d = normal(&mut r);
        let dn = norm3(d);
        let t = Distribution::<f64>::sample(&StandardNormal, &mut r).abs() * sigma_z;
        let y = [x[0] + t * d[0] / dn, x[1] + t * d[1] / dn, x[2] + t * d[2] / dn];
        let rx = norm3(x);
        // density of z is ρ(|z|)/(4π|z|²), which cancels 1/|x−y|²
        let f = w(rx) / px(rx) * 4.0 * PI * w(norm3(y)) / rho(t);
        sum += f;
        sum2 += f * f;
    }
    let mean = sum / samples as f64;
    let var = (sum2 / samples as f64 - mean * mean).max(0.0);
    (mean, (var / samples as f64).sqrt())
}

fn criterion_10(runs: &mut Vec<Run>) -> Verdict {
    let (depth, width) = (-1.0, 1.5);
    let kind = PotentialKind::Gaussian { depth, width };
    let quad = rollnik_norm(&kind, 1.0, 16);
    let integral = quad.integral.unwrap_or(f64::NAN);
    let w = |r: f64| (depth * (-(r / width).powi(2)).exp()).powi(2);
    let (mc, err) = rollnik_monte_carlo(w, 1.0, 1.5, 1_000_000, 10);
    let rel = (mc - integral).abs() / integral;
    let closed = gaussian_rollnik_integral(depth, width);
    let mut detail = format!(
        "I quadrature {integral:.6} (closed form {closed:.6}), Monte Carlo {mc:.6} +- {err:.1e}, rel. diff {rel:.2e}; norm {:.4} vs 4pi",
        quad.norm.unwrap_or(f64::NAN)
    );
    let mut pass = rel <= 0.02 && quad.norm.is_some_and(|n| n < 4.0 * std::f64::consts::PI);
    let Some((lo, hi)) = quad.gap else {
        return Verdict {
            id: 10,
            pass: false,
            detail,
        };
    };
    let mut total = 0;
    for l in [0, 1] {
        let grid = RadialGrid::new(40.0, 300, 1.0).unwrap();
        let problem = RadialProblem::new(grid, PotentialSpec::natural(kind.clone()), l, 1.0).unwrap();
        let p = KGPencil::from_radial(&problem).unwrap();
        match synthetic_run(format!("gaussian l={l}"), p) {
            Ok(mut run) => {
                run.radial = true;
                let inside = run.records.iter().filter(|r| r.lambda > lo && r.lambda < hi).count();
                let bound = run.records.iter().filter(|r| r.lambda > 0.0 && r.lambda < 1.0).count();
                total += run.records.iter().map(|r| r.multiplicity).sum::<usize>();
                pass &= inside == 0;
                detail.push_str(&format!(
                    "; l={l}: {inside} eigenvalues in ({lo:.4}, {hi:.4}), {bound} bound states"
                ));
                runs.push(run);
            }
            Err(e) => {
                pass = false;
                detail.push_str(&format!("; l={l}: {e}"));
            }
        }
    }
    detail.push_str(&format!("; {total} eigenvalues checked"));
    Verdict { id: 10, pass, detail }
}

fn criterion_11() -> Verdict {
    let mut problems = Vec::new();
    for l in 0..3 {
        for n in [500, 2000] {
            let grid = RadialGrid::new(60.0, n, 2.0).unwrap();
            problems.push(
                RadialProblem::new(
                    grid,
                    PotentialSpec::natural(PotentialKind::Coulomb { ze2: ZE2 }),
                    l,
                    1.0,
                )
                .unwrap(),
            );
        }
    }
    for l in 0..2 {
        let grid = RadialGrid::new(40.0, 300, 1.0).unwrap();
        let spec = PotentialSpec::natural(PotentialKind::Gaussian {
            depth: -1.0,
            width: 1.5,
        });
        problems.push(RadialProblem::new(grid, spec, l, 1.0).unwrap());
    }
    problems.push(
        RadialProblem::new(
            RadialGrid::new(20.0, 100, 1.0).unwrap(),
            PotentialSpec::natural(PotentialKind::Zero),
            0,
            2.0,
        )
        .unwrap(),
    );
    let mut positive = 0;
    let mut total = 0;
    let mut min_entry = f64::INFINITY;
    let mut reducible_false = true;
    for pr in &problems {
        let h0 = build_h0(pr).unwrap();
        for c in [0.1, 1.0, 10.0] {
            let res = discrete_positivity_resolvent(&h0, c).unwrap();
            total += 1;
            positive += res.positive as usize;
            min_entry = min_entry.min(res.min_entry);
        }
        let diag = SymMatrix::diagonal(h0.diagonal_entries()).unwrap();
        reducible_false &= !discrete_positivity_resolvent(&diag, 1.0).unwrap().positive;
    }
    Verdict {
        id: 11,
        pass: positive == total && reducible_false,
        detail: format!(
            "{positive}/{total} resolvents entrywise positive (smallest entry {min_entry:.2e}); diagonal counterexamples rejected: {reducible_false}"
        ),
    }
}

fn main() {
    let started = Instant::now();
    let mut runs = Vec::new();
    let mut verdicts = Vec::new();
    coulomb_suite(&mut verdicts, &mut runs);
    let pointwise = verdicts.pop().expect("pointwise verdict");
    verdicts.push(criterion_4(&mut runs));
    verdicts.push(criterion_5(&mut runs));
    verdicts.push(criterion_10(&mut runs));
    verdicts.push(criterion_3(&runs, pointwise));
    verdicts.push(criterion_6(&runs));
    verdicts.push(criterion_7());
    verdicts.push(criterion_8(&runs));
    verdicts.push(criterion_9(&runs));
    verdicts.push(criterion_11());
    verdicts.sort_by_key(|v| v.id);
    println!();
    for v in &verdicts {
        println!(
            "criterion {:>2}: {} | {}",
            v.id,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    println!(
        "acceptance: {} of {} criteria pass ({:.1} s)",
        verdicts.len() - failed,
        verdicts.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
