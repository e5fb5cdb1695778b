//! Subcommand drivers. Each returns data; files are written by the caller.

use rayon::prelude::*;
use thiserror::Error;

use crate::eig::{
    eigenvalues_in, extremal_certificates, semisimplicity_certificate, EigOptions, EigenvalueRecord,
    ExtremalCertificate, SemisimpleCertificate, Side,
};
use crate::gap::{
    apriori_intervals, certify_strong_damping, compute_nu, default_b_grid, form_bound_constants, gap_report,
    rollnik_norm, Damping, ExtraBounds, GapOptions, GapReport, Interval,
};
use crate::model::{najman_q_bounds, PotentialSpec, RadialGrid, RadialProblem};
use crate::pencil::KGPencil;
use crate::reference::{coulomb_eigenvalue, CoulombParams};

use super::config::{ConfigError, Problem, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

/// Distance (in units of `m`) within which an eigenvalue counts as `ν±`.
pub const EXTREMAL_TOL: f64 = 1e-7;

/// Acceptance threshold on the final relative error of a Coulomb level.
pub fn coulomb_threshold(k: u32, l: u32) -> f64 {
    if (k, l) == (1, 0) {
        5e-3
    } else {
        1e-2
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("problem setup: {0}")]
    Setup(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Setup(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Counterexample,
    Convergence,
}

impl FailureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureKind::Counterexample => "damping_counterexample",
            FailureKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

/// Closed-form comparison for one computed Coulomb level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub k: u32,
    pub l: u32,
    pub n: usize,
    pub closed: f64,
    pub numeric: f64,
    pub rel_err: f64,
    /// `2l+1`.
    pub multiplicity: u32,
}

/// Everything computed for one pencil.
#[derive(Debug, Clone)]
pub struct SectorOutcome {
    pub name: String,
    pub l: Option<u32>,
    /// Copies of each level in 3D (`2l+1`; 1 for matrix files).
    pub degeneracy: u32,
    pub dim: usize,
    pub m: f64,
    pub report: Option<GapReport>,
    pub records: Vec<EigenvalueRecord>,
    pub semisimple: Vec<SemisimpleCertificate>,
    pub extremal: Vec<ExtremalCertificate>,
    pub levels: Vec<LevelRow>,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOutcome {
    pub sectors: Vec<SectorOutcome>,
    pub exit_code: i32,
}

/// A pencil ready for analysis.
pub struct Sector {
    pub name: String,
    pub l: Option<u32>,
    pub pencil: KGPencil,
    pub grid: Option<RadialGrid>,
}

/// Builds one pencil per configured sector (a single one for matrix files).
pub fn build_sectors(cfg: &RunConfig, points: Option<usize>) -> Result<Vec<Sector>, CliError> {
    match &cfg.problem {
        Problem::Matrix { path } => {
            let pencil =
                KGPencil::from_matrix_file(&cfg.resolve(path), cfg.mass).map_err(|e| CliError::Setup(e.to_string()))?;
            Ok(vec![Sector {
                name: "matrix".into(),
                l: None,
                pencil,
                grid: None,
            }])
        }
        Problem::Radial { sectors, grid, .. } => {
            let spec = cfg.potential_spec()?.expect("radial problem has a potential");
            let m = cfg.mass.expect("radial problem has a mass");
            let r_max = cfg.r_max().expect("radial problem has r_max");
            let g = RadialGrid::new(r_max, points.unwrap_or(grid.points), grid.grading)
                .map_err(|e| CliError::Setup(e.to_string()))?;
            sectors.par_iter().map(|&l| radial_sector(&spec, &g, l, m)).collect()
        }
    }
}

fn radial_sector(spec: &PotentialSpec, grid: &RadialGrid, l: u32, m: f64) -> Result<Sector, CliError> {
    let problem = RadialProblem::new(grid.clone(), spec.clone(), l, m).map_err(|e| CliError::Setup(e.to_string()))?;
    let pencil = KGPencil::from_radial(&problem).map_err(|e| CliError::Setup(e.to_string()))?;
    Ok(Sector {
        name: format!("l={l}"),
        l: Some(l),
        pencil,
        grid: Some(grid.clone()),
    })
}

/// Najman and Rollnik inputs shared by all sectors.
pub fn extra_bounds(cfg: &RunConfig, grid: Option<&RadialGrid>) -> Result<ExtraBounds, CliError> {
    let Some(spec) = cfg.potential_spec()? else {
        return Ok(ExtraBounds::default());
    };
    let m = cfg.mass.expect("radial problem has a mass");
    let najman = match (selected(cfg, "najman"), grid) {
        (true, Some(g)) => {
            let gamma = cfg
                .najman_gamma
                .unwrap_or_else(|| cfg.coulomb().map_or(0.0, |c| c.ze2()));
            Some(najman_q_bounds(&spec.kind, gamma, m, g).map_err(|e| CliError::Setup(e.to_string()))?)
        }
        _ => None,
    };
    let rollnik = (cfg.rollnik && selected(cfg, "rollnik")).then(|| rollnik_norm(&spec.kind, m, cfg.quadrature_order));
    Ok(ExtraBounds { najman, rollnik })
}

fn selected(cfg: &RunConfig, family: &str) -> bool {
    cfg.bounds.iter().any(|b| b == family)
}

fn keep_interval(cfg: &RunConfig, iv: &Interval) -> bool {
    cfg.bounds
        .iter()
        .any(|f| iv.label == *f || iv.label.strip_prefix(f.as_str()).is_some_and(|r| r.starts_with('-')))
}

fn gap_options(cfg: &RunConfig) -> GapOptions {
    GapOptions {
        b_grid: default_b_grid(),
        nu_tol: cfg.nu_tol,
        profile_points: cfg.profile_points,
        n_samples: cfg.damping_samples,
        seed: cfg.seed,
    }
}

fn eig_options(cfg: &RunConfig) -> EigOptions {
    EigOptions {
        bracket_tol: cfg.bracket_tol,
        residual_tol: cfg.residual_tol,
        seed: cfg.seed,
    }
}

/// Full pipeline: damping, `ν±`, bounds, eigenvalues and certificates.
pub fn analyze(cfg: &RunConfig) -> Result<AnalyzeOutcome, CliError> {
    let sectors = build_sectors(cfg, None)?;
    let extra = extra_bounds(cfg, sectors.first().and_then(|s| s.grid.as_ref()))?;
    let coulomb = cfg.coulomb();
    let outcomes: Vec<SectorOutcome> = sectors
        .par_iter()
        .map(|s| analyze_sector(cfg, s, &extra, coulomb.as_ref()))
        .collect();
    let exit_code = if outcomes.iter().any(|o| {
        o.failure
            .as_ref()
            .is_some_and(|f| f.kind == FailureKind::Counterexample)
    }) {
        EXIT_COUNTEREXAMPLE
    } else if outcomes.iter().any(|o| o.failure.is_some()) {
        EXIT_CONVERGENCE
    } else {
        EXIT_OK
    };
    Ok(AnalyzeOutcome {
        sectors: outcomes,
        exit_code,
    })
}

fn analyze_sector(cfg: &RunConfig, s: &Sector, extra: &ExtraBounds, coulomb: Option<&CoulombParams>) -> SectorOutcome {
    let p = &s.pencil;
    let mut out = SectorOutcome {
        name: s.name.clone(),
        l: s.l,
        degeneracy: s.l.map_or(1, |l| 2 * l + 1),
        dim: p.dim(),
        m: p.m(),
        report: None,
        records: Vec::new(),
        semisimple: Vec::new(),
        extremal: Vec::new(),
        levels: Vec::new(),
        failure: None,
    };
    let convergence = |message: String| {
        Some(Failure {
            kind: FailureKind::Convergence,
            message,
        })
    };
    let mut report = match gap_report(p, &gap_options(cfg), extra, &[0.0]) {
        Ok(r) => r,
        Err(e) => {
            out.failure = convergence(e.to_string());
            return out;
        }
    };
    report.intervals.retain(|iv| keep_interval(cfg, iv));
    let nu = report.nu;
    match &report.damping {
        Damping::Counterexample { discriminant, .. } => {
            out.failure = Some(Failure {
                kind: FailureKind::Counterexample,
                message: format!("vector with discriminant {discriminant:e} has no two distinct real roots"),
            });
        }
        Damping::Inconclusive { best_lambda, best_g } => {
            out.failure = convergence(format!(
                "no positive definite T(lambda) found and no counterexample (best g = {best_g:e} at lambda = {best_lambda})"
            ));
        }
        Damping::Certified { .. } => {}
    }
    out.report = Some(report);
    let Some(nu) = nu else {
        return out;
    };
    match sector_eigenvalues(cfg, p, nu.nu_minus, nu.nu_plus) {
        Ok(records) => {
            out.semisimple = records.iter().map(|r| semisimplicity_certificate(r, p)).collect();
            out.extremal = extremal_certificates(&records, nu.nu_minus, nu.nu_plus, p, EXTREMAL_TOL);
            if let (Some(params), Some(l)) = (coulomb, s.l) {
                out.levels = closed_form_rows(params, l, p.dim(), &records);
            }
            out.records = records;
        }
        Err(e) => out.failure = convergence(e.to_string()),
    }
    out
}

fn sector_eigenvalues(
    cfg: &RunConfig,
    p: &KGPencil,
    nu_minus: f64,
    nu_plus: f64,
) -> Result<Vec<EigenvalueRecord>, String> {
    let opts = eig_options(cfg);
    let cap = p.lambda_cap().map_err(|e| e.to_string())?;
    let window = match (&cfg.problem, cfg.eig_window) {
        (_, Some(w)) => w.min(cap),
        (Problem::Radial { .. }, None) => p.m().min(cap),
        (Problem::Matrix { .. }, None) => cap,
    };
    let pad = (opts.bracket_tol * p.m()).min(0.25 * (nu_plus - nu_minus));
    let mut records = Vec::new();
    if -window < nu_minus + pad {
        records.extend(eigenvalues_in(p, -window, nu_minus + pad, Side::Minus, &opts).map_err(|e| e.to_string())?);
    }
    if nu_plus - pad < window {
        records.extend(eigenvalues_in(p, nu_plus - pad, window, Side::Plus, &opts).map_err(|e| e.to_string())?);
    }
    Ok(records)
}

/// Plus-zone records of sector `l` matched to `(k, l)` in increasing order.
fn closed_form_rows(params: &CoulombParams, l: u32, n: usize, records: &[EigenvalueRecord]) -> Vec<LevelRow> {
    records
        .iter()
        .filter(|r| r.side == Side::Plus)
        .take(5)
        .enumerate()
        .filter_map(|(i, r)| {
            let level = coulomb_eigenvalue(params, l + 1 + i as u32, l).ok()?;
            Some(LevelRow {
                k: level.k,
                l,
                n,
                closed: level.lambda,
                numeric: r.lambda,
                rel_err: (r.lambda - level.lambda).abs() / level.lambda.abs(),
                multiplicity: level.multiplicity,
            })
        })
        .collect()
}

/// Only the a-priori intervals (no damping check, no eigenvalues).
pub fn bounds(cfg: &RunConfig) -> Result<Vec<(String, f64, Vec<Interval>)>, CliError> {
    let sectors = build_sectors(cfg, None)?;
    let extra = extra_bounds(cfg, sectors.first().and_then(|s| s.grid.as_ref()))?;
    sectors
        .par_iter()
        .map(|s| {
            let consts =
                form_bound_constants(&s.pencil, &default_b_grid()).map_err(|e| CliError::Setup(e.to_string()))?;
            let mut ivs = apriori_intervals(&consts, s.pencil.v_sign(), &extra);
            ivs.retain(|iv| keep_interval(cfg, iv));
            Ok((s.name.clone(), consts.s_norm, ivs))
        })
        .collect()
}

/// One row of a `scan`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub lambda: f64,
    pub g: f64,
    pub det_sign: i8,
    pub n_neg: usize,
}

/// `g`, `sign det T` and `n_neg` at `steps` equally spaced points of `[from, to]`.
pub fn scan(cfg: &RunConfig, from: f64, to: f64, steps: usize) -> Result<Vec<(String, Vec<ScanRow>)>, CliError> {
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(CliError::Setup(format!(
            "scan range [{from}, {to}] must be finite and increasing"
        )));
    }
    if steps < 2 {
        return Err(CliError::Setup(format!("scan needs at least 2 steps, got {steps}")));
    }
    let sectors = build_sectors(cfg, None)?;
    Ok(sectors
        .iter()
        .map(|s| {
            let rows = (0..steps)
                .into_par_iter()
                .map(|i| {
                    let lambda = if i + 1 == steps {
                        to
                    } else {
                        from + (to - from) * i as f64 / (steps - 1) as f64
                    };
                    let c = s.pencil.negative_count(lambda);
                    let det_sign = if c.singular {
                        0
                    } else if c.n_neg % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    ScanRow {
                        lambda,
                        g: crate::gap::g_of_lambda(&s.pencil, lambda),
                        det_sign,
                        n_neg: c.n_neg,
                    }
                })
                .collect();
            (s.name.clone(), rows)
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct ValidationOutcome {
    /// Rows ordered by level, then by grid size.
    pub rows: Vec<LevelRow>,
    /// Per level: final error within threshold, and for `(1,0)` strictly
    /// decreasing over the ladder.
    pub verdicts: Vec<(u32, u32, bool)>,
    pub failures: Vec<String>,
    pub exit_code: i32,
}

/// Lowest plus-zone eigenvalues of sector `l` on an `n`-point grid.
fn plus_levels(cfg: &RunConfig, l: u32, n: usize, count: usize) -> Result<Vec<f64>, String> {
    let spec = cfg.potential_spec().map_err(|e| e.to_string())?.expect("radial");
    let m = cfg.mass.expect("radial problem has a mass");
    let Problem::Radial { grid, .. } = &cfg.problem else {
        unreachable!("validate-coulomb needs a radial problem")
    };
    let g = RadialGrid::new(cfg.r_max().expect("radial"), n, grid.grading).map_err(|e| e.to_string())?;
    let problem = RadialProblem::new(g, spec, l, m).map_err(|e| e.to_string())?;
    let p = KGPencil::from_radial(&problem).map_err(|e| e.to_string())?;
    let damping = certify_strong_damping(&p, &[0.0], cfg.damping_samples, cfg.seed).map_err(|e| e.to_string())?;
    let lambda0 = damping
        .lambda0()
        .ok_or_else(|| format!("l={l}, N={n}: damping {}", damping.status()))?;
    let nu = compute_nu(&p, lambda0, cfg.nu_tol).map_err(|e| e.to_string())?;
    let opts = eig_options(cfg);
    let pad = (opts.bracket_tol * m).min(0.25 * (nu.nu_plus - nu.nu_minus));
    let recs = eigenvalues_in(&p, nu.nu_plus - pad, m, Side::Plus, &opts).map_err(|e| e.to_string())?;
    Ok(recs.iter().take(count).map(|r| r.lambda).collect())
}

/// Refinement study of the configured Coulomb levels.
pub fn validate_coulomb(cfg: &RunConfig) -> Result<ValidationOutcome, CliError> {
    let params = cfg
        .coulomb()
        .ok_or_else(|| CliError::Setup("validate-coulomb needs an unshifted coulomb potential".into()))?;
    let mut ls: Vec<u32> = cfg.levels.iter().map(|&(_, l)| l).collect();
    ls.sort_unstable();
    ls.dedup();
    let jobs: Vec<(u32, usize)> = ls
        .iter()
        .flat_map(|&l| cfg.ladder.iter().map(move |&n| (l, n)))
        .collect();
    let results: Vec<Result<Vec<f64>, String>> = jobs
        .par_iter()
        .map(|&(l, n)| {
            let count = cfg
                .levels
                .iter()
                .filter(|lv| lv.1 == l)
                .map(|lv| lv.0 - l)
                .max()
                .unwrap_or(1) as usize;
            plus_levels(cfg, l, n, count)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut verdicts = Vec::new();
    for &(k, l) in &cfg.levels {
        let level = coulomb_eigenvalue(&params, k, l).map_err(|e| CliError::Setup(e.to_string()))?;
        let mut errs = Vec::new();
        for &n in &cfg.ladder {
            let idx = jobs.iter().position(|&j| j == (l, n)).expect("job exists");
            let numeric = match &results[idx] {
                Ok(v) => v.get((k - l - 1) as usize).copied().unwrap_or(f64::NAN),
                Err(e) => {
                    failures.push(format!("({k},{l}) N={n}: {e}"));
                    f64::NAN
                }
            };
            if numeric.is_nan() && results[idx].is_ok() {
                failures.push(format!("({k},{l}) N={n}: level not found below m"));
            }
            let rel_err = (numeric - level.lambda).abs() / level.lambda.abs();
            errs.push(rel_err);
            rows.push(LevelRow {
                k,
                l,
                n,
                closed: level.lambda,
                numeric,
                rel_err,
                multiplicity: level.multiplicity,
            });
        }
        let last = *errs.last().expect("ladder is nonempty");
        let mut ok = last <= coulomb_threshold(k, l);
        if (k, l) == (1, 0) {
            ok &= errs.windows(2).all(|w| w[1] < w[0]);
        }
        verdicts.push((k, l, ok));
    }
    let exit_code = if failures.is_empty() && verdicts.iter().all(|v| v.2) {
        EXIT_OK
    } else {
        EXIT_CONVERGENCE
    };
    Ok(ValidationOutcome {
        rows,
        verdicts,
        failures,
        exit_code,
    })
}
