//! INI-style run configuration.
//!
//! ```text
//! # comments start with '#' or ';'
//! [problem]
//! potential = coulomb      # coulomb | gaussian | table | zero | matrix
//! ze2 = 0.3
//! mass = 1
//! sectors = 0, 1, 2
//!
//! [grid]
//! points = 4000
//! grading = 2
//! ```
//!
//! Relative paths (`table`, `matrix`, `output.dir`) resolve against the
//! directory of the config file. Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{PotentialKind, PotentialSpec, SignHint, TablePotential};
use crate::reference::{coulomb_eigenvalue, CoulombParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("[{section}] {key}: {msg}")]
    Value { section: String, key: String, msg: String },
    #[error("unknown key '{key}' in [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

const KEYS: &[(&str, &[&str])] = &[
    (
        "problem",
        &[
            "potential",
            "ze2",
            "depth",
            "width",
            "table",
            "matrix",
            "shift",
            "sign",
            "mass",
            "sectors",
        ],
    ),
    ("grid", &["points", "r_max", "grading"]),
    (
        "analysis",
        &[
            "bounds",
            "rollnik",
            "najman_gamma",
            "quadrature_order",
            "profile_points",
            "eig_window",
        ],
    ),
    ("solver", &["nu_tol", "bracket_tol", "residual_tol", "damping_samples"]),
    ("validate", &["ladder", "levels"]),
    ("output", &["dir", "eigenvectors"]),
    ("run", &["seed"]),
];

/// Bound families that `analysis.bounds` can select.
pub const BOUND_FAMILIES: &[&str] = &["s-norm", "delta1", "delta2", "delta3", "profile", "najman", "rollnik"];

/// Raw `section → key → (line, value)` map.
#[derive(Debug, Default)]
struct Ini {
    sections: BTreeMap<String, BTreeMap<String, (usize, String)>>,
}

impl Ini {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut ini = Ini::default();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split(['#', ';']).next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::Syntax {
                        line,
                        msg: "unterminated section header".into(),
                    })?
                    .trim()
                    .to_ascii_lowercase();
                if !KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(ConfigError::UnknownSection(name));
                }
                ini.sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let (k, v) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: format!("expected key = value, got '{body}'"),
            })?;
            let section = current.clone().ok_or_else(|| ConfigError::Syntax {
                line,
                msg: "key outside any section".into(),
            })?;
            let key = k.trim().to_ascii_lowercase();
            let allowed = KEYS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey { section, key });
            }
            let entries = ini.sections.entry(section.clone()).or_default();
            if entries.insert(key.clone(), (line, v.trim().to_string())).is_some() {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("duplicate key [{section}] {key}"),
                });
            }
        }
        Ok(ini)
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(|(_, v)| v.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e: T::Err| value_err(section, key, e.to_string())),
        }
    }

    fn list<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|e: T::Err| value_err(section, key, format!("'{s}': {e}")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    fn flag(&self, section: &str, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => match v.to_ascii_lowercase().as_str() {
                "on" | "true" | "yes" | "1" => Ok(Some(true)),
                "off" | "false" | "no" | "0" => Ok(Some(false)),
                other => Err(value_err(section, key, format!("expected on/off, got '{other}'"))),
            },
        }
    }
}

fn value_err(section: &str, key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        section: section.into(),
        key: key.into(),
        msg: msg.into(),
    }
}

/// Potential as written in the config; tables are loaded on demand.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSource {
    Coulomb { ze2: f64 },
    Gaussian { depth: f64, width: f64 },
    Table { path: PathBuf },
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub points: usize,
    /// `None` picks the default from the mass and a bound-state estimate.
    pub r_max: Option<f64>,
    pub grading: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Radial {
        potential: PotentialSource,
        shift: f64,
        /// `None` uses the sign implied by the potential.
        sign: Option<SignHint>,
        sectors: Vec<u32>,
        grid: GridConfig,
    },
    Matrix {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    /// Required for radial problems; optional for matrix files.
    pub mass: Option<f64>,
    /// Selected families from [`BOUND_FAMILIES`].
    pub bounds: Vec<String>,
    pub rollnik: bool,
    pub najman_gamma: Option<f64>,
    pub quadrature_order: usize,
    pub profile_points: usize,
    /// Eigenvalues are computed in `[−w, ν−] ∪ [ν+, w]`; `None` means `m`
    /// for radial runs and the full cap for matrix files.
    pub eig_window: Option<f64>,
    pub nu_tol: f64,
    pub bracket_tol: f64,
    pub residual_tol: f64,
    pub damping_samples: usize,
    pub ladder: Vec<usize>,
    pub levels: Vec<(u32, u32)>,
    pub out_dir: PathBuf,
    pub eigenvectors: bool,
    pub seed: u64,
    /// Directory that relative paths resolve against.
    pub base_dir: PathBuf,
}

pub const DEFAULT_LADDER: [usize; 5] = [500, 1000, 2000, 4000, 8000];
pub const DEFAULT_LEVELS: [(u32, u32); 4] = [(1, 0), (2, 0), (2, 1), (3, 0)];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let ini = Ini::parse(text)?;
        let kind = ini
            .get("problem", "potential")
            .unwrap_or("coulomb")
            .to_ascii_lowercase();
        let need = |key: &str| -> Result<f64, ConfigError> {
            ini.parsed::<f64>("problem", key)?
                .ok_or_else(|| value_err("problem", key, format!("required for potential = {kind}")))
        };
        let problem = if kind == "matrix" {
            let path = ini
                .get("problem", "matrix")
                .ok_or_else(|| value_err("problem", "matrix", "required for potential = matrix"))?;
            Problem::Matrix {
                path: PathBuf::from(path),
            }
        } else {
            let potential = match kind.as_str() {
                "coulomb" => PotentialSource::Coulomb { ze2: need("ze2")? },
                "gaussian" => PotentialSource::Gaussian {
                    depth: need("depth")?,
                    width: need("width")?,
                },
                "table" => PotentialSource::Table {
                    path: PathBuf::from(
                        ini.get("problem", "table")
                            .ok_or_else(|| value_err("problem", "table", "required for potential = table"))?,
                    ),
                },
                "zero" => PotentialSource::Zero,
                other => {
                    return Err(value_err(
                        "problem",
                        "potential",
                        format!("unknown potential '{other}'"),
                    ))
                }
            };
            let sign = match ini.get("problem", "sign").map(str::to_ascii_lowercase).as_deref() {
                None | Some("auto") => None,
                Some("negative") => Some(SignHint::Negative),
                Some("positive") => Some(SignHint::Positive),
                Some("indefinite") => Some(SignHint::Indefinite),
                Some(other) => return Err(value_err("problem", "sign", format!("unknown sign hint '{other}'"))),
            };
            Problem::Radial {
                potential,
                shift: ini.parsed("problem", "shift")?.unwrap_or(0.0),
                sign,
                sectors: ini.list("problem", "sectors")?.unwrap_or_else(|| vec![0]),
                grid: GridConfig {
                    points: ini.parsed("grid", "points")?.unwrap_or(2000),
                    r_max: ini.parsed("grid", "r_max")?,
                    grading: ini.parsed("grid", "grading")?.unwrap_or(2.0),
                },
            }
        };
        let mass = match (ini.parsed::<f64>("problem", "mass")?, &problem) {
            (Some(m), _) => Some(m),
            (None, Problem::Radial { .. }) => Some(1.0),
            (None, Problem::Matrix { .. }) => None,
        };
        let bounds = match ini.list::<String>("analysis", "bounds")? {
            None => BOUND_FAMILIES.iter().map(|s| s.to_string()).collect(),
            Some(v) if v.len() == 1 && v[0].eq_ignore_ascii_case("all") => {
                BOUND_FAMILIES.iter().map(|s| s.to_string()).collect()
            }
            Some(v) => v.into_iter().map(|s| s.to_ascii_lowercase()).collect(),
        };
        let levels = match ini.get("validate", "levels") {
            None => DEFAULT_LEVELS.to_vec(),
            Some(text) => parse_levels(text)?,
        };
        let out_dir = PathBuf::from(ini.get("output", "dir").unwrap_or("kgpencil-out"));
        let cfg = RunConfig {
            problem,
            mass,
            bounds,
            rollnik: ini.flag("analysis", "rollnik")?.unwrap_or(true),
            najman_gamma: ini.parsed("analysis", "najman_gamma")?,
            quadrature_order: ini.parsed("analysis", "quadrature_order")?.unwrap_or(16),
            profile_points: ini.parsed("analysis", "profile_points")?.unwrap_or(101),
            eig_window: ini.parsed("analysis", "eig_window")?,
            nu_tol: ini.parsed("solver", "nu_tol")?.unwrap_or(1e-8),
            bracket_tol: ini.parsed("solver", "bracket_tol")?.unwrap_or(1e-9),
            residual_tol: ini.parsed("solver", "residual_tol")?.unwrap_or(1e-10),
            damping_samples: ini.parsed("solver", "damping_samples")?.unwrap_or(1000),
            ladder: ini
                .list("validate", "ladder")?
                .unwrap_or_else(|| DEFAULT_LADDER.to_vec()),
            levels,
            out_dir,
            eigenvectors: ini.flag("output", "eigenvectors")?.unwrap_or(false),
            seed: ini.parsed("run", "seed")?.unwrap_or(42),
            base_dir: base_dir.to_path_buf(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("solver.nu_tol", self.nu_tol)?;
        positive("solver.bracket_tol", self.bracket_tol)?;
        positive("solver.residual_tol", self.residual_tol)?;
        if let Some(m) = self.mass {
            positive("problem.mass", m)?;
        }
        if let Some(w) = self.eig_window {
            positive("analysis.eig_window", w)?;
        }
        if self.quadrature_order < 2 {
            return Err(ConfigError::Invalid(
                "analysis.quadrature_order must be at least 2".into(),
            ));
        }
        if self.profile_points < 2 {
            return Err(ConfigError::Invalid(
                "analysis.profile_points must be at least 2".into(),
            ));
        }
        if let Some(bad) = self.bounds.iter().find(|b| !BOUND_FAMILIES.contains(&b.as_str())) {
            return Err(ConfigError::Invalid(format!(
                "analysis.bounds: unknown family '{bad}' (known: {})",
                BOUND_FAMILIES.join(", ")
            )));
        }
        if let Some(g) = self.najman_gamma {
            if !(g.is_finite() && (0.0..0.5).contains(&g)) {
                return Err(ConfigError::Invalid(format!(
                    "analysis.najman_gamma must lie in [0, 1/2), got {g}"
                )));
            }
        }
        if self.ladder.is_empty() || self.ladder.iter().any(|&n| n < crate::model::MIN_GRID_POINTS) {
            return Err(ConfigError::Invalid(format!(
                "validate.ladder needs sizes of at least {}",
                crate::model::MIN_GRID_POINTS
            )));
        }
        if let Problem::Radial {
            potential,
            shift,
            sectors,
            grid,
            ..
        } = &self.problem
        {
            if sectors.is_empty() {
                return Err(ConfigError::Invalid("problem.sectors must not be empty".into()));
            }
            if grid.points < crate::model::MIN_GRID_POINTS {
                return Err(ConfigError::Invalid(format!(
                    "grid.points must be at least {}",
                    crate::model::MIN_GRID_POINTS
                )));
            }
            if let Some(r) = grid.r_max {
                positive("grid.r_max", r)?;
            }
            if !(grid.grading.is_finite() && grid.grading >= 1.0) {
                return Err(ConfigError::Invalid(format!(
                    "grid.grading must be >= 1, got {}",
                    grid.grading
                )));
            }
            if !shift.is_finite() {
                return Err(ConfigError::Invalid(format!(
                    "problem.shift must be finite, got {shift}"
                )));
            }
            match potential {
                PotentialSource::Coulomb { ze2 } => {
                    if !(*ze2 > 0.0 && *ze2 < 0.5) {
                        return Err(ConfigError::Invalid(format!(
                            "problem.ze2 must lie in (0, 1/2), got {ze2}"
                        )));
                    }
                }
                PotentialSource::Gaussian { depth, width } => {
                    if !depth.is_finite() {
                        return Err(ConfigError::Invalid(format!(
                            "problem.depth must be finite, got {depth}"
                        )));
                    }
                    positive("problem.width", *width)?;
                }
                PotentialSource::Table { .. } | PotentialSource::Zero => {}
            }
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.out_dir)
    }

    /// The potential with its sign hint, loading tables from disk.
    pub fn potential_spec(&self) -> Result<Option<PotentialSpec>, ConfigError> {
        let Problem::Radial {
            potential, shift, sign, ..
        } = &self.problem
        else {
            return Ok(None);
        };
        let base = match potential {
            PotentialSource::Coulomb { ze2 } => PotentialKind::Coulomb { ze2: *ze2 },
            PotentialSource::Gaussian { depth, width } => PotentialKind::Gaussian {
                depth: *depth,
                width: *width,
            },
            PotentialSource::Table { path } => {
                let full = self.resolve(path);
                PotentialKind::Table(TablePotential::load(&full).map_err(|e| ConfigError::Io {
                    path: full.display().to_string(),
                    msg: e.to_string(),
                })?)
            }
            PotentialSource::Zero => PotentialKind::Zero,
        };
        let kind = if *shift != 0.0 { base.shifted(*shift) } else { base };
        Ok(Some(match sign {
            Some(s) => PotentialSpec::new(kind, *s),
            None => PotentialSpec::natural(kind),
        }))
    }

    /// The Coulomb parameters when the problem is an unshifted Coulomb run.
    pub fn coulomb(&self) -> Option<CoulombParams> {
        match &self.problem {
            Problem::Radial {
                potential: PotentialSource::Coulomb { ze2 },
                shift,
                ..
            } if *shift == 0.0 => CoulombParams::new(*ze2, self.mass?).ok(),
            _ => None,
        }
    }

    /// `grid.r_max`, or `24/√(m²−λ²)` from the Coulomb ground level, or `60/m`.
    pub fn r_max(&self) -> Option<f64> {
        let Problem::Radial { grid, .. } = &self.problem else {
            return None;
        };
        let m = self.mass?;
        Some(grid.r_max.unwrap_or_else(|| match self.coulomb() {
            Some(params) => {
                let level = coulomb_eigenvalue(&params, 1, 0).expect("(1,0) is valid");
                // β = 2√(m²−λ²)
                24.0 / (0.5 * level.beta)
            }
            None => 60.0 / m,
        }))
    }

    /// Canonical text form; [`RunConfig::parse`] reads it back unchanged.
    pub fn to_ini(&self) -> String {
        let mut s = String::from("[problem]\n");
        let join = |v: &[String]| v.join(", ");
        match &self.problem {
            Problem::Matrix { path } => {
                writeln!(s, "potential = matrix\nmatrix = {}", path.display()).unwrap();
            }
            Problem::Radial {
                potential,
                shift,
                sign,
                sectors,
                ..
            } => {
                match potential {
                    PotentialSource::Coulomb { ze2 } => writeln!(s, "potential = coulomb\nze2 = {ze2:?}"),
                    PotentialSource::Gaussian { depth, width } => {
                        writeln!(s, "potential = gaussian\ndepth = {depth:?}\nwidth = {width:?}")
                    }
                    PotentialSource::Table { path } => writeln!(s, "potential = table\ntable = {}", path.display()),
                    PotentialSource::Zero => writeln!(s, "potential = zero"),
                }
                .unwrap();
                let sign = match sign {
                    None => "auto",
                    Some(SignHint::Negative) => "negative",
                    Some(SignHint::Positive) => "positive",
                    Some(SignHint::Indefinite) => "indefinite",
                };
                let sectors: Vec<String> = sectors.iter().map(u32::to_string).collect();
                writeln!(s, "shift = {shift:?}\nsign = {sign}\nsectors = {}", join(&sectors)).unwrap();
            }
        }
        if let Some(m) = self.mass {
            writeln!(s, "mass = {m:?}").unwrap();
        }
        if let Problem::Radial { grid, .. } = &self.problem {
            writeln!(s, "\n[grid]\npoints = {}\ngrading = {:?}", grid.points, grid.grading).unwrap();
            if let Some(r) = grid.r_max {
                writeln!(s, "r_max = {r:?}").unwrap();
            }
        }
        writeln!(
            s,
            "\n[analysis]\nbounds = {}\nrollnik = {}\nquadrature_order = {}\nprofile_points = {}",
            join(&self.bounds),
            if self.rollnik { "on" } else { "off" },
            self.quadrature_order,
            self.profile_points
        )
        .unwrap();
        if let Some(g) = self.najman_gamma {
            writeln!(s, "najman_gamma = {g:?}").unwrap();
        }
        if let Some(w) = self.eig_window {
            writeln!(s, "eig_window = {w:?}").unwrap();
        }
        writeln!(
            s,
            "\n[solver]\nnu_tol = {:?}\nbracket_tol = {:?}\nresidual_tol = {:?}\ndamping_samples = {}",
            self.nu_tol, self.bracket_tol, self.residual_tol, self.damping_samples
        )
        .unwrap();
        let ladder: Vec<String> = self.ladder.iter().map(usize::to_string).collect();
        let levels: Vec<String> = self.levels.iter().map(|(k, l)| format!("{k}:{l}")).collect();
        writeln!(
            s,
            "\n[validate]\nladder = {}\nlevels = {}",
            join(&ladder),
            join(&levels)
        )
        .unwrap();
        writeln!(
            s,
            "\n[output]\ndir = {}\neigenvectors = {}",
            self.out_dir.display(),
            if self.eigenvectors { "on" } else { "off" }
        )
        .unwrap();
        writeln!(s, "\n[run]\nseed = {}", self.seed).unwrap();
        s
    }
}

fn parse_levels(text: &str) -> Result<Vec<(u32, u32)>, ConfigError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = || value_err("validate", "levels", format!("expected k:l, got '{item}'"));
            let (k, l) = item.split_once(':').ok_or_else(bad)?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            let l: u32 = l.trim().parse().map_err(|_| bad())?;
            if k == 0 || l >= k {
                return Err(value_err(
                    "validate",
                    "levels",
                    format!("need k >= 1 and l < k, got {k}:{l}"),
                ));
            }
            Ok((k, l))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::parse(text, Path::new("/tmp"))
    }

    const COULOMB: &str = "[problem]\npotential = coulomb\nze2 = 0.3\nsectors = 0, 1, 2\n\n[grid]\npoints = 4000\n";

    #[test]
    fn coulomb_defaults() {
        let c = parse(COULOMB).unwrap();
        assert_eq!(c.mass, Some(1.0));
        assert_eq!(c.seed, 42);
        assert_eq!(c.ladder, DEFAULT_LADDER.to_vec());
        assert_eq!(c.bounds.len(), BOUND_FAMILIES.len());
        match &c.problem {
            Problem::Radial { sectors, grid, .. } => {
                assert_eq!(sectors, &vec![0, 1, 2]);
                assert_eq!(grid.points, 4000);
            }
            _ => panic!("expected a radial problem"),
        }
        // 24/√(1 − 0.9)
        assert!((c.r_max().unwrap() - 24.0 * 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn coupling_guard() {
        assert!(parse("[problem]\nze2 = 0.49\n").is_ok());
        assert!(matches!(parse("[problem]\nze2 = 0.5\n"), Err(ConfigError::Invalid(_))));
        assert!(parse("[problem]\nze2 = 0\n").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse("[problem]\nze2 = 0.3\nfoo = 1\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(parse("[nowhere]\n"), Err(ConfigError::UnknownSection(_))));
        assert!(matches!(parse("ze2 = 0.3\n"), Err(ConfigError::Syntax { .. })));
        assert!(parse("[problem]\nze2 = 0.3\nsectors =\n").is_err());
        assert!(parse("[problem]\nze2 = 0.3\n[solver]\nnu_tol = 0\n").is_err());
        assert!(parse("[problem]\nze2 = 0.3\n[solver]\nbracket_tol = -1\n").is_err());
        assert!(parse("[problem]\nze2 = 0.3\n[analysis]\nnajman_gamma = 0.5\n").is_err());
        assert!(parse("[problem]\nze2 = 0.3\n[analysis]\nbounds = magic\n").is_err());
        assert!(parse("[problem]\npotential = gaussian\ndepth = 1\n").is_err());
        assert!(parse("[problem]\nze2 = 0.3\nze2 = 0.2\n").is_err());
        assert!(parse("[problem]\nze2 = 0.3\n[validate]\nlevels = 1:1\n").is_err());
    }

    #[test]
    fn matrix_problem_has_no_default_mass() {
        let c = parse("[problem]\npotential = matrix\nmatrix = p2.txt\n").unwrap();
        assert_eq!(c.mass, None);
        assert_eq!(c.problem, Problem::Matrix { path: "p2.txt".into() });
        assert_eq!(c.resolve(Path::new("p2.txt")), PathBuf::from("/tmp/p2.txt"));
    }

    #[test]
    fn round_trip_is_exact() {
        let text = "[problem]\npotential = gaussian\ndepth = -0.1\nwidth = 1.7\nshift = 0.1\nsign = indefinite\nmass = 1.3\n\
                    [grid]\nr_max = 33.3\n[analysis]\nbounds = delta1, najman\nrollnik = off\nnajman_gamma = 0.1\neig_window = 0.9\n\
                    [solver]\nnu_tol = 3e-9\n[run]\nseed = 7\n";
        let c = parse(text).unwrap();
        let again = parse(&c.to_ini()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.to_ini(), again.to_ini());
        let d = parse(COULOMB).unwrap();
        assert_eq!(parse(&d.to_ini()).unwrap(), d);
    }
}
