//! Command-line front end: config parsing, orchestration and report files.

pub mod app;
pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use app::{CliError, EXIT_CONFIG, EXIT_OK};
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "kgpencil",
    version,
    about = "Spectral analysis of Klein-Gordon quadratic pencils"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Damping certificate, spectral gap, eigenvalues and certificates.
    Analyze { config: PathBuf },
    /// Tabulate g(lambda), sign det T(lambda) and n_neg over a range.
    Scan {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Refinement study against the closed-form Coulomb levels.
    ValidateCoulomb { config: PathBuf },
    /// Print the a-priori gap intervals only.
    Bounds { config: PathBuf },
}

/// Caps the global rayon pool at `KGPENCIL_THREADS` when set.
pub fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("KGPENCIL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("KGPENCIL_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("KGPENCIL_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn output_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

/// Runs `analyze` and writes its four report files (five with eigenvectors).
pub fn cmd_analyze(cfg: &RunConfig) -> Result<i32, CliError> {
    let out = app::analyze(cfg)?;
    let dir = output_dir(cfg)?;
    write(
        &dir.join("gap_report.json"),
        &report::to_json_text(&report::gap_report_json(cfg, &out)),
    )?;
    write(&dir.join("eigenvalues.csv"), &report::eigenvalues_csv(&out))?;
    write(
        &dir.join("certificates.json"),
        &report::to_json_text(&report::certificates_json(&out)),
    )?;
    let summary = report::summary_text(&out);
    write(&dir.join("summary.txt"), &summary)?;
    if cfg.eigenvectors {
        write(&dir.join("eigenvectors.csv"), &report::eigenvectors_csv(&out))?;
    }
    print!("{summary}");
    Ok(out.exit_code)
}

pub fn cmd_scan(cfg: &RunConfig, from: f64, to: f64, steps: usize, output: Option<&Path>) -> Result<i32, CliError> {
    let csv = report::scan_csv(&app::scan(cfg, from, to, steps)?);
    match output {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

pub fn cmd_validate_coulomb(cfg: &RunConfig) -> Result<i32, CliError> {
    let v = app::validate_coulomb(cfg)?;
    let dir = output_dir(cfg)?;
    write(&dir.join("validate_coulomb.csv"), &report::validation_csv(&v))?;
    print!("{}", report::validation_text(&v));
    Ok(v.exit_code)
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<i32, CliError> {
    let mut s = String::new();
    for (name, s_norm, ivs) in app::bounds(cfg)? {
        s.push_str(&format!("== sector {name} ==\n||V H0^(-1/2)|| = {s_norm:.10}\n"));
        report::interval_table(&ivs, &mut s);
    }
    print!("{s}");
    Ok(EXIT_OK)
}

/// Dispatches a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let path = match &cli.command {
        Command::Analyze { config } | Command::ValidateCoulomb { config } | Command::Bounds { config } => config,
        Command::Scan { config, .. } => config,
    };
    let cfg = match RunConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_CONFIG;
        }
    };
    let result = match &cli.command {
        Command::Analyze { .. } => cmd_analyze(&cfg),
        Command::Scan {
            from,
            to,
            steps,
            output,
            ..
        } => cmd_scan(&cfg, *from, *to, *steps, output.as_deref()),
        Command::ValidateCoulomb { .. } => cmd_validate_coulomb(&cfg),
        Command::Bounds { .. } => cmd_bounds(&cfg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
