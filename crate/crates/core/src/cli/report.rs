//! Serialization of run results: JSON, CSV and the plain-text summary.

use std::fmt::Write as _;

use serde_json::{json, Map, Number, Value};

use crate::eig::Positivity;
use crate::gap::{Damping, Interval};

use super::app::{AnalyzeOutcome, LevelRow, ScanRow, SectorOutcome, ValidationOutcome};
use super::config::RunConfig;

/// 17 significant digits, so every double round-trips; `null` when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt17(x).parse::<Number>().expect("formatted double is a JSON number"))
    } else {
        Value::Null
    }
}

/// `x` with 17 significant digits, as used in CSV output.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn interval_json(iv: &Interval) -> Value {
    json!({
        "label": iv.label,
        "lo": num(iv.lo),
        "hi": num(iv.hi),
        "applicable": iv.applicable,
        "reason": iv.reason,
    })
}

fn damping_json(d: &Damping) -> Value {
    match d {
        Damping::Certified { lambda0, g } => json!({"status": d.status(), "lambda0": num(*lambda0), "g": num(*g)}),
        Damping::Counterexample { x, discriminant } => json!({
            "status": d.status(),
            "discriminant": num(*discriminant),
            "vector": nums(x),
        }),
        Damping::Inconclusive { best_lambda, best_g } => json!({
            "status": d.status(),
            "best_lambda": num(*best_lambda),
            "best_g": num(*best_g),
        }),
    }
}

fn failure_json(s: &SectorOutcome) -> Value {
    match &s.failure {
        Some(f) => json!({"kind": f.kind.as_str(), "message": f.message}),
        None => Value::Null,
    }
}

fn sector_gap_json(s: &SectorOutcome) -> Value {
    let mut o = Map::new();
    o.insert("sector".into(), json!(s.name));
    o.insert("l".into(), json!(s.l));
    o.insert("dim".into(), json!(s.dim));
    o.insert("m".into(), num(s.m));
    o.insert("failure".into(), failure_json(s));
    let Some(r) = &s.report else {
        return Value::Object(o);
    };
    let nu = r.nu;
    o.insert("damping".into(), damping_json(&r.damping));
    o.insert(
        "certificate_lambda".into(),
        r.damping.lambda0().map_or(Value::Null, num),
    );
    o.insert("nu_minus".into(), nu.map_or(Value::Null, |n| num(n.nu_minus)));
    o.insert("nu_plus".into(), nu.map_or(Value::Null, |n| num(n.nu_plus)));
    o.insert("g_nu_minus".into(), nu.map_or(Value::Null, |n| num(n.g_minus)));
    o.insert("g_nu_plus".into(), nu.map_or(Value::Null, |n| num(n.g_plus)));
    o.insert("nu_plus_below_mass".into(), json!(r.nu_plus_below_mass));
    o.insert("s_norm".into(), num(r.constants.s_norm));
    o.insert(
        "pareto".into(),
        Value::Array(r.constants.pareto.iter().map(|p| json!([num(p.a), num(p.b)])).collect()),
    );
    o.insert(
        "delta".into(),
        json!({
            "delta1": r.constants.delta1().map_or(Value::Null, num),
            "delta2": r.constants.delta2().map_or(Value::Null, num),
            "delta3": r.constants.delta3().map_or(Value::Null, num),
        }),
    );
    o.insert(
        "intervals".into(),
        Value::Array(r.intervals.iter().map(interval_json).collect()),
    );
    o.insert(
        "g_profile".into(),
        Value::Array(r.g_profile.iter().map(|&(l, g)| json!([num(l), num(g)])).collect()),
    );
    Value::Object(o)
}

/// `gap_report.json`.
pub fn gap_report_json(cfg: &RunConfig, out: &AnalyzeOutcome) -> Value {
    json!({
        "exit_code": out.exit_code,
        "seed": cfg.seed,
        "sectors": out.sectors.iter().map(sector_gap_json).collect::<Vec<_>>(),
    })
}

/// `certificates.json`: semi-simplicity margins and extremal checks.
pub fn certificates_json(out: &AnalyzeOutcome) -> Value {
    let sectors: Vec<Value> = out
        .sectors
        .iter()
        .map(|s| {
            let semisimple: Vec<Value> = s
                .records
                .iter()
                .zip(&s.semisimple)
                .enumerate()
                .map(|(i, (r, c))| {
                    json!({
                        "record": i,
                        "lambda": num(r.lambda),
                        "side": r.side.as_str(),
                        "margin": num(c.margin),
                        "cross_check": num(c.cross_check),
                        "passes": c.passes,
                    })
                })
                .collect();
            let extremal: Vec<Value> = s
                .extremal
                .iter()
                .map(|e| {
                    json!({
                        "side": e.side.as_str(),
                        "lambda": num(e.lambda),
                        "simple": e.simple,
                        "positivity": e.positivity.as_str(),
                        "min_ratio": e.min_ratio.map_or(Value::Null, num),
                    })
                })
                .collect();
            json!({
                "sector": s.name,
                "failure": failure_json(s),
                "all_semisimple": s.semisimple.iter().all(|c| c.passes),
                "semisimple": semisimple,
                "extremal": extremal,
            })
        })
        .collect();
    json!({ "exit_code": out.exit_code, "sectors": sectors })
}

pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

fn positive_flag(p: Positivity) -> &'static str {
    match p {
        Positivity::StrictlyPositive => "true",
        Positivity::BelowThreshold | Positivity::SignChanging => "false",
        Positivity::NotApplicable => "na",
    }
}

/// `eigenvalues.csv`.
pub fn eigenvalues_csv(out: &AnalyzeOutcome) -> String {
    let mut s = String::from("lambda,side,multiplicity,residual,semisimple_margin,positive_flag,sector,degeneracy\n");
    for sec in &out.sectors {
        for r in &sec.records {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                fmt17(r.lambda),
                r.side.as_str(),
                r.multiplicity,
                fmt17(r.max_residual()),
                fmt17(r.semisimple_margin),
                positive_flag(r.positivity),
                sec.name,
                sec.degeneracy
            )
            .unwrap();
        }
    }
    s
}

/// `eigenvectors.csv`, keyed by the record index within a sector.
pub fn eigenvectors_csv(out: &AnalyzeOutcome) -> String {
    let mut s = String::from("sector,record,vector,component,value\n");
    for sec in &out.sectors {
        for (i, r) in sec.records.iter().enumerate() {
            for (j, v) in r.eigenvectors.iter().enumerate() {
                for (c, x) in v.iter().enumerate() {
                    writeln!(s, "{},{i},{j},{c},{}", sec.name, fmt17(*x)).unwrap();
                }
            }
        }
    }
    s
}

pub fn scan_csv(rows: &[(String, Vec<ScanRow>)]) -> String {
    let mut s = String::from("lambda,g,det_sign,n_neg,sector\n");
    for (name, rs) in rows {
        for r in rs {
            writeln!(
                s,
                "{},{},{},{},{name}",
                fmt17(r.lambda),
                fmt17(r.g),
                r.det_sign,
                r.n_neg
            )
            .unwrap();
        }
    }
    s
}

fn level_table(rows: &[LevelRow], s: &mut String) {
    writeln!(
        s,
        "{:>3} {:>3} {:>6} {:>22} {:>22} {:>11} {:>5}",
        "k", "l", "N", "lambda_closed", "lambda_numeric", "rel_err", "mult"
    )
    .unwrap();
    for r in rows {
        writeln!(
            s,
            "{:>3} {:>3} {:>6} {:>22.16} {:>22.16} {:>11.3e} {:>5}",
            r.k, r.l, r.n, r.closed, r.numeric, r.rel_err, r.multiplicity
        )
        .unwrap();
    }
}

pub fn validation_csv(v: &ValidationOutcome) -> String {
    let mut s = String::from("k,l,n,lambda_closed,lambda_numeric,rel_err,multiplicity\n");
    for r in &v.rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.k,
            r.l,
            r.n,
            fmt17(r.closed),
            fmt17(r.numeric),
            fmt17(r.rel_err),
            r.multiplicity
        )
        .unwrap();
    }
    s
}

pub fn validation_text(v: &ValidationOutcome) -> String {
    let mut s = String::new();
    level_table(&v.rows, &mut s);
    for (k, l, ok) in &v.verdicts {
        writeln!(s, "level ({k},{l}): {}", if *ok { "PASS" } else { "FAIL" }).unwrap();
    }
    for f in &v.failures {
        writeln!(s, "error: {f}").unwrap();
    }
    s
}

pub fn interval_table(intervals: &[Interval], s: &mut String) {
    writeln!(s, "  {:<18} {:>22} {:>22}  note", "criterion", "lo", "hi").unwrap();
    for iv in intervals {
        if iv.applicable {
            let note = iv.reason.as_deref().unwrap_or("");
            let line = format!("  {:<18} {:>22.16} {:>22.16}  {note}", iv.label, iv.lo, iv.hi);
            writeln!(s, "{}", line.trim_end()).unwrap();
        } else {
            writeln!(
                s,
                "  {:<18} {:>22} {:>22}  {}",
                iv.label,
                "-",
                "-",
                iv.reason.as_deref().unwrap_or("not applicable")
            )
            .unwrap();
        }
    }
}

/// `summary.txt`.
pub fn summary_text(out: &AnalyzeOutcome) -> String {
    let mut s = String::new();
    for sec in &out.sectors {
        writeln!(s, "== sector {} (N = {}, m = {}) ==", sec.name, sec.dim, sec.m).unwrap();
        if let Some(f) = &sec.failure {
            writeln!(s, "FAILURE ({}): {}", f.kind.as_str(), f.message).unwrap();
        }
        let Some(r) = &sec.report else {
            s.push('\n');
            continue;
        };
        writeln!(s, "damping: {}", r.damping.status()).unwrap();
        if let Some(nu) = r.nu {
            writeln!(s, "nu_minus = {:.16}   g = {:.3e}", nu.nu_minus, nu.g_minus).unwrap();
            writeln!(s, "nu_plus  = {:.16}   g = {:.3e}", nu.nu_plus, nu.g_plus).unwrap();
        }
        writeln!(s, "||V H0^(-1/2)|| = {:.10}", r.constants.s_norm).unwrap();
        interval_table(&r.intervals, &mut s);
        let minus = sec.records.iter().filter(|r| r.side == crate::eig::Side::Minus).count();
        writeln!(
            s,
            "eigenvalues in window: {} (minus zone {minus}, plus zone {})",
            sec.records.len(),
            sec.records.len() - minus
        )
        .unwrap();
        let failing = sec.semisimple.iter().filter(|c| !c.passes).count();
        writeln!(
            s,
            "semi-simple: {} of {} pass",
            sec.semisimple.len() - failing,
            sec.semisimple.len()
        )
        .unwrap();
        for e in &sec.extremal {
            writeln!(
                s,
                "extremal {} at {:.16}: simple = {}, eigenvector {} (min/max = {:.3e})",
                e.side.as_str(),
                e.lambda,
                e.simple,
                e.positivity.as_str(),
                e.min_ratio.unwrap_or(f64::NAN)
            )
            .unwrap();
        }
        if !sec.levels.is_empty() {
            writeln!(s, "closed-form comparison:").unwrap();
            level_table(&sec.levels, &mut s);
        }
        s.push('\n');
    }
    writeln!(s, "exit code {}", out.exit_code).unwrap();
    s
}
