use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use fqhyper::bench::BenchReport;
use fqhyper::identities::IdentityReport;
use fqhyper::verify::{CaseRecord, RunReport, Status};

use crate::OUT_DIR_ENV;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `--output`, else to `$FQHYPER_OUT_DIR/<stem>.<ext>`, else stdout.
pub fn emit(text: &str, output: Option<&Path>, stem: &str, format: Format) -> Result<()> {
    let target: Option<PathBuf> = match output {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(|dir| PathBuf::from(dir).join(format!("{stem}.{}", format.extension()))),
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn records_csv(records: &[CaseRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".into(), T::to_string)
}

pub fn verify_text(report: &RunReport) -> String {
    let s = &report.summary;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "fields {} (expected {}, coverage {})",
        s.fields_visited,
        s.fields_expected,
        if s.coverage_ok { "ok" } else { "MISMATCH" }
    );
    for (thm, t) in &s.per_theorem {
        let _ = writeln!(
            out,
            "theorem {thm}: {} cases over {} fields, {} passed, {} failed",
            t.cases, t.fields, t.passed, t.failed
        );
    }
    let _ = writeln!(
        out,
        "total: {} cases, {} passed, {} failed, {} skipped, {} informational",
        s.cases, s.passed, s.failed, s.skipped, s.informational
    );
    let _ = writeln!(out, "max residual to integer: {:.3e}", s.max_residual_to_integer);
    for (reason, n) in &s.rejected_by_reason {
        let _ = writeln!(out, "rejected {reason}: {n}");
    }
    for (reason, n) in &s.skipped_by_reason {
        let _ = writeln!(out, "skipped {reason}: {n}");
    }
    if let Some(ms) = s.elapsed_ms {
        let _ = writeln!(out, "elapsed: {ms} ms");
    }
    for r in report.records.iter().filter(|r| r.status == Status::Fail) {
        let _ = writeln!(
            out,
            "FAIL q={} theorem {} {} formula={} naive={} reason={}",
            r.q,
            r.theorem.label(),
            r.coefficients,
            opt(&r.trace_formula),
            opt(&r.trace_naive),
            r.reason.unwrap_or("-")
        );
    }
    out
}

pub fn identities_text(report: &IdentityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} fields with q <= {}",
        report.fields.len(),
        report.q_max
    );
    for (kind, s) in &report.kinds {
        let name = serde_json::to_value(kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<18} checks {:>9}  failures {:>4}  worst residual/tolerance {:.3e}",
            name, s.checks, s.failures, s.worst_ratio
        );
    }
    for f in &report.failures {
        let _ = writeln!(
            out,
            "FAIL q={} {:?} {} residual {:.3e} > {:.3e}",
            f.q, f.kind, f.params, f.residual, f.tolerance
        );
    }
    out
}

pub fn failures_csv(report: &IdentityReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for f in &report.failures {
        w.serialize(f)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn bench_text(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Gauss-sum tables (best of {}, single thread)", report.reps);
    let _ = writeln!(out, "{:>8} {:>12} {:>12} {:>9}", "q", "direct ms", "dft ms", "speedup");
    for row in &report.gauss {
        let _ = writeln!(
            out,
            "{:>8} {:>12.3} {:>12.3} {:>9.1}",
            row.q, row.direct_ms, row.dft_ms, row.speedup
        );
    }
    let _ = writeln!(
        out,
        "crossover: {}",
        report
            .crossover_q
            .map_or("none in range".to_string(), |q| format!("q = {q}"))
    );
    match &report.trace {
        Some(t) => {
            let _ = writeln!(
                out,
                "trace at q = {} ({} {}): naive {:.3} ms, formula {:.3} ms cached, {:.3} ms cold",
                t.q, t.method, t.curve, t.naive_ms, t.formula_ms, t.formula_cold_ms
            );
        }
        None => {
            let _ = writeln!(out, "trace: no formula applies at this q");
        }
    }
    out
}

pub fn bench_csv(report: &BenchReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.gauss {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
