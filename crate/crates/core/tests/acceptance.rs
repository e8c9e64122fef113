//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fqhyper::bench::run_bench;
use fqhyper::char_sums::{gauss_sum_table_with, jacobi_sum, jacobi_sum_direct, GaussMethod};
use fqhyper::characters::CharIndex;
use fqhyper::curves::TraceFormulas;
use fqhyper::field::prime_power;
use fqhyper::identities::run_identities;
use fqhyper::verify::{
    run_verify, sweep_fields, CaseRecord, Congruence, RunReport, Sampling, Status, Theorem,
    VerifyConfig,
};
use fqhyper::{gauss_sums, trace_naive, CurveSpec, Exec, Field};

const SEED: u64 = 20240611;
const RESIDUAL_TOL: f64 = 1e-4;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const GAUSS_TABLE_TOL: f64 = 1e-9;
const GAUSS_NORM_TOL: f64 = 1e-7;
const JACOBI_TOL: f64 = 1e-8;
const MIN_SPEEDUP: f64 = 5.0;
const PERF_Q: u32 = 10007;

type Verdict = Result<String, String>;

fn field_of(q: u32) -> Field {
    let (p, e) = prime_power(q as u64).expect("prime power");
    Field::new(p, e).expect("field")
}

fn sweep(theorems: &[Theorem], congruence: Congruence, q_min: u32) -> (RunReport, Duration) {
    let mut cfg = VerifyConfig::new(
        q_min,
        500,
        congruence,
        Sampling::Auto {
            exhaustive_max_q: 49,
            samples: 200,
            seed: SEED,
        },
    );
    cfg.theorems = theorems.to_vec();
    let start = Instant::now();
    let report = run_verify(&cfg, Exec::default()).expect("valid config");
    (report, start.elapsed())
}

/// Checks shared by every sweep criterion, recomputed from the records.
fn check_sweep(
    report: &RunReport,
    elapsed: Duration,
    required: &[u32],
    internal: bool,
) -> Verdict {
    let s = &report.summary;
    if !s.coverage_ok {
        return Err(format!(
            "visited {} fields, expected {}",
            s.fields_visited, s.fields_expected
        ));
    }
    if s.failed != 0 || s.cases == 0 {
        return Err(format!("{} of {} cases failed", s.failed, s.cases));
    }
    let mut per_q: BTreeMap<u32, usize> = BTreeMap::new();
    let mut worst = 0.0f64;
    for r in report.records.iter().filter(|r| r.status == Status::Pass) {
        *per_q.entry(r.q).or_default() += 1;
        let res = r.residual_to_integer.unwrap_or(f64::INFINITY);
        worst = worst.max(res);
        if !agrees(r, internal) || !(res < RESIDUAL_TOL) {
            return Err(format!("q={} {} disagrees: {r:?}", r.q, r.coefficients));
        }
    }
    for q in required {
        if !per_q.contains_key(q) {
            return Err(format!("q={q} was not exercised"));
        }
    }
    if let Some((q, n)) = per_q.iter().find(|(&q, &n)| q > 49 && n < 200) {
        return Err(format!("only {n} samples at q={q}"));
    }
    if elapsed > SWEEP_BUDGET {
        return Err(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "{} cases over {} fields, max residual {:.1e}, {:.1}s",
        s.cases,
        per_q.len(),
        worst,
        elapsed.as_secs_f64()
    ))
}

fn agrees(r: &CaseRecord, internal: bool) -> bool {
    let base = r.trace_formula.is_some()
        && r.trace_formula == r.trace_naive
        && r.hasse_ok == Some(true);
    if internal {
        base && r.roots_agree == Some(true) && r.trace_shift == r.trace_formula
    } else {
        base
    }
}

fn criterion_sextic_sweep() -> Verdict {
    let (report, elapsed) = sweep(&[Theorem::T31], Congruence::Mod6, 7);
    check_sweep(&report, elapsed, &[25, 49, 121, 169, 343, 361], false)
}

fn criterion_quartic_sweep() -> Verdict {
    let (report, elapsed) = sweep(&[Theorem::T32], Congruence::Mod4, 5);
    check_sweep(&report, elapsed, &[25, 49, 81, 169], false)
}

fn criterion_short_sweeps() -> Verdict {
    let (r11, t11) = sweep(&[Theorem::T11], Congruence::Mod6, 7);
    let first = check_sweep(&r11, t11, &[25, 49, 121, 169, 361], true)?;
    let (r12, t12) = sweep(&[Theorem::T12], Congruence::Mod4, 5);
    let second = check_sweep(&r12, t12, &[25, 49, 169], true)?;
    let char3 = r12
        .records
        .iter()
        .filter(|r| r.p == 3 && r.status == Status::Skip)
        .count();
    Ok(format!("k-roots: {first}; h-roots: {second}; {char3} characteristic-3 fields skipped"))
}

fn criterion_identities() -> Verdict {
    let report = run_identities(200, Exec::default()).map_err(|e| e.to_string())?;
    let checks: u64 = report.kinds.values().map(|k| k.checks).sum();
    if !report.all_passed() {
        let f = &report.failures[0];
        return Err(format!(
            "{} failures, first q={} {:?} {}",
            report.failures.len(),
            f.q,
            f.kind,
            f.params
        ));
    }
    if report.kinds.len() != 8 {
        return Err(format!("only {} identity kinds ran", report.kinds.len()));
    }
    let worst = report
        .kinds
        .values()
        .map(|k| k.worst_ratio)
        .fold(0.0, f64::max);
    Ok(format!(
        "{checks} checks over {} fields, worst residual/tolerance {worst:.1e}",
        report.fields.len()
    ))
}

fn criterion_gauss_tables() -> Verdict {
    let fields = sweep_fields(5, 1000, Congruence::All);
    let bad = Exec::default().map(fields.clone(), |(q, _, _)| -> Option<String> {
        let f = field_of(q);
        let direct = gauss_sum_table_with(&f, GaussMethod::Direct, Exec::Sequential);
        let dft = gauss_sum_table_with(&f, GaussMethod::Dft, Exec::Sequential);
        let qf = q as f64;
        let table_tol = GAUSS_TABLE_TOL * qf.sqrt();
        for (m, (a, b)) in direct.values().iter().zip(dft.values()).enumerate() {
            if (a - b).norm() >= table_tol {
                return Some(format!("q={q} m={m}: |direct - dft| = {:.2e}", (a - b).norm()));
            }
            for g in [a, b] {
                let err = if m == 0 {
                    (g + 1.0).norm()
                } else {
                    (g.norm_sqr() - qf).abs()
                };
                if err >= GAUSS_NORM_TOL * qf {
                    return Some(format!("q={q} m={m}: norm check off by {err:.2e}"));
                }
            }
        }
        None
    });
    match bad.into_iter().flatten().next() {
        Some(msg) => Err(msg),
        None => Ok(format!("{} fields with q <= 1000", fields.len())),
    }
}

fn criterion_jacobi() -> Verdict {
    let fields = sweep_fields(5, 49, Congruence::All);
    let mut pairs = 0u64;
    for &(q, _, _) in &fields {
        let f = field_of(q);
        let n = f.group_order() as i64;
        let tol = JACOBI_TOL * (q as f64).sqrt();
        for a in 0..n {
            for b in 0..n {
                let (a, b) = (CharIndex::new(&f, a), CharIndex::new(&f, b));
                let diff = (jacobi_sum(&f, a, b) - jacobi_sum_direct(&f, a, b)).norm();
                if diff >= tol {
                    return Err(format!("q={q} J({a}, {b}) off by {diff:.2e}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} character pairs over {} fields", fields.len()))
}

fn criterion_invariance() -> Verdict {
    let fields = sweep_fields(5, 100, Congruence::All);
    let results = Exec::default().map(fields.clone(), |(q, p, e)| -> Result<(u64, u64), String> {
        let base = Field::new(p as u64, e).map_err(|e| e.to_string())?;
        let gens = base.primitive_elements();
        let alt_gen = *gens.last().unwrap();
        if alt_gen == base.generator() {
            return Err(format!("q={q} has a single generator"));
        }
        let alt = Field::with_generator(p as u64, e, alt_gen.index()).map_err(|e| e.to_string())?;
        let (t0, t1) = (TraceFormulas::new(&base), TraceFormulas::new(&alt));
        let (mut compared, mut hasse) = (0u64, 0u64);
        for u in base.elements() {
            for v in base.elements() {
                let short = trace_naive(&base, &CurveSpec::Short { a: u, b: v });
                if !short.singular {
                    if !short.within_hasse(q) {
                        return Err(format!("q={q} a={u} b={v}: |a_q| = {} exceeds Hasse", short.trace));
                    }
                    hasse += 1;
                }
                let pairs = [
                    (t0.thm_3_1(u, v), t1.thm_3_1(u, v)),
                    (t0.thm_3_2(u, v), t1.thm_3_2(u, v)),
                    (t0.thm_1_1(u, v), t1.thm_1_1(u, v)),
                    (t0.thm_1_2(u, v), t1.thm_1_2(u, v)),
                ];
                for (x, y) in pairs {
                    match (x, y) {
                        (Ok(x), Ok(y)) => {
                            if x.trace != y.trace || !x.within_hasse(q) {
                                return Err(format!(
                                    "q={q} ({u}, {v}) {}: {} vs {}",
                                    x.method.name(),
                                    x.trace,
                                    y.trace
                                ));
                            }
                            compared += 1;
                        }
                        (Err(x), Err(y)) if x.code() == y.code() => {}
                        (x, y) => {
                            return Err(format!("q={q} ({u}, {v}): {:?} vs {:?}", x.map(|r| r.trace), y.map(|r| r.trace)));
                        }
                    }
                }
            }
        }
        Ok((compared, hasse))
    });
    let (mut compared, mut hasse) = (0, 0);
    for r in results {
        let (c, h) = r?;
        compared += c;
        hasse += h;
    }
    Ok(format!(
        "{compared} formula traces equal under two generators over {} fields; {hasse} curves within Hasse",
        fields.len()
    ))
}

fn criterion_performance() -> Verdict {
    let report = run_bench(PERF_Q, 2).map_err(|e| e.to_string())?;
    let top = report.gauss.last().ok_or("empty bench table")?;
    if top.q != PERF_Q || top.speedup < MIN_SPEEDUP {
        return Err(format!("speedup {:.1}x at q={}", top.speedup, top.q));
    }
    let trace = report.trace.as_ref().ok_or("no trace timing")?;
    if trace.formula_ms >= 1000.0 {
        return Err(format!("formula trace took {:.1} ms", trace.formula_ms));
    }
    let crossover = report.crossover_q.ok_or("no crossover in table")?;

    let f = field_of(trace.q);
    let start = Instant::now();
    gauss_sums(&f);
    let cold = start.elapsed();
    Ok(format!(
        "dft {:.1}x faster at q={}; formula trace {:.2} ms cached ({:.1} ms table build) at q={}; crossover q={crossover} over {} rows",
        top.speedup,
        top.q,
        trace.formula_ms,
        cold.as_secs_f64() * 1e3,
        trace.q,
        report.gauss.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 sextic-family sweep", criterion_sextic_sweep),
        ("2 quartic-family sweep", criterion_quartic_sweep),
        ("3 short-Weierstrass sweeps", criterion_short_sweeps),
        ("4 identity suite", criterion_identities),
        ("5 Gauss-table equivalence", criterion_gauss_tables),
        ("6 Jacobi factorization", criterion_jacobi),
        ("7 generator invariance and Hasse", criterion_invariance),
        ("8 performance", criterion_performance),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
