//! Wall-clock comparisons: direct vs transform Gauss tables, naive vs
//! formula traces.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::char_sums::{gauss_sum_table_with, gauss_sums, GaussMethod};
use crate::curves::{trace_naive, CurveSpec, TraceFormulas};
use crate::exec::Exec;
use crate::field::{is_prime, prime_power, Elem, Field, FieldError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussTiming {
    pub q: u32,
    pub direct_ms: f64,
    pub dft_ms: f64,
    pub speedup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceTiming {
    pub q: u32,
    pub method: &'static str,
    pub curve: String,
    pub naive_ms: f64,
    /// One formula trace with the Gauss table and kernel already cached.
    pub formula_ms: f64,
    /// Including Gauss-table and kernel construction.
    pub formula_cold_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub reps: u32,
    pub gauss: Vec<GaussTiming>,
    /// Smallest benchmarked `q` where the transform beats the direct sum.
    pub crossover_q: Option<u32>,
    pub trace: Option<TraceTiming>,
}

fn best_of<T>(reps: u32, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = Duration::MAX;
    let mut last = None;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let v = f();
        best = best.min(t.elapsed());
        last = Some(v);
    }
    (best, last.unwrap())
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Times both Gauss-table methods (single-threaded) at `q`.
pub fn time_gauss_tables(field: &Field, reps: u32) -> GaussTiming {
    let (direct, _) = best_of(reps, || {
        gauss_sum_table_with(field, GaussMethod::Direct, Exec::Sequential)
    });
    let (dft, _) = best_of(reps, || {
        gauss_sum_table_with(field, GaussMethod::Dft, Exec::Sequential)
    });
    GaussTiming {
        q: field.q(),
        direct_ms: ms(direct),
        dft_ms: ms(dft),
        speedup: direct.as_secs_f64() / dft.as_secs_f64().max(1e-12),
    }
}

/// Primes just above each power of two from 16, followed by `q` itself.
pub fn ladder(q: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut target = 16u32;
    while target < q {
        let p = (target..).find(|&n| is_prime(n as u64)).unwrap();
        if p < q {
            out.push(p);
        }
        target *= 2;
    }
    out.push(q);
    out
}

/// Times a naive and a formula trace on the first applicable curve at `q`.
pub fn time_trace(field: &Field, reps: u32) -> Option<TraceTiming> {
    let q = field.q();
    let pick = |ok: &dyn Fn(Elem, Elem) -> bool| {
        field
            .nonzero()
            .flat_map(|u| field.nonzero().map(move |v| (u, v)))
            .find(|&(u, v)| ok(u, v))
    };
    let (method, curve) = if q % 6 == 1 {
        let (c, d) = pick(&|c, d| !(CurveSpec::E1 { c, d }).is_singular(field))?;
        ("thm_3_1", CurveSpec::E1 { c, d })
    } else if q % 4 == 1 {
        let (f, g) = pick(&|f, g| !(CurveSpec::E2 { f, g }).is_singular(field))?;
        ("thm_3_2", CurveSpec::E2 { f, g })
    } else {
        return None;
    };
    let eval = |formulas: &TraceFormulas<'_>| match curve {
        CurveSpec::E1 { c, d } => formulas.thm_3_1(c, d),
        CurveSpec::E2 { f, g } => formulas.thm_3_2(f, g),
        _ => unreachable!(),
    };

    let (cold, _) = best_of(1, || {
        let fresh = Field::new(field.p() as u64, field.e()).expect("field rebuilds");
        let formulas = TraceFormulas::new(&fresh);
        eval(&formulas).map(|r| r.trace)
    });
    gauss_sums(field);
    let formulas = TraceFormulas::new(field);
    eval(&formulas).ok()?;
    let (warm, _) = best_of(reps, || eval(&formulas).map(|r| r.trace));
    let (naive, _) = best_of(reps, || trace_naive(field, &curve).trace);
    let coeffs = curve
        .coefficients()
        .iter()
        .map(|(n, x)| format!("{n}={}", field.encode(*x)))
        .collect::<Vec<_>>()
        .join(";");
    Some(TraceTiming {
        q,
        method,
        curve: coeffs,
        naive_ms: ms(naive),
        formula_ms: ms(warm),
        formula_cold_ms: ms(cold),
    })
}

/// Smallest prime power `≥ q` where a formula trace applies.
fn trace_field_near(q: u32) -> (u64, u32) {
    (q..)
        .filter(|n| n % 6 == 1 || n % 4 == 1)
        .find_map(|n| prime_power(n as u64))
        .expect("prime powers are unbounded")
}

/// The trace timing uses `q`, or the next prime power admitting a formula.
pub fn run_bench(q: u32, reps: u32) -> Result<BenchReport, FieldError> {
    let (p, e) = prime_power(q as u64).ok_or(FieldError::NotPrimePower(q as u64))?;
    let mut gauss = Vec::new();
    for n in ladder(q) {
        let (lp, le) = prime_power(n as u64).expect("ladder holds prime powers");
        let field = Field::new(lp, le)?;
        gauss.push(time_gauss_tables(&field, reps));
    }
    let crossover_q = gauss.iter().find(|t| t.speedup > 1.0).map(|t| t.q);
    let (p, e) = if q % 6 == 1 || q % 4 == 1 {
        (p, e)
    } else {
        trace_field_near(q)
    };
    let field = Field::new(p, e)?;
    Ok(BenchReport {
        reps,
        trace: time_trace(&field, reps),
        gauss,
        crossover_q,
    })
}
