//! Sweep verification of the trace formulas against point counting.
//!
//! A sweep visits every prime power in `[q_min, q_max]` of the requested
//! congruence class, runs each selected theorem on exhaustive or seeded
//! random coefficient pairs, and compares the rounded formula trace with
//! the enumeration trace. Inputs outside a theorem's hypotheses are tallied
//! as rejections by reason; whole fields a theorem cannot treat produce one
//! skip record.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::curves::{trace_naive, CurveSpec, TraceError, TraceFormulas, TraceReport};
use crate::exec::Exec;
use crate::field::{is_prime, prime_power, Elem, Field, FieldError, DEFAULT_MAX_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Congruence {
    Mod6,
    Mod4,
    Both,
    /// Every odd prime power.
    All,
}

impl Congruence {
    pub fn admits(self, q: u32) -> bool {
        match self {
            Congruence::Mod6 => q % 6 == 1,
            Congruence::Mod4 => q % 4 == 1,
            Congruence::Both => q % 6 == 1 || q % 4 == 1,
            Congruence::All => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    #[serde(rename = "1.1")]
    T11,
    #[serde(rename = "1.2")]
    T12,
    #[serde(rename = "3.1")]
    T31,
    #[serde(rename = "3.2")]
    T32,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T11, Theorem::T12, Theorem::T31, Theorem::T32];

    pub fn label(self) -> &'static str {
        match self {
            Theorem::T11 => "1.1",
            Theorem::T12 => "1.2",
            Theorem::T31 => "3.1",
            Theorem::T32 => "3.2",
        }
    }

    pub fn parse(s: &str) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.label() == s.trim())
    }

    /// Modulus `m` of the `q ≡ 1 (mod m)` hypothesis.
    pub fn modulus(self) -> u32 {
        match self {
            Theorem::T11 | Theorem::T31 => 6,
            Theorem::T12 | Theorem::T32 => 4,
        }
    }

    fn index(self) -> u64 {
        self as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    Random { samples: usize, seed: u64 },
    /// Exhaustive up to `exhaustive_max_q`, random above.
    Auto {
        exhaustive_max_q: u32,
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on the distance of the formula value from its rounded trace.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { residual: 1e-4 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordFilter {
    #[default]
    All,
    /// Only failures, skips and informational records.
    NonPass,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub q_min: u32,
    pub q_max: u32,
    pub congruence: Congruence,
    pub theorems: Vec<Theorem>,
    pub sampling: Sampling,
    pub tolerances: Tolerances,
    pub records: RecordFilter,
    /// Include wall-clock timings; reports are then no longer byte-stable.
    pub timings: bool,
}

impl VerifyConfig {
    pub fn new(q_min: u32, q_max: u32, congruence: Congruence, sampling: Sampling) -> Self {
        let theorems = match congruence {
            Congruence::Mod6 => vec![Theorem::T11, Theorem::T31],
            Congruence::Mod4 => vec![Theorem::T12, Theorem::T32],
            Congruence::Both | Congruence::All => Theorem::ALL.to_vec(),
        };
        VerifyConfig {
            q_min,
            q_max,
            congruence,
            theorems,
            sampling,
            tolerances: Tolerances::default(),
            records: RecordFilter::All,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.q_min < 5 {
            return Err(ConfigError::QMinTooSmall(self.q_min));
        }
        if self.q_max < self.q_min {
            return Err(ConfigError::EmptyRange);
        }
        if self.q_max as u64 > DEFAULT_MAX_ORDER {
            return Err(ConfigError::QMaxTooLarge(self.q_max));
        }
        if self.theorems.is_empty() {
            return Err(ConfigError::NoTheorems);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("q_min must be at least 5, got {0}")]
    QMinTooSmall(u32),
    #[error("q_max must not be below q_min")]
    EmptyRange,
    #[error("q_max {0} exceeds the field size bound")]
    QMaxTooLarge(u32),
    #[error("no theorems selected")]
    NoTheorems,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Informational,
}

/// One flat record per case; CSV output is a projection of these fields.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub theorem: Theorem,
    pub shape: &'static str,
    /// `name=value` pairs joined by `;`, values in the element text encoding.
    pub coefficients: String,
    pub root: Option<String>,
    pub trace_formula: Option<i64>,
    pub trace_naive: Option<i64>,
    pub trace_shift: Option<i64>,
    pub roots_agree: Option<bool>,
    pub residual_to_integer: Option<f64>,
    pub imag_residual: Option<f64>,
    pub hasse_ok: Option<bool>,
    pub status: Status,
    pub reason: Option<&'static str>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub informational: u64,
    pub skipped_by_reason: BTreeMap<&'static str, u64>,
    /// Sampled or enumerated inputs outside a theorem's hypotheses.
    pub rejected_by_reason: BTreeMap<&'static str, u64>,
    pub per_theorem: BTreeMap<&'static str, TheoremSummary>,
    pub fields_visited: u64,
    pub fields_expected: u64,
    pub coverage_ok: bool,
    pub max_residual_to_integer: f64,
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub fields: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub config: VerifyConfig,
    pub summary: Summary,
    pub records: Vec<CaseRecord>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Prime powers in `[lo, hi]` admitted by `class`, listed by trial factoring.
pub fn sweep_fields(lo: u32, hi: u32, class: Congruence) -> Vec<(u32, u32, u32)> {
    (lo..=hi)
        .filter(|&q| class.admits(q))
        .filter_map(|q| prime_power(q as u64).map(|(p, e)| (q, p as u32, e)))
        .filter(|&(_, p, _)| p != 2)
        .collect()
}

/// Counts the same set by enumerating odd primes and their powers.
pub fn count_prime_powers(lo: u32, hi: u32, class: Congruence) -> u64 {
    let mut count = 0;
    for p in (3..=hi as u64).filter(|&p| is_prime(p)) {
        let mut q = p;
        while q <= hi as u64 {
            if q >= lo as u64 && class.admits(q as u32) {
                count += 1;
            }
            q *= p;
        }
    }
    count
}

struct FieldOutcome {
    records: Vec<CaseRecord>,
    rejected: BTreeMap<&'static str, u64>,
    theorems: Vec<Theorem>,
}

pub fn run_verify(config: &VerifyConfig, exec: Exec) -> Result<RunReport, ConfigError> {
    config.validate()?;
    let start = Instant::now();
    let fields = sweep_fields(config.q_min, config.q_max, config.congruence);
    let outcomes = exec.map(fields.clone(), |(_, p, e)| -> Result<FieldOutcome, FieldError> {
        let field = Field::new(p as u64, e)?;
        Ok(verify_field(&field, config, exec))
    });

    let mut summary = Summary {
        fields_visited: fields.len() as u64,
        fields_expected: count_prime_powers(config.q_min, config.q_max, config.congruence),
        ..Summary::default()
    };
    summary.coverage_ok = summary.fields_visited == summary.fields_expected;
    let mut records = Vec::new();
    for outcome in outcomes {
        let outcome = outcome?;
        for (reason, n) in outcome.rejected {
            *summary.rejected_by_reason.entry(reason).or_default() += n;
        }
        for t in outcome.theorems {
            summary.per_theorem.entry(t.label()).or_default().fields += 1;
        }
        for rec in outcome.records {
            let per = summary.per_theorem.entry(rec.theorem.label()).or_default();
            match rec.status {
                Status::Pass | Status::Fail => {
                    summary.cases += 1;
                    per.cases += 1;
                    if rec.status == Status::Pass {
                        summary.passed += 1;
                        per.passed += 1;
                    } else {
                        summary.failed += 1;
                        per.failed += 1;
                    }
                    if let Some(r) = rec.residual_to_integer {
                        summary.max_residual_to_integer = summary.max_residual_to_integer.max(r);
                    }
                }
                Status::Skip => {
                    summary.skipped += 1;
                    *summary
                        .skipped_by_reason
                        .entry(rec.reason.unwrap_or("unspecified"))
                        .or_default() += 1;
                }
                Status::Informational => summary.informational += 1,
            }
            let keep = match config.records {
                RecordFilter::All => true,
                RecordFilter::NonPass => rec.status != Status::Pass,
                RecordFilter::None => false,
            };
            if keep {
                records.push(rec);
            }
        }
    }
    if config.timings {
        summary.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        summary,
        records,
    })
}

fn verify_field(field: &Field, config: &VerifyConfig, exec: Exec) -> FieldOutcome {
    let q = field.q();
    let formulas = TraceFormulas::new(field);
    let mut theorems: Vec<Theorem> = config
        .theorems
        .iter()
        .copied()
        .filter(|t| q % t.modulus() == 1)
        .collect();
    theorems.sort();
    theorems.dedup();

    let mut out = FieldOutcome {
        records: Vec::new(),
        rejected: BTreeMap::new(),
        theorems: theorems.clone(),
    };
    for &thm in &theorems {
        if thm == Theorem::T12 && field.p() == 3 {
            if q == 9 {
                out.records.extend(q9_informational(field, exec));
            } else {
                out.records.push(field_skip(field, thm, TraceError::CharacteristicThree));
            }
            continue;
        }
        let pairs: Vec<(Elem, Elem)> = match config.sampling {
            Sampling::Exhaustive => all_pairs(field),
            Sampling::Auto {
                exhaustive_max_q, ..
            } if q <= exhaustive_max_q => all_pairs(field),
            Sampling::Random { samples, seed }
            | Sampling::Auto { samples, seed, .. } => {
                let (pairs, rejected) = sample_pairs(&formulas, thm, samples, seed);
                for (reason, n) in rejected {
                    *out.rejected.entry(reason).or_default() += n;
                }
                pairs
            }
        };
        let results = exec.map(pairs, |(u, v)| run_case(&formulas, thm, u, v, config));
        for r in results {
            match r {
                Ok(rec) => out.records.push(rec),
                Err(reason) => *out.rejected.entry(reason).or_default() += 1,
            }
        }
    }
    out
}

fn all_pairs(field: &Field) -> Vec<(Elem, Elem)> {
    field
        .elements()
        .flat_map(|u| field.elements().map(move |v| (u, v)))
        .collect()
}

fn mix(seed: u64, q: u32, thm: Theorem) -> u64 {
    // splitmix64 finaliser over (seed, q, theorem)
    let mut z = seed ^ ((q as u64) << 8 | thm.index()).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws coefficient pairs uniformly until `samples` satisfy the theorem's
/// hypotheses, counting rejections by reason.
fn sample_pairs(
    formulas: &TraceFormulas<'_>,
    thm: Theorem,
    samples: usize,
    seed: u64,
) -> (Vec<(Elem, Elem)>, BTreeMap<&'static str, u64>) {
    let field = formulas.field();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, field.q(), thm));
    let mut accepted = Vec::with_capacity(samples);
    let mut rejected = BTreeMap::new();
    let max_attempts = samples.saturating_mul(1000).max(1000);
    for _ in 0..max_attempts {
        if accepted.len() == samples {
            break;
        }
        let u = field.elem(rng.gen_range(0..field.q() as u64)).unwrap();
        let v = field.elem(rng.gen_range(0..field.q() as u64)).unwrap();
        match applicability(formulas, thm, u, v) {
            Ok(()) => accepted.push((u, v)),
            Err(e) => *rejected.entry(e.code()).or_default() += 1,
        }
    }
    (accepted, rejected)
}

fn applicability(
    formulas: &TraceFormulas<'_>,
    thm: Theorem,
    u: Elem,
    v: Elem,
) -> Result<(), TraceError> {
    let field = formulas.field();
    match thm {
        Theorem::T31 => {
            if u.is_zero() {
                Err(TraceError::ZeroC)
            } else if (CurveSpec::E1 { c: u, d: v }).is_singular(field) {
                Err(TraceError::Singular)
            } else {
                Ok(())
            }
        }
        Theorem::T32 => {
            if u.is_zero() {
                Err(TraceError::ZeroF)
            } else if (CurveSpec::E2 { f: u, g: v }).is_singular(field) {
                Err(TraceError::Singular)
            } else {
                Ok(())
            }
        }
        Theorem::T11 => formulas.thm_1_1_roots(u, v).map(|_| ()),
        Theorem::T12 => formulas.thm_1_2_roots(u, v).map(|_| ()),
    }
}

fn coefficient_text(field: &Field, curve: &CurveSpec) -> String {
    curve
        .coefficients()
        .iter()
        .map(|(name, x)| format!("{name}={}", field.encode(*x)))
        .collect::<Vec<_>>()
        .join(";")
}

fn base_record(field: &Field, thm: Theorem, curve: &CurveSpec) -> CaseRecord {
    CaseRecord {
        q: field.q(),
        p: field.p(),
        e: field.e(),
        theorem: thm,
        shape: curve.shape_name(),
        coefficients: coefficient_text(field, curve),
        root: None,
        trace_formula: None,
        trace_naive: None,
        trace_shift: None,
        roots_agree: None,
        residual_to_integer: None,
        imag_residual: None,
        hasse_ok: None,
        status: Status::Skip,
        reason: None,
    }
}

fn field_skip(field: &Field, thm: Theorem, reason: TraceError) -> CaseRecord {
    CaseRecord {
        q: field.q(),
        p: field.p(),
        e: field.e(),
        theorem: thm,
        shape: "short",
        coefficients: String::new(),
        root: None,
        trace_formula: None,
        trace_naive: None,
        trace_shift: None,
        roots_agree: None,
        residual_to_integer: None,
        imag_residual: None,
        hasse_ok: None,
        status: Status::Skip,
        reason: Some(reason.code()),
    }
}

/// `q = 9` under the short-Weierstrass `q ≡ 1 (mod 4)` formula: every
/// nonsingular curve with a nonzero root is reported with its naive trace.
/// The formula's `9h²` denominator vanishes, so no formula trace exists.
fn q9_informational(field: &Field, exec: Exec) -> Vec<CaseRecord> {
    let found = exec.map(all_pairs(field), |(a, b)| {
        let curve = CurveSpec::Short { a, b };
        let has_root = field.roots_of_cubic(a, b).iter().any(|h| !h.is_zero());
        if !has_root || curve.is_singular(field) {
            return None;
        }
        let naive = trace_naive(field, &curve);
        let mut rec = base_record(field, Theorem::T12, &curve);
        rec.trace_naive = Some(naive.trace);
        rec.hasse_ok = Some(naive.within_hasse(field.q()));
        rec.status = Status::Informational;
        rec.reason = Some(TraceError::ExcludedQ.code());
        Some(rec)
    });
    found.into_iter().flatten().collect()
}

fn formula_record(
    field: &Field,
    thm: Theorem,
    naive: &TraceReport,
    formula: &TraceReport,
    shift: Option<&TraceReport>,
    tol: &Tolerances,
) -> CaseRecord {
    let mut rec = base_record(field, thm, &naive.curve);
    rec.root = formula.auxiliary.map(|x| field.encode(x));
    rec.trace_formula = Some(formula.trace);
    rec.trace_naive = Some(naive.trace);
    rec.trace_shift = shift.map(|s| s.trace);
    rec.roots_agree = (!formula.root_traces.is_empty()).then(|| formula.roots_agree());
    rec.residual_to_integer = Some(formula.residual_to_integer);
    rec.imag_residual = Some(formula.imag_residual);
    let hasse = naive.within_hasse(field.q()) && formula.within_hasse(field.q());
    rec.hasse_ok = Some(hasse);
    let ok = formula.trace == naive.trace
        && formula.residual_to_integer < tol.residual
        && rec.roots_agree != Some(false)
        && shift.is_none_or(|s| s.trace == formula.trace)
        && hasse;
    if ok {
        rec.status = Status::Pass;
    } else {
        rec.status = Status::Fail;
        rec.reason = Some(if formula.trace != naive.trace {
            "trace_mismatch"
        } else if formula.residual_to_integer >= tol.residual {
            "residual_exceeded"
        } else if rec.roots_agree == Some(false) {
            "root_disagreement"
        } else if !hasse {
            "hasse_violation"
        } else {
            "shift_mismatch"
        });
    }
    rec
}

/// `Err(reason)` when `(u, v)` is outside the theorem's hypotheses.
fn run_case(
    formulas: &TraceFormulas<'_>,
    thm: Theorem,
    u: Elem,
    v: Elem,
    config: &VerifyConfig,
) -> Result<CaseRecord, &'static str> {
    let field = formulas.field();
    let (formula, shift) = match thm {
        Theorem::T31 => (formulas.thm_3_1(u, v), None),
        Theorem::T32 => (formulas.thm_3_2(u, v), None),
        Theorem::T11 => (formulas.thm_1_1(u, v), Some(formulas.thm_1_1_via_shift(u, v))),
        Theorem::T12 => (formulas.thm_1_2(u, v), Some(formulas.thm_1_2_via_shift(u, v))),
    };
    let curve = match thm {
        Theorem::T31 => CurveSpec::E1 { c: u, d: v },
        Theorem::T32 => CurveSpec::E2 { f: u, g: v },
        Theorem::T11 | Theorem::T12 => CurveSpec::Short { a: u, b: v },
    };
    let formula = match formula {
        Ok(r) => r,
        Err(e @ TraceError::PrecisionFailure { .. }) => {
            let naive = trace_naive(field, &curve);
            let mut rec = base_record(field, thm, &curve);
            rec.trace_naive = Some(naive.trace);
            rec.status = Status::Fail;
            rec.reason = Some(e.code());
            return Ok(rec);
        }
        Err(e) => return Err(e.code()),
    };
    let naive = trace_naive(field, &curve);
    let shift = match shift {
        Some(Ok(s)) => Some(s),
        Some(Err(e)) => {
            let mut rec = formula_record(field, thm, &naive, &formula, None, &config.tolerances);
            rec.status = Status::Fail;
            rec.reason = Some(e.code());
            return Ok(rec);
        }
        None => None,
    };
    Ok(formula_record(
        field,
        thm,
        &naive,
        &formula,
        shift.as_ref(),
        &config.tolerances,
    ))
}
