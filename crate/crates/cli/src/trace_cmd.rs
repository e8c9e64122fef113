use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use fqhyper::curves::{trace_naive, CurveSpec, TraceError, TraceFormulas, TraceReport};
use fqhyper::Field;

use crate::output::to_json;
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceMethod {
    Naive,
    /// Formula through `3k² + a = 0` (q ≡ 1 mod 6).
    Thm1,
    /// Formula through a nonzero root of the cubic (q ≡ 1 mod 4).
    Thm2,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Decimal in [0, p) for prime fields, else e comma-separated base-p
    /// digits, lowest first ("2,1" is 2 + α).
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, value_enum, default_value = "all")]
    method: TraceMethod,
    #[arg(long, value_enum, default_value = "text")]
    format: TraceFormat,
}

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct MethodView {
    method: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    raw: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_to_integer: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    imag_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    auxiliary: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    root_traces: Vec<(String, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots_agree: Option<bool>,
    /// Same formula reached through the shifted curve.
    #[serde(skip_serializing_if = "Option::is_none")]
    shift_trace: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hasse_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

#[derive(Serialize)]
struct TraceView {
    q: u32,
    p: u32,
    e: u32,
    a: String,
    b: String,
    singular: bool,
    reports: Vec<MethodView>,
    agreement: bool,
}

impl MethodView {
    fn ok(field: &Field, r: &TraceReport, shift: Option<&Result<TraceReport, TraceError>>) -> Self {
        let formula = shift.is_some();
        MethodView {
            method: r.method.name(),
            status: "ok",
            trace: Some(r.trace),
            raw: Some(Complex {
                re: r.raw.re,
                im: r.raw.im,
            }),
            residual_to_integer: Some(r.residual_to_integer),
            imag_residual: Some(r.imag_residual),
            auxiliary: r.auxiliary.map(|x| field.encode(x)),
            root_traces: r
                .root_traces
                .iter()
                .map(|&(x, t)| (field.encode(x), t))
                .collect(),
            roots_agree: formula.then(|| r.roots_agree()),
            shift_trace: shift.and_then(|s| s.as_ref().ok()).map(|s| s.trace),
            hasse_ok: Some(r.within_hasse(field.q())),
            reason: None,
            message: None,
        }
    }

    fn failed(name: &'static str, err: &TraceError, status: &'static str) -> Self {
        MethodView {
            method: name,
            status,
            trace: None,
            raw: None,
            residual_to_integer: None,
            imag_residual: None,
            auxiliary: None,
            root_traces: Vec::new(),
            roots_agree: None,
            shift_trace: None,
            hasse_ok: None,
            reason: Some(err.code()),
            message: Some(err.to_string()),
        }
    }
}

pub fn run(args: &TraceArgs) -> Result<Outcome> {
    let field = Field::new(args.p, args.e)?;
    let a = field
        .parse(&args.a)
        .map_err(|e| anyhow!("--a {:?}: {e}", args.a))?;
    let b = field
        .parse(&args.b)
        .map_err(|e| anyhow!("--b {:?}: {e}", args.b))?;
    let curve = CurveSpec::Short { a, b };
    let naive = trace_naive(&field, &curve);
    let formulas = TraceFormulas::new(&field);

    let mut reports = Vec::new();
    let mut agreement = true;
    let mut mismatch = false;
    if matches!(args.method, TraceMethod::Naive | TraceMethod::All) {
        reports.push(MethodView::ok(&field, &naive, None));
    }

    let single = args.method != TraceMethod::All;
    let mut wanted: Vec<(&'static str, bool)> = Vec::new();
    if matches!(args.method, TraceMethod::Thm1 | TraceMethod::All) {
        wanted.push(("thm_1_1", true));
    }
    if matches!(args.method, TraceMethod::Thm2 | TraceMethod::All) {
        wanted.push(("thm_1_2", false));
    }
    for (name, first) in wanted {
        let (direct, shift) = if first {
            (formulas.thm_1_1(a, b), formulas.thm_1_1_via_shift(a, b))
        } else {
            (formulas.thm_1_2(a, b), formulas.thm_1_2_via_shift(a, b))
        };
        match direct {
            Ok(r) => {
                let ok = r.trace == naive.trace
                    && r.roots_agree()
                    && matches!(&shift, Ok(s) if s.trace == r.trace);
                agreement &= ok;
                mismatch |= !ok;
                reports.push(MethodView::ok(&field, &r, Some(&shift)));
            }
            Err(err @ TraceError::PrecisionFailure { .. }) => {
                agreement = false;
                mismatch = true;
                reports.push(MethodView::failed(name, &err, "failed"));
            }
            Err(err) => {
                if single {
                    bail!("{name} does not apply ({}): {err}", err.code());
                }
                reports.push(MethodView::failed(name, &err, "skipped"));
            }
        }
    }

    let view = TraceView {
        q: field.q(),
        p: field.p(),
        e: field.e(),
        a: field.encode(a),
        b: field.encode(b),
        singular: naive.singular,
        reports,
        agreement,
    };
    match args.format {
        TraceFormat::Json => print!("{}", to_json(&view)?),
        TraceFormat::Text => print!("{}", render_text(&view)),
    }
    Ok(if mismatch {
        Outcome::Mismatch
    } else {
        Outcome::Pass
    })
}

fn render_text(v: &TraceView) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "y^2 = x^3 + ({})x + ({}) over F_{}{}",
        v.a,
        v.b,
        v.q,
        if v.singular { " (singular)" } else { "" }
    );
    for r in &v.reports {
        match r.trace {
            Some(t) => {
                let _ = write!(out, "{:<8} a_q = {t}", r.method);
                if let Some(res) = r.residual_to_integer {
                    if r.method != "naive" {
                        let _ = write!(out, "  residual {res:.2e}");
                    }
                }
                if let Some(aux) = &r.auxiliary {
                    let _ = write!(out, "  root {aux}");
                }
                if let Some(s) = r.shift_trace {
                    let _ = write!(out, "  shift {s}");
                }
                if r.roots_agree == Some(false) {
                    let _ = write!(out, "  ROOTS DISAGREE");
                }
                out.push('\n');
            }
            None => {
                let _ = writeln!(
                    out,
                    "{:<8} {} ({})",
                    r.method,
                    r.status,
                    r.reason.unwrap_or("-")
                );
            }
        }
    }
    let _ = writeln!(out, "agreement: {}", v.agreement);
    out
}
