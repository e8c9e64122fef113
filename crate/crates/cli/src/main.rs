//! `fqhyper`: trace computation, sweep verification, identity suites and
//! benchmarks.
//!
//! Exit codes: 0 when everything requested passed, 1 on any identity or
//! trace mismatch, 2 on invalid input or an inapplicable single computation.

mod output;
mod trace_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fqhyper::bench::run_bench;
use fqhyper::identities::run_identities;
use fqhyper::verify::{
    run_verify, Congruence, RecordFilter, Sampling, Theorem, Tolerances, VerifyConfig,
};
use fqhyper::Exec;

use output::{emit, Format};

/// Environment variable naming the default directory for report files.
pub const OUT_DIR_ENV: &str = "FQHYPER_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "fqhyper", version, about = "Finite-field hypergeometric traces of Frobenius")]
struct Cli {
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace of Frobenius of y^2 = x^3 + ax + b by counting and by formula.
    Trace(trace_cmd::TraceArgs),
    /// Sweep the trace formulas against point counting.
    Verify(VerifyArgs),
    /// Check the character-sum identities for every prime power q <= q-max.
    Identities(IdentitiesArgs),
    /// Time direct vs transform Gauss tables and naive vs formula traces.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CongruenceArg {
    Mod6,
    Mod4,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SamplingArg {
    Exhaustive,
    Random,
    /// Exhaustive up to --exhaustive-max-q, random above.
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RecordsArg {
    All,
    NonPass,
    None,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    q_min: u32,
    #[arg(long)]
    q_max: u32,
    #[arg(long, value_enum, default_value = "both")]
    congruence: CongruenceArg,
    /// Comma-separated subset of 1.1,1.2,3.1,3.2 (default: all for the class).
    #[arg(long, value_delimiter = ',')]
    theorems: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    sampling: SamplingArg,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Required for random and auto sampling.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 49)]
    exhaustive_max_q: u32,
    /// Bound on the pre-rounding residual of a formula trace.
    #[arg(long, default_value_t = 1e-4)]
    residual_tol: f64,
    #[arg(long, value_enum, default_value = "all")]
    records: RecordsArg,
    /// Add elapsed time to the summary (breaks byte-stable output).
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    #[arg(long, default_value_t = 200)]
    q_max: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 10007)]
    q: u32,
    #[arg(long, default_value_t = 3)]
    reps: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure kinds mapped onto exit codes.
pub enum Outcome {
    Pass,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let result = match cli.command {
        Command::Trace(args) => trace_cmd::run(&args),
        Command::Verify(args) => verify(&args, exec),
        Command::Identities(args) => identities(&args, exec),
        Command::Bench(args) => bench(&args),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn verify_config(args: &VerifyArgs) -> Result<VerifyConfig> {
    let congruence = match args.congruence {
        CongruenceArg::Mod6 => Congruence::Mod6,
        CongruenceArg::Mod4 => Congruence::Mod4,
        CongruenceArg::Both => Congruence::Both,
    };
    let seed = || {
        args.seed
            .context("random sampling requires an explicit --seed")
    };
    let sampling = match args.sampling {
        SamplingArg::Exhaustive => Sampling::Exhaustive,
        SamplingArg::Random => Sampling::Random {
            samples: args.samples,
            seed: seed()?,
        },
        SamplingArg::Auto => Sampling::Auto {
            exhaustive_max_q: args.exhaustive_max_q,
            samples: args.samples,
            seed: seed()?,
        },
    };
    let mut config = VerifyConfig::new(args.q_min, args.q_max, congruence, sampling);
    if let Some(list) = &args.theorems {
        config.theorems = list
            .iter()
            .map(|s| Theorem::parse(s).with_context(|| format!("unknown theorem {s:?}")))
            .collect::<Result<_>>()?;
    }
    if !(args.residual_tol > 0.0) {
        bail!("--residual-tol must be positive");
    }
    config.tolerances = Tolerances {
        residual: args.residual_tol,
    };
    config.records = match args.records {
        RecordsArg::All => RecordFilter::All,
        RecordsArg::NonPass => RecordFilter::NonPass,
        RecordsArg::None => RecordFilter::None,
    };
    config.timings = args.timings;
    config.validate()?;
    Ok(config)
}

fn verify(args: &VerifyArgs, exec: Exec) -> Result<Outcome> {
    let config = verify_config(args)?;
    let report = run_verify(&config, exec)?;
    let text = match args.format {
        Format::Text => output::verify_text(&report),
        Format::Json => output::to_json(&report)?,
        Format::Csv => output::records_csv(&report.records)?,
    };
    emit(&text, args.output.as_deref(), "verify", args.format)?;
    Ok(if report.all_passed() {
        Outcome::Pass
    } else {
        Outcome::Mismatch
    })
}

fn identities(args: &IdentitiesArgs, exec: Exec) -> Result<Outcome> {
    if args.q_max < 5 {
        bail!("--q-max must be at least 5");
    }
    if args.q_max as u64 > fqhyper::field::DEFAULT_MAX_ORDER {
        bail!("--q-max exceeds the field size bound");
    }
    let report = run_identities(args.q_max, exec)?;
    let text = match args.format {
        Format::Text => output::identities_text(&report),
        Format::Json => output::to_json(&report)?,
        Format::Csv => output::failures_csv(&report)?,
    };
    emit(&text, args.output.as_deref(), "identities", args.format)?;
    Ok(if report.all_passed() {
        Outcome::Pass
    } else {
        Outcome::Mismatch
    })
}

fn bench(args: &BenchArgs) -> Result<Outcome> {
    let report = run_bench(args.q, args.reps)?;
    let text = match args.format {
        Format::Text => output::bench_text(&report),
        Format::Json => output::to_json(&report)?,
        Format::Csv => output::bench_csv(&report)?,
    };
    emit(&text, args.output.as_deref(), "bench", args.format)?;
    Ok(Outcome::Pass)
}
