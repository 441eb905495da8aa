use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use vlike_core::identify::{identify, TRealization};
use vlike_core::lsmodule::{t_matrix, LsModuleSpec};
use vlike_core::sampling::{invertible_matrix, rng};
use vlike_core::{LatticeVector, Scalar};

use vlike::formats::{IdentificationDoc, MatrixJson, RealizationDoc};
use vlike::suites::{self, Suite, SuiteConfig};

/// Usage errors: unknown suite, bad flag, invalid budget.
const EXIT_USAGE: u8 = 64;
/// Input that was read but is not a valid document.
const EXIT_DATA: u8 = 65;
/// Input file that could not be read.
const EXIT_NO_INPUT: u8 = 66;

#[derive(Debug, Parser)]
#[command(name = "vlike", version, about = "Exact computations with Larsson-Shen modules over the Virasoro-like algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite and print its report as JSON.
    Verify(VerifyArgs),
    /// Print z^(-r) H(r) on the degree-zero slice of M^alpha(lambda).
    Tmatrix(TmatrixArgs),
    /// Recover (alpha, lambda) from a realization of T.
    Identify(IdentifyArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name; see --list.
    #[arg(value_enum)]
    suite: Option<Suite>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 6)]
    max_lambda: u32,
    #[arg(long, default_value_t = 6)]
    max_k: usize,
    #[arg(long, default_value_t = 2)]
    range: i64,
    /// List suites with the identity each one checks.
    #[arg(long, conflicts_with = "replay")]
    list: bool,
    /// Re-run the witnesses of a saved report, failure record or case.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TmatrixArgs {
    #[arg(long, default_value_t = 0)]
    lambda: u32,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,0")]
    alpha: [Scalar; 2],
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    r: LatticeVector,
}

#[derive(Debug, Args)]
struct IdentifyArgs {
    /// Realization document `{"dim": n, "samples": [{"r": [r1, r2], "matrix": [[...]]}]}`.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["lambda", "alpha", "conjugate_seed"])]
    input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    lambda: Option<u32>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, required_unless_present = "input")]
    alpha: Option<[Scalar; 2]>,
    /// Conjugate the module realization by a random invertible matrix.
    #[arg(long)]
    conjugate_seed: Option<u64>,
    /// Number of probe points beyond the fixed core.
    #[arg(long, default_value_t = 8)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_pair(s: &str) -> Result<[Scalar; 2], String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a1,a2`, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<Scalar>().map_err(|e| e.to_string());
    Ok([parse(a)?, parse(b)?])
}

fn parse_point(s: &str) -> Result<LatticeVector, String> {
    s.parse().map_err(|e: vlike_core::lattice::ParseLatticeError| e.to_string())
}

fn print_json<T: Serialize>(value: &T, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable");
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(io::stdout().lock(), "{text}");
}

struct Failed(u8, String);

fn read_json(path: &PathBuf) -> Result<Value, Failed> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failed(EXIT_NO_INPUT, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failed(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn verify(args: VerifyArgs) -> Result<u8, Failed> {
    if args.list {
        let list: Vec<Value> = Suite::ALL
            .iter()
            .map(|s| json!({ "suite": s.name(), "identity": s.identity() }))
            .collect();
        print_json(&list, true);
        return Ok(0);
    }
    let suite = args
        .suite
        .ok_or_else(|| Failed(EXIT_USAGE, "a suite name is required (see --list)".into()))?;
    let start = Instant::now();
    let report = if let Some(path) = &args.replay {
        let input = read_json(path)?;
        suites::replay(suite, &input).map_err(|e| Failed(EXIT_DATA, e.to_string()))?
    } else {
        let cfg = SuiteConfig {
            seed: args.seed,
            samples: args.samples,
            max_lambda: args.max_lambda,
            max_k: args.max_k,
            range: args.range,
        };
        cfg.validate(suite).map_err(|e| Failed(EXIT_USAGE, e.to_string()))?;
        suites::run_suite(suite, &cfg)
    };
    print_json(&report, true);
    eprintln!(
        "{}: {} cases, {} failures, elapsed {:.3}s",
        report.suite,
        report.cases,
        report.failures.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(if report.passed { 0 } else { 1 })
}

fn tmatrix(args: TmatrixArgs) -> Result<u8, Failed> {
    let spec = LsModuleSpec::new(args.lambda, args.alpha, Scalar::zero());
    print_json(&MatrixJson(t_matrix(&spec, args.r)), false);
    Ok(0)
}

fn identify_cmd(args: IdentifyArgs) -> Result<u8, Failed> {
    let real = match &args.input {
        Some(path) => {
            let doc: RealizationDoc = serde_json::from_value(read_json(path)?)
                .map_err(|e| Failed(EXIT_DATA, format!("{}: {e}", path.display())))?;
            doc.into_realization()
                .map_err(|e| Failed(EXIT_DATA, format!("{}: {e}", path.display())))?
        }
        None => {
            let (Some(lambda), Some(alpha)) = (args.lambda, args.alpha.clone()) else {
                return Err(Failed(EXIT_USAGE, "--lambda and --alpha are required without --input".into()));
            };
            let real = TRealization::from_module(&LsModuleSpec::new(lambda, alpha, Scalar::zero()));
            match args.conjugate_seed {
                Some(seed) => {
                    let (p, p_inv) = invertible_matrix(&mut rng(seed), real.dim());
                    real.conjugated(&p, &p_inv)
                }
                None => real,
            }
        }
    };
    let start = Instant::now();
    let outcome = identify(&real, args.probes, args.seed);
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(result) => {
            print_json(&IdentificationDoc::from(&result), true);
            eprintln!("identified lambda = {}, elapsed {elapsed:.3}s", result.lambda);
            Ok(0)
        }
        Err(err) => {
            print_json(
                &json!({ "error": {
                    "stage": err.stage(),
                    "code": err.exit_code(),
                    "message": err.to_string(),
                } }),
                true,
            );
            eprintln!("identification failed at {}: {err}", err.stage());
            Ok(err.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Tmatrix(args) => tmatrix(args),
        Command::Identify(args) => identify_cmd(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failed(code, message)) => {
            eprintln!("vlike: {message}");
            ExitCode::from(code)
        }
    }
}
