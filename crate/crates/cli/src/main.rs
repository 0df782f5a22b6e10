//! `ofal`: generate request sequences, run online assignment strategies, and
//! report exact competitive ratios.
//!
//! Exit codes: 0 when all checks pass, 1 when a bound or oracle check fails,
//! 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ofal_core::adversary::{gen_lower_bound, gen_random, lift_sequence, GeneratorMeta};
use ofal_core::online::run_online;
use ofal_core::rational::{decimal_significant, parse_rational, rat};
use ofal_core::report::{compute_ratio, oracle_check, sweep};
use ofal_core::{Algorithm, Instance, Rational, RatioReport};

use ofal_cli::files::{InstanceFile, RatioReportFile, SequenceFile, TraceFile};

/// Exact competitive-ratio experiments for online assignment on a line.
#[derive(Parser)]
#[command(name = "ofal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a request-sequence file from one of the generators.
    Gen(GenArgs),
    /// Run an online strategy over a sequence and emit its trace.
    Run(RunArgs),
    /// Compare an online run against the exact offline optimum.
    Ratio(RatioArgs),
    /// One checked ratio report per k in a range.
    Sweep(SweepArgs),
    /// Cross-check the incremental solver against exhaustive search.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Generator family: the adversarial lower-bound construction or uniform
    /// random positions.
    #[arg(long, value_parser = ["thm1", "random"])]
    kind: String,
    /// Number of servers (placed at 0, 1, ..., k-1).
    #[arg(long)]
    k: usize,
    /// Capacity of every server.
    #[arg(long)]
    ell: u32,
    /// Offset parameter in (0, 1/2], e.g. 1/100. Required for thm1.
    #[arg(long, value_parser = parse_ratio_arg, required_if_eq("kind", "thm1"))]
    eps: Option<Rational>,
    /// Number of requests (random only; defaults to k*ell).
    #[arg(long)]
    n: Option<usize>,
    /// RNG seed (random only; defaults to 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Lower end of the sampling range (random only; defaults to -1/2).
    #[arg(long, value_parser = parse_ratio_arg)]
    lo: Option<Rational>,
    /// Upper end of the sampling range (random only; defaults to k - 1/2).
    #[arg(long, value_parser = parse_ratio_arg)]
    hi: Option<Rational>,
    /// Where to write the sequence file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Online strategy: perm or greedy.
    #[arg(long, value_parser = parse_alg)]
    alg: Algorithm,
    /// Instance file (server positions and capacities).
    #[arg(long)]
    instance: PathBuf,
    /// Sequence file.
    #[arg(long)]
    seq: PathBuf,
    /// Write the trace here instead of standard output.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct RatioArgs {
    /// Online strategy: perm or greedy.
    #[arg(long, value_parser = parse_alg)]
    alg: Algorithm,
    /// Sequence file.
    #[arg(long)]
    seq: PathBuf,
    /// Number of equispaced servers; defaults to the sequence metadata, then
    /// to the sequence length.
    #[arg(long)]
    k: Option<usize>,
    /// Capacity of every server; defaults to the sequence metadata, then 1.
    #[arg(long)]
    ell: Option<u32>,
    /// Fail (exit 1) unless the ratio reaches this value.
    #[arg(long, value_parser = parse_ratio_arg)]
    bound: Option<Rational>,
}

#[derive(Args)]
struct SweepArgs {
    /// Online strategy: perm or greedy.
    #[arg(long, value_parser = parse_alg)]
    alg: Algorithm,
    /// First number of servers.
    #[arg(long)]
    k_from: usize,
    /// Last number of servers (inclusive).
    #[arg(long)]
    k_to: usize,
    /// Capacity of every server.
    #[arg(long, default_value_t = 1)]
    ell: u32,
    /// Offset parameter; each k is checked against the bound k + 1 - eps.
    #[arg(long, value_parser = parse_ratio_arg, default_value = "1/100")]
    eps: Rational,
    /// Also write one CSV row per k to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Number of random instances to check.
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// Largest sequence length per trial (at most 8).
    #[arg(long, default_value_t = 7)]
    max_n: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Ratio(args) => cmd_ratio(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let instance = Instance::equispaced(args.k, args.ell)?;
    let (requests, meta) = match args.kind.as_str() {
        "thm1" => {
            if args.n.is_some() || args.seed.is_some() || args.lo.is_some() || args.hi.is_some() {
                bail!("--n, --seed, --lo and --hi only apply to --kind random");
            }
            let eps = args.eps.clone().expect("clap requires --eps for thm1");
            let base = gen_lower_bound(args.k, &eps)?;
            (
                lift_sequence(&instance, &base),
                GeneratorMeta::lower_bound(args.k, args.ell, eps),
            )
        }
        "random" => {
            if args.eps.is_some() {
                bail!("--eps only applies to --kind thm1");
            }
            let default_n = args
                .k
                .checked_mul(args.ell as usize)
                .context("k * ell overflows")?;
            let n = args.n.unwrap_or(default_n);
            if n as u64 > instance.total_capacity() {
                bail!(
                    "{n} requests exceed the total capacity {} of the instance",
                    instance.total_capacity()
                );
            }
            let seed = args.seed.unwrap_or(0);
            let lo = args.lo.clone().unwrap_or_else(|| rat(-1, 2));
            let hi = args
                .hi
                .clone()
                .unwrap_or_else(|| rat(2 * args.k as i64 - 1, 2));
            let requests = gen_random(n, seed, &lo, &hi)?;
            (
                requests,
                GeneratorMeta::random(args.k, args.ell, n, seed, lo, hi),
            )
        }
        other => unreachable!("clap restricts --kind, got {other}"),
    };
    let file = SequenceFile::new(&requests, Some(&meta));
    write_text(&args.out, &to_json(&file)?)?;
    println!("wrote {} requests to {}", requests.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let instance = read_json::<InstanceFile>(&args.instance)?.to_instance()?;
    let requests = read_json::<SequenceFile>(&args.seq)?.to_requests()?;
    let trace = run_online(&instance, &requests, args.alg)?;
    let json = to_json(&TraceFile::new(&args.alg.to_string(), &trace))?;
    match &args.trace {
        Some(path) => {
            write_text(path, &json)?;
            println!(
                "{} served {} requests at total cost {}; trace in {}",
                args.alg,
                trace.len(),
                trace.total(),
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio(args: RatioArgs) -> Result<ExitCode> {
    let seq = read_json::<SequenceFile>(&args.seq)?;
    let requests = seq.to_requests()?;
    let meta = seq.generator.as_ref().map(|g| g.to_meta()).transpose()?;
    let k = args
        .k
        .or_else(|| meta.as_ref().and_then(|m| m.k))
        .unwrap_or_else(|| requests.len());
    let ell = args
        .ell
        .or_else(|| meta.as_ref().and_then(|m| m.ell))
        .unwrap_or(1);
    let instance = Instance::equispaced(k, ell)?;
    let report = compute_ratio(&instance, &requests, args.alg, meta, args.bound.clone())?;
    println!("{}", to_json(&RatioReportFile::new(&report))?);
    Ok(exit_for(report.passed()))
}

const CSV_HEADER: &str =
    "k,ell,eps,alg,alg_cost_exact,opt_cost_exact,ratio_exact,ratio_decimal,bound_exact,pass\n";

fn csv_row(report: &RatioReport, eps: &Rational) -> String {
    let check = report
        .bound
        .as_ref()
        .expect("sweep reports always carry a bound");
    let decimal = match report.ratio.as_finite() {
        Some(q) => decimal_significant(q, 10),
        None => "inf".to_string(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{}\n",
        report.k,
        report.ell,
        eps,
        report.algorithm,
        report.alg_total,
        report.opt_total,
        report.ratio,
        decimal,
        check.bound,
        check.pass,
    )
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let reports = sweep(args.k_from, args.k_to, args.ell, &args.eps, args.alg)?;
    let mut csv = String::from(CSV_HEADER);
    let mut all_pass = true;
    for report in &reports {
        let check = report
            .bound
            .as_ref()
            .expect("sweep reports always carry a bound");
        all_pass &= check.pass;
        println!(
            "k={:<2} ell={:<2} alg={} ratio={} ({}) bound={} {}",
            report.k,
            report.ell,
            report.algorithm,
            report.ratio,
            report.ratio_decimal(),
            check.bound,
            if check.pass { "pass" } else { "FAIL" },
        );
        csv.push_str(&csv_row(report, &args.eps));
    }
    if let Some(path) = &args.csv {
        write_text(path, &csv)?;
    }
    Ok(exit_for(all_pass))
}

fn cmd_oracle_check(args: OracleCheckArgs) -> Result<ExitCode> {
    let report = oracle_check(args.trials, args.max_n, args.seed)?;
    if report.passed() {
        println!(
            "oracle-check: {} trials agree exactly (max_n {}, seed {})",
            report.trials, report.max_n, report.seed
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "oracle-check: {} of {} trials disagree (max_n {}, seed {})",
            report.failures, report.trials, report.max_n, report.seed
        );
        if let Some(first) = &report.first_failure {
            println!("first failure: {first}");
        }
        Ok(ExitCode::from(1))
    }
}

fn parse_ratio_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_alg(s: &str) -> Result<Algorithm, String> {
    s.parse::<Algorithm>().map_err(|e| e.to_string())
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
