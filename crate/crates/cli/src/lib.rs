//! Command surface for `sqfree-core`: argument parsing, dispatch, JSON reports
//! and checkpointed long runs.

pub mod checkpoint;
mod commands;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::{Report, Status};

#[derive(Debug, Parser)]
#[command(name = "sqfree", version, about = "Square-free neighbours of integer, binary and prime-field polynomials")]
pub struct Cli {
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, short, global = true, conflicts_with = "quiet")]
    pub output: Option<PathBuf>,
    /// Print nothing; only the exit code reports the outcome.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "SQFREE_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Square-freeness tests.
    #[command(subcommand)]
    Squarefree(SquarefreeCmd),
    /// Nearest square-free polynomial within an L-ball.
    Search(SearchArgs),
    /// Square-free tails `x^n + f`.
    Tail(TailArgs),
    /// Hard instances built by the Chinese remainder construction.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Totient censuses.
    #[command(subcommand)]
    Census(CensusCmd),
    /// Exhaustive verifications.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exhaustive scans.
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Re-verify the certificates in a report.
    Recheck(RecheckArgs),
}

#[derive(Debug, Subcommand)]
pub enum SquarefreeCmd {
    Check(CheckArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long)]
    pub poly: String,
    /// Work over F_p instead of the integers.
    #[arg(long = "mod", value_name = "P")]
    pub modulus: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 2)]
    pub budget: usize,
    /// Largest degree allowed for the neighbour (default: deg f).
    #[arg(long)]
    pub degree_cap: Option<usize>,
    /// Permit budgets above 2.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TailArgs {
    #[arg(long)]
    pub poly: String,
    /// Use this exponent; it must exceed L(f').
    #[arg(long, conflicts_with = "window")]
    pub n: Option<usize>,
    /// Search the bounded degree window instead of the smallest exponent.
    #[arg(long)]
    pub window: bool,
    /// Largest exponent tried by the default minimal search.
    #[arg(long, default_value_t = 1000)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// The degree-15 instance with witnesses at 0, +-1/2 and +-1/6, or a
    /// higher-degree member of its family with `--degree`.
    Turan15(Turan15Args),
    /// The degree-15 instance from the resultant-one base list.
    Referee15,
    /// A member of degree `d` of the family over a degree-15 instance.
    Family(FamilyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Turan15Args {
    /// Use the resultant-one base list instead.
    #[arg(long)]
    pub referee: bool,
    /// Family parameter; requires `--degree`.
    #[arg(long, requires = "degree", allow_negative_numbers = true)]
    pub k: Option<i64>,
    /// Build the family member of this degree (at least 16).
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Turan15,
    Referee15,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, value_enum, default_value_t = Base::Turan15)]
    pub base: Base,
}

#[derive(Debug, Subcommand)]
pub enum CensusCmd {
    /// Rows `r` with `Phi(r)/r >= threshold`, checking `Phi(r) <= 2.5 r` throughout.
    Phi(PhiArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PhiArgs {
    /// Smallest `r` listed; `r = 1` also qualifies at ratio 2 when included.
    #[arg(long, default_value_t = 2)]
    pub min: u64,
    #[arg(long)]
    pub max: u64,
    /// Exact rational, such as `2` or `9/4`.
    #[arg(long, default_value = "2")]
    pub threshold: String,
    /// Also write the rows as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Exhaustive tail search over GF(2) up to a degree.
    Lemma52(Lemma52Args),
    /// Verify and count the prime-field hard-instance family.
    Theorem61(FieldArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Lemma52Args {
    #[arg(long)]
    pub max_degree: usize,
    /// Search `f` with `x | f`, `x^2` not dividing `f`, one degree higher.
    #[arg(long)]
    pub corollary: bool,
    /// Append finished shards here and skip those already done.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = sqfree_core::gf2::DEFAULT_SHARD_BITS)]
    pub shard_bits: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub d: usize,
}

#[derive(Debug, Subcommand)]
pub enum ScanCmd {
    /// Largest distance to a square-free polynomial of degree at most d over F_p.
    Question62(FieldArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RecheckArgs {
    /// A report, a certificate, or a list of certificates (JSON).
    #[arg(long)]
    pub input: PathBuf,
}

/// Run one command to completion inside a pool with the requested workers.
pub fn run(cli: &Cli) -> Result<Report> {
    let jobs = match cli.jobs {
        Some(j) => j as usize,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building the worker pool")?;
    let start = Instant::now();
    let (name, input, outcome) = pool.install(|| commands::dispatch(&cli.command))?;
    Ok(Report {
        command: name,
        input,
        status: outcome.status,
        result: outcome.result,
        certificates: outcome.certificates,
        timing_ms: start.elapsed().as_millis() as u64,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Print or write the report as requested.
pub fn emit(cli: &Cli, report: &Report) -> Result<()> {
    if cli.quiet {
        return Ok(());
    }
    let text = serde_json::to_string_pretty(report)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
