//! Command-line front end. Every command writes a `#`-prefixed run manifest
//! followed by a CSV table on the given output stream.

mod commands;
pub mod format;

use crate::analytic::Tolerance;
use crate::error::Error;
use crate::montecarlo::RNG_ALGORITHM;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const COMPARE_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "GCDLCM_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "gcdlcm", version, about = "Limit laws, exact enumeration and simulation for gcd and lcm of random tuples")]
pub struct Cli {
    /// Number of independent sampling streams and worker threads.
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 1)]
    pub workers: usize,
    /// Target accuracy of analytic constants.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a limit law.
    Law(LawArgs),
    /// Compare limit laws with exact enumeration (and optionally simulation).
    Compare(CompareArgs),
    /// Waiting times of the running gcd or lcm.
    Waiting(WaitingArgs),
    /// Monte Carlo estimate of a tuple statistic.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawStat {
    GcdMass,
    GcdMoment,
    LcmCdf,
    LcmMoment,
    LcmOverProductCdf,
    LcmOverProductMoment,
    LogLcmMean,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    #[arg(long, value_enum)]
    pub stat: LawStat,
    #[arg(long)]
    pub r: u32,
    /// Values of k, e.g. `1..10` or `1,2,5`.
    #[arg(long)]
    pub k: Option<String>,
    /// Values of t, e.g. `0.2,0.5`.
    #[arg(long, conflicts_with = "t_grid")]
    pub t: Option<String>,
    /// Inclusive grid `start:end:step`.
    #[arg(long)]
    pub t_grid: Option<String>,
    /// Moment orders.
    #[arg(long)]
    pub q: Option<String>,
    /// Range size for growing gcd moments.
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareStat {
    GcdMass,
    LcmCdf,
    Lcm3Cdf,
    LcmMoment,
    LogLcmMean,
    WaitGcdMean,
    WaitLcmMean,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub stat: CompareStat,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, value_parser = parse_count_arg)]
    pub n: u64,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, conflicts_with = "t_grid")]
    pub t: Option<String>,
    #[arg(long)]
    pub t_grid: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    /// Allowed deviation between limit and finite-n value (relative for
    /// the lcm waiting time, absolute otherwise).
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Also run a simulation with this many samples.
    #[arg(long, value_parser = parse_count_arg)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WaitKind {
    Gcd,
    Lcm,
}

#[derive(Debug, Args)]
pub struct WaitingArgs {
    #[arg(long, value_enum)]
    pub kind: WaitKind,
    #[arg(long, value_parser = parse_count_arg, conflicts_with = "n_grid", required_unless_present = "n_grid")]
    pub n: Option<u64>,
    /// Values of n, e.g. `10,100,1000` or `10:100:10`.
    #[arg(long)]
    pub n_grid: Option<String>,
    /// Simulated trials per n; no simulation when absent.
    #[arg(long, value_parser = parse_count_arg)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimStat {
    Gcd,
    Lcm,
    LcmOverProduct,
    LogLcm,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub stat: SimStat,
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_parser = parse_count_arg)]
    pub n: u64,
    #[arg(long, value_parser = parse_count_arg)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Moment order (default 1).
    #[arg(long, conflicts_with_all = ["t", "k"])]
    pub q: Option<u32>,
    /// Estimate `P(X ≤ t)` instead of a moment.
    #[arg(long, conflicts_with = "k")]
    pub t: Option<f64>,
    /// Estimate `P(gcd = k)`.
    #[arg(long)]
    pub k: Option<u64>,
}

fn parse_count_arg(s: &str) -> std::result::Result<u64, String> {
    format::parse_count(s)
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => exit::USAGE,
            Failure::Library(e) => match e {
                Error::InvalidArgument(_) | Error::Domain(_) => exit::USAGE,
                Error::Resource { .. } => exit::RESOURCE,
                Error::Range(_) | Error::Numeric(_) | Error::Consistency { .. } => exit::NUMERIC,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Library(e) => write!(f, "{e}"),
        }
    }
}

/// What a command produced: the CSV body, extra manifest lines, and whether
/// all checks passed.
pub(crate) struct Output {
    pub table: format::Table,
    pub notes: Vec<String>,
    pub passed: bool,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl Output {
    pub(crate) fn new(table: format::Table) -> Self {
        Output {
            table,
            notes: Vec::new(),
            passed: true,
            seed: None,
            tol: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// data to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    exit::OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    exit::USAGE
                }
            };
        }
    };
    let command_line = std::iter::once("gcdlcm".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli) {
        Ok((o, seconds)) => {
            let manifest = manifest(&cli, &command_line, &o, seconds);
            let write = out
                .write_all(manifest.as_bytes())
                .and_then(|_| out.write_all(o.table.as_str().as_bytes()));
            if let Err(e) = write {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return exit::NUMERIC;
            }
            if o.passed {
                exit::OK
            } else {
                let _ = writeln!(err, "comparison failed at tolerance {}", o.tol.unwrap_or(f64::NAN));
                exit::COMPARE_FAILED
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> std::result::Result<(Output, f64), Failure> {
    if cli.workers < 1 {
        return Err(Failure::Usage("--workers must be >= 1".into()));
    }
    let tol = Tolerance::new(cli.eps).map_err(|e| Failure::Usage(e.to_string()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {} workers: {e}", cli.workers)))?;
    let start = Instant::now();
    let out = pool.install(|| match &cli.command {
        Command::Law(a) => commands::law(a, tol),
        Command::Compare(a) => commands::compare(a, tol, cli.workers),
        Command::Waiting(a) => commands::waiting(a, tol, cli.workers),
        Command::Simulate(a) => commands::simulate(a, tol, cli.workers),
    })?;
    Ok((out, start.elapsed().as_secs_f64()))
}

fn manifest(cli: &Cli, command_line: &str, o: &Output, seconds: f64) -> String {
    let mut lines = vec![
        format!("# gcdlcm {}", env!("CARGO_PKG_VERSION")),
        format!("# command: {command_line}"),
        format!("# seed: {}", o.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into())),
        format!("# workers: {}", cli.workers),
        format!("# rng: {RNG_ALGORITHM}"),
        format!("# eps: {}", format::fmt_g(cli.eps)),
    ];
    if let Some(t) = o.tol {
        lines.push(format!("# tol: {}", format::fmt_g(t)));
    }
    lines.extend(o.notes.iter().map(|n| format!("# {n}")));
    lines.push(format!("# duration_s: {seconds:.6}"));
    let mut s = lines.join("\n");
    s.push('\n');
    s
}
