//! Command-line surface. Exit codes: 0 success, 1 failed check or runtime
//! error, 2 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use farey_core::counting::{dress_grid, CountReport, Sieve};
use farey_core::generator::segment_around;
use farey_core::scanner::{
    local_density, lower_bound_check, upper_witness, witness_check, ConjectureReport,
};
use farey_core::{FResult, FareyOrder, Fraction};
use num_rational::Ratio;
use serde::Serialize;

use crate::cache::{CacheRecord, ScanCache};
use crate::run::{run_orders, RunError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "farey-lab",
    version,
    about = "Exact experiments on similarly ordered Farey fractions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute f(n) with its minimal bad pair.
    F(RangeArgs),
    /// Check f(n) against ⌊n/4⌋ + d(n) and the known exceptional orders.
    Verify(RangeArgs),
    /// Print the explicit upper-bound witness pair for one order.
    Witness {
        #[arg(long)]
        order: u64,
        /// Also locate the pair in F_n and check its index distance.
        #[arg(long)]
        verify: bool,
    },
    /// Print the arithmetic-progression segment of F_n around a fraction.
    Segment {
        #[arg(long, value_parser = parse_fraction)]
        frac: Fraction,
        #[arg(long)]
        order: u64,
    },
    /// Print |F_n|, and the rank report for α when given.
    Count {
        #[arg(long)]
        order: u64,
        #[arg(long, value_parser = parse_fraction)]
        alpha: Option<Fraction>,
    },
    /// Check N(α - 1/n) <= A_n(α) <= N(α + 1/n) over a grid of α.
    Dress {
        #[arg(long)]
        order: u64,
        /// Explicit α values; defaults to the grid of F_K values and midpoints.
        #[arg(long, value_parser = parse_fraction)]
        alpha: Vec<Fraction>,
        /// K for the default grid.
        #[arg(long, default_value_t = 20)]
        grid: u64,
    },
    /// Check the minimal bad pair of each order against the local-density
    /// dichotomy and the linear lower bound.
    DensityCheck(RangeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderRange {
    pub lo: u64,
    pub hi: u64,
}

fn parse_range(s: &str) -> Result<OrderRange, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo.trim().parse().map_err(|e| format!("LO: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("HI: {e}"))?;
    Ok(OrderRange { lo, hi })
}

fn parse_fraction(s: &str) -> Result<Fraction, String> {
    s.parse().map_err(|e: farey_core::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct RangeArgs {
    /// Orders LO:HI, inclusive.
    #[arg(long, value_parser = parse_range, conflicts_with = "order", required_unless_present = "order")]
    pub range: Option<OrderRange>,
    /// A single order.
    #[arg(long)]
    pub order: Option<u64>,
    #[arg(long, env = "FAREY_LAB_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Threads per order: split each F_n into value ranges scanned in parallel.
    #[arg(long, default_value_t = 1)]
    pub split: u64,
    /// JSONL result cache; new results are appended.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Reuse results already present in the cache.
    #[arg(long, requires = "cache")]
    pub resume: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Report measured scan times instead of 0 in the elapsed column.
    #[arg(long)]
    pub timings: bool,
}

/// Validated run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub lo: u64,
    pub hi: u64,
    pub jobs: usize,
    pub split: u64,
    pub cache_path: Option<PathBuf>,
    pub resume: bool,
    pub format: OutputFormat,
    pub timings: bool,
}

impl RangeArgs {
    pub fn config(&self) -> Result<RunConfig, String> {
        let (lo, hi) = match (self.range, self.order) {
            (Some(r), _) => (r.lo, r.hi),
            (None, Some(n)) => (n, n),
            (None, None) => return Err("one of --range or --order is required".into()),
        };
        if lo < 4 {
            return Err(format!("f(n) is only defined for n >= 4 (got {lo})"));
        }
        if lo > hi {
            return Err(format!("empty range {lo}:{hi}"));
        }
        if self.jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        Ok(RunConfig {
            lo,
            hi,
            jobs: self.jobs,
            split: self.split.max(1),
            cache_path: self.cache.clone(),
            resume: self.resume,
            format: self.format,
            timings: self.timings,
        })
    }
}

/// Runs `f(n)` over the configured range, feeding `emit` in ascending order.
fn compute<E>(config: &RunConfig, mut emit: E) -> Result<(), RunError>
where
    E: FnMut(&FResult) -> Result<(), RunError>,
{
    let mut cache = config
        .cache_path
        .as_ref()
        .map(ScanCache::open)
        .transpose()?;
    let cached: BTreeMap<u64, FResult> = match (&cache, config.resume) {
        (Some(c), true) => c
            .results()
            .filter(|r| (config.lo..=config.hi).contains(&r.n))
            .map(|r| (r.n, *r))
            .collect(),
        _ => BTreeMap::new(),
    };
    run_orders(
        config.lo..=config.hi,
        config.jobs,
        config.split,
        &cached,
        |r| {
            if let Some(c) = cache.as_mut() {
                c.append(r)?;
            }
            Ok(())
        },
        &mut emit,
    )
}

pub const CSV_HEADER: &str = "n,f,witness_k,witness_l,k_index,l_index,elapsed_ms";

fn format_row(r: &FResult, config: &RunConfig) -> String {
    let mut r = *r;
    if !config.timings {
        r.elapsed_millis = 0;
    }
    match config.format {
        OutputFormat::Csv => format!(
            "{},{},{},{},{},{},{}",
            r.n,
            r.f,
            r.witness.fk,
            r.witness.fl,
            r.witness.k_index,
            r.witness.l_index,
            r.elapsed_millis
        ),
        OutputFormat::Jsonl => {
            serde_json::to_string(&CacheRecord::from(&r)).expect("record serializes")
        }
    }
}

fn ratio_string(r: &Ratio<i128>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CountJson {
    n: u64,
    #[serde(rename = "N")]
    total: u64,
    alpha: String,
    rank: u64,
    dress_lower: String,
    dress_upper: String,
    holds: bool,
}

impl From<&CountReport> for CountJson {
    fn from(r: &CountReport) -> Self {
        CountJson {
            n: r.n,
            total: r.total,
            alpha: r.alpha.to_string(),
            rank: r.rank,
            dress_lower: ratio_string(&r.dress_lower),
            dress_upper: ratio_string(&r.dress_upper),
            holds: r.holds,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<farey_core::Error> for Failure {
    fn from(e: farey_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("output: {e}"))
    }
}

fn order_arg(n: u64) -> Result<FareyOrder, Failure> {
    FareyOrder::new(n).map_err(|e| Failure::Usage(e.to_string()))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::F(args) => {
            let config = args.config().map_err(Failure::Usage)?;
            if config.format == OutputFormat::Csv {
                writeln!(out, "{CSV_HEADER}")?;
            }
            compute(&config, |r| {
                writeln!(out, "{}", format_row(r, &config))?;
                Ok(())
            })?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let config = args.config().map_err(Failure::Usage)?;
            let mut values = Vec::new();
            compute(&config, |r| {
                values.push((r.n, r.f));
                Ok(())
            })?;
            let report = ConjectureReport::from_values(values);
            write_verify_report(out, &config, &report)?;
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
        Command::DensityCheck(args) => {
            let config = args.config().map_err(Failure::Usage)?;
            let mut failures = 0u64;
            compute(&config, |r| {
                let check = local_density(FareyOrder::new(r.n)?, &r.witness)?;
                let linear = lower_bound_check(r);
                if !(check.holds() && linear) {
                    failures += 1;
                }
                let small = check
                    .small_denominator
                    .map_or_else(|| "none".to_owned(), |x| x.to_string());
                writeln!(
                    out,
                    "n={} distance={} x={}/{} small_denominator={} distance_bound={} linear_bound={}",
                    r.n,
                    r.witness.distance(),
                    check.x.numer(),
                    check.x.denom(),
                    small,
                    check.distance_bound,
                    linear
                )?;
                Ok(())
            })?;
            writeln!(err, "failures={failures}")?;
            Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Witness { order, verify } => {
            if order < 4 {
                return Err(Failure::Usage(format!(
                    "witness needs n >= 4 (got {order})"
                )));
            }
            let n = order_arg(order)?;
            let (fk, fl, dist) = upper_witness(n)?;
            writeln!(out, "{fk} {fl} distance={dist}")?;
            if !verify {
                return Ok(EXIT_OK);
            }
            let check = witness_check(n)?;
            let show = |x: Option<u64>| x.map_or_else(|| "absent".to_owned(), |v| v.to_string());
            let passed = check.passed();
            writeln!(
                out,
                "k_index={} l_index={} observed_distance={} {}",
                show(check.k_index),
                show(check.l_index),
                show(check.observed_distance()),
                if passed { "ok" } else { "MISMATCH" }
            )?;
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Segment { frac, order } => {
            let seg = segment_around(frac, order_arg(order)?)?;
            for x in seg.run() {
                writeln!(out, "{x}")?;
            }
            writeln!(
                out,
                "c={} d={} d'={} c'={}",
                seg.c, seg.d, seg.d_prime, seg.c_prime
            )?;
            Ok(EXIT_OK)
        }
        Command::Count { order, alpha } => {
            let n = order_arg(order)?;
            let sieve = Sieve::new(order)?;
            writeln!(out, "N={}", sieve.farey_count(n))?;
            if let Some(alpha) = alpha {
                let report = sieve.dress_check(n, alpha);
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&CountJson::from(&report)).unwrap()
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Dress { order, alpha, grid } => {
            let n = order_arg(order)?;
            let alphas = if alpha.is_empty() {
                dress_grid(order_arg(grid)?)
            } else {
                alpha
            };
            let sieve = Sieve::new(order)?;
            let mut failures = 0;
            for a in &alphas {
                let report = sieve.dress_check(n, *a);
                if !report.holds {
                    failures += 1;
                }
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&CountJson::from(&report)).unwrap()
                )?;
            }
            writeln!(err, "checked={} failures={failures}", alphas.len())?;
            Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn write_verify_report(
    out: &mut dyn Write,
    config: &RunConfig,
    report: &ConjectureReport,
) -> std::io::Result<()> {
    let joined = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "range {}:{}", config.lo, config.hi)?;
    writeln!(out, "match {}", report.matches)?;
    writeln!(
        out,
        "exceptional {}: {}",
        report.exceptional.len(),
        joined(&report.exceptional)
    )?;
    writeln!(out, "violations {}", report.violations.len())?;
    for v in &report.violations {
        writeln!(
            out,
            "violation n={} f={} bound={} kind={:?}",
            v.n, v.f, v.bound, v.kind
        )?;
    }
    Ok(())
}
