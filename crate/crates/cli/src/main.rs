use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use laver_core::bitmap::{render_pbm, BitmapKind, BitmapSpec, PbmFormat};
use laver_core::cache::{self, CacheError};
use laver_core::crit::{crit_index, gamma_image};
use laver_core::terms::{f_of, one_star_sixteen, residues, search_nonzero};
use laver_core::verify::{run_suite, SUITES};
use laver_core::{BuildOptions, CompressedTable, Error, LdTerm, Level};

/// Largest level whose full table `table --format full` will print.
const FULL_PRINT_MAX_LEVEL: u32 = 12;

#[derive(Parser)]
#[command(name = "laver", version, about = "Laver tables, their backward form, and critical points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load) the table A'_n and print it.
    Table {
        #[arg(short = 'n', long = "level")]
        level: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Full)]
        format: TableFormat,
        /// Fill full-digit rows by block assembly.
        #[arg(long)]
        accel: bool,
        /// Row-cache file: loaded if present, written otherwise.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Draw row bits or the period grid of A'_n as a portable bitmap.
    Bitmap {
        #[arg(short = 'n', long = "level")]
        level: u32,
        #[arg(long, value_enum, default_value_t = Kind::RowBits)]
        kind: Kind,
        /// Rows to draw, `lo..hi` inclusive (default: all).
        #[arg(long)]
        rows: Option<String>,
        #[arg(long, value_enum, default_value_t = Pbm::Plain)]
        format: Pbm,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        accel: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Print `t mod 2^n` for a term over the given levels (`n` or `lo..hi`).
    Eval {
        term: String,
        #[arg(default_value = "0..8")]
        levels: String,
        /// Also print the critical point.
        #[arg(long)]
        crit: bool,
        /// Also print gamma_m -> image for m up to the top level.
        #[arg(long)]
        gammas: bool,
    },
    /// Run a verification suite (see `laver suites`).
    Verify {
        suite: String,
        /// Suite bound; `-n`, `-N` and `--level` are synonyms.
        #[arg(short = 'n', long = "level", visible_short_alias = 'N', alias = "bound")]
        bound: Option<u32>,
        /// Worker threads (0 = one per CPU).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// List verification suites.
    Suites,
    /// Index of the critical point of j^(n), or ABOVE_CAP.
    Fcn {
        n: u64,
        #[arg(long, default_value_t = 12)]
        cap: u32,
    },
    /// Least level where a term is nonzero (default term: j*j_16).
    Search {
        term: Option<String>,
        #[arg(long, default_value_t = 12)]
        cap: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    /// Every entry of every row.
    Full,
    /// One stored period per row.
    Periods,
    /// Build statistics as JSON.
    Stats,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    RowBits,
    PeriodGrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pbm {
    Plain,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
enum Failure {
    Counterexample,
    Usage(String),
    Budget(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Counterexample => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::MemoryBudget { .. } => Failure::Budget(e.to_string()),
            Error::AccelMismatch { .. } | Error::NonPowerOfTwoPeriod { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CacheError> for Failure {
    fn from(e: CacheError) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Counterexample => {}
                Failure::Usage(m) | Failure::Budget(m) | Failure::Io(m) => eprintln!("laver: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    let mut out = io::stdout().lock();
    match command {
        Command::Table { level, format, accel, cache } => {
            if matches!(format, TableFormat::Full) && level > FULL_PRINT_MAX_LEVEL {
                return Err(Failure::Usage(format!(
                    "full output stops at level {FULL_PRINT_MAX_LEVEL}; use --format periods"
                )));
            }
            let (t, stats) = load_or_build(level, accel, cache.as_deref())?;
            match format {
                TableFormat::Full => {
                    let top = t.level().size();
                    for a in 1..=top {
                        let line: Vec<String> = (1..=top).map(|b| t.get(a, b).to_string()).collect();
                        writeln!(out, "{}", line.join(" "))?;
                    }
                }
                TableFormat::Periods => {
                    for a in 1..=t.level().size() {
                        let line: Vec<String> = t.row(a).iter().map(u64::to_string).collect();
                        writeln!(out, "{a}: {}", line.join(" "))?;
                    }
                }
                TableFormat::Stats => {
                    let json = serde_json::to_string_pretty(&stats).expect("stats serialize");
                    writeln!(out, "{json}")?;
                }
            }
        }
        Command::Bitmap { level, kind, rows, format, output, accel, cache } => {
            let (t, _) = load_or_build(level, accel, cache.as_deref())?;
            let rows = match rows {
                Some(r) => parse_range(&r)?,
                None => 1..=t.level().size(),
            };
            let spec = BitmapSpec {
                kind: match kind {
                    Kind::RowBits => BitmapKind::RowBits,
                    Kind::PeriodGrid => BitmapKind::PeriodGrid,
                },
                rows,
                format: match format {
                    Pbm::Plain => PbmFormat::Plain,
                    Pbm::Raw => PbmFormat::Raw,
                },
            };
            let bytes = render_pbm(&t, &spec)?;
            match output {
                Some(path) => fs::write(&path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => out.write_all(&bytes)?,
            }
        }
        Command::Eval { term, levels, crit, gammas } => {
            let t = parse_term(&term)?;
            let range = parse_range(&levels)?;
            let hi = u32::try_from(*range.end()).map_err(|_| Failure::Usage("level too large".into()))?;
            let r = residues(&t, Level::new(hi)?)?;
            for n in range {
                writeln!(out, "{n} {}", r.at(n as u32)?)?;
            }
            if crit {
                writeln!(out, "crit {}", crit_index(&r))?;
            }
            if gammas {
                for m in 0..=hi {
                    writeln!(out, "gamma_{m} -> {}", gamma_image(&r, m)?)?;
                }
            }
        }
        Command::Verify { suite, bound, jobs, format } => {
            let report = run_suite(&suite, bound, jobs)?;
            match format {
                ReportFormat::Json => {
                    writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes"))?;
                }
                ReportFormat::Text => {
                    let status = if report.passed() { "PASS" } else { "FAIL" };
                    let mut line = format!("{status} {} bound={} checked={}", report.suite, report.bound, report.checked);
                    for (k, v) in &report.stats {
                        let _ = write!(line, " {}={v}", k.replace(' ', "_"));
                    }
                    writeln!(out, "{line}")?;
                    if let Some(c) = &report.counterexample {
                        writeln!(out, "counterexample: {c}")?;
                    }
                }
            }
            if !report.passed() {
                return Err(Failure::Counterexample);
            }
        }
        Command::Suites => {
            for s in SUITES {
                writeln!(out, "{:22} default {:2}, max {:2}: bound is {}", s.name, s.default_bound, s.max_bound, s.bound_meaning)?;
            }
        }
        Command::Fcn { n, cap } => {
            writeln!(out, "{}", f_of(n, Level::new(cap)?)?)?;
        }
        Command::Search { term, cap } => {
            let t = match term {
                Some(src) => parse_term(&src)?,
                None => one_star_sixteen(),
            };
            writeln!(out, "{}", search_nonzero(&t, Level::new(cap)?)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_term(src: &str) -> CliResult<LdTerm> {
    LdTerm::parse(src).map_err(|e| Failure::Usage(format!("{e}\n  {src}\n  {:>width$}", "^", width = e.position + 1)))
}

/// `k` or `lo..hi`, both ends inclusive.
fn parse_range(s: &str) -> CliResult<std::ops::RangeInclusive<u64>> {
    let bad = || Failure::Usage(format!("expected a number or lo..hi, got {s:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(bad());
            }
            Ok(lo..=hi)
        }
        None => {
            let k = num(s)?;
            Ok(k..=k)
        }
    }
}

fn load_or_build(level: u32, accel: bool, cache_path: Option<&Path>) -> CliResult<(CompressedTable, serde_json::Value)> {
    let level = Level::new(level)?;
    if let Some(path) = cache_path.filter(|p| p.exists()) {
        let t = cache::read(path)?;
        if t.level() != level {
            return Err(Failure::Io(format!(
                "{} holds level {}, not {level}",
                path.display(),
                t.level()
            )));
        }
        let stats = serde_json::json!({ "loaded": path.display().to_string(), "bytes": t.bytes() });
        return Ok((t, stats));
    }
    let opts = BuildOptions { accel, ..BuildOptions::default() };
    let (t, stats) = CompressedTable::build_with(level, &opts)?;
    if let Some(path) = cache_path {
        cache::write(path, &t)?;
    }
    Ok((t, serde_json::to_value(stats).expect("stats serialize")))
}
