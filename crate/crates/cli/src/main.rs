mod cache;

use std::num::{NonZeroU64, NonZeroUsize};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use oksos_core::analysis::{
    check_candidate_hermitian, j_cone, min_rank_from_rays, min_rank_search, pattern_checks, reproduce_table_with, verify_report,
    MinRankReport, RowStatus,
};
use oksos_core::format;
use oksos_core::linalg::Rational;
use oksos_core::polytope::{
    certify_vertex, extreme_rays_dd, slice_to_vertices, trace_slice_system, DdOptions, InsertionOrder, Ray,
};
use oksos_core::prolongation::{build_signed_direct, build_signed_recursive};
use oksos_core::{Error, ProlongationMatrix, SignVector};
use rayon::prelude::*;

use cache::RayCache;

#[derive(Parser)]
#[command(name = "oksos", version, about = "Exact minimal ranks of prolonged diagonal Hermitian sums of squares")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Output format; `table` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads [default: available cores].
    #[arg(long, global = true)]
    workers: Option<NonZeroUsize>,
    /// Ray-set cache directory.
    #[arg(long, global = true, env = "OKSOS_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Skip re-certification of results.
    #[arg(long, global = true)]
    no_verify: bool,
    /// Per-computation time limit in seconds.
    #[arg(long, global = true)]
    time_limit: Option<NonZeroU64>,
    /// Constraint insertion order: sparse, natural or seeded:SEED.
    #[arg(long, global = true, default_value = "sparse", value_parser = parse_order)]
    dd_order: InsertionOrder,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Leave the elapsed_ms column empty so output is reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Target {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: usize,
    /// Sign vector such as +,+,- (defaults to all +).
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the prolongation matrix.
    Jmat(Target),
    /// Vertices of the trace-one slice of the prolongation cone.
    Vertices {
        #[command(flatten)]
        target: Target,
        /// Certify every vertex by the rank of its tight rows before writing.
        #[arg(long)]
        check: bool,
    },
    /// Minimal prolonged rank with all minimizing vertices.
    Minrank(Target),
    /// Minimal ranks for a list of pairs.
    Table {
        /// Pairs as n:d,n:d,...
        #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
        pairs: Vec<(usize, usize)>,
        /// All pairs with n >= 2, d >= 2 and n + d <= S.
        #[arg(long)]
        max_sum: Option<usize>,
    },
    /// Membership and rank of a Hermitian candidate and its prolongation.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        file: PathBuf,
    },
}

fn parse_order(s: &str) -> Result<InsertionOrder, String> {
    match s {
        "sparse" | "sparse-first" => Ok(InsertionOrder::SparseFirst),
        "natural" => Ok(InsertionOrder::Natural),
        _ => match s.strip_prefix("seeded:") {
            Some(seed) => seed.parse().map(InsertionOrder::Seeded).map_err(|_| format!("bad seed {seed:?}")),
            None => Err(format!("unknown order {s:?}; use sparse, natural or seeded:SEED")),
        },
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (n, d) = s.split_once(':').ok_or_else(|| format!("expected n:d, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad integer in {s:?}"));
    Ok((parse(n)?, parse(d)?))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InternalInconsistency(_) => 2,
            Error::NotPointed { .. } | Error::NonPositiveLevel { .. } => 3,
            Error::TimedOut => 1,
            _ => 4,
        };
        let message = match e {
            Error::NotHermitian { .. } => format!("input not Hermitian ({e})"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

type CliResult<T> = Result<T, Failure>;

struct Runner {
    config: Config,
    workers: usize,
    cache: Option<RayCache>,
}

impl Runner {
    fn verify(&self) -> bool {
        !self.config.no_verify
    }

    fn deadline(&self) -> Option<Instant> {
        self.config.time_limit.map(|s| Instant::now() + Duration::from_secs(s.get()))
    }

    fn format(&self, default: Format) -> Format {
        self.config.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.config.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", path.display()) }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn resolve(&self, t: &Target) -> CliResult<(usize, SignVector)> {
        let signs = match (&t.signs, t.n) {
            (Some(s), n) => {
                let signs: SignVector = s.parse().map_err(|e: Error| Failure::input(e.to_string()))?;
                if n.is_some_and(|n| n != signs.len()) {
                    return Err(Failure::input(format!("--n {} disagrees with {} signs", n.unwrap(), signs.len())));
                }
                signs
            }
            (None, Some(n)) => SignVector::standard(n),
            (None, None) => return Err(Failure::input("either --n or --signs is required")),
        };
        if signs.is_empty() {
            return Err(Failure::input("n must be positive"));
        }
        Ok((t.d, signs))
    }

    /// Extreme rays of the prolongation cone, from the cache when possible.
    /// With a cap, only the rays slack on at most that many rows.
    fn rays(
        &self,
        j: &ProlongationMatrix,
        signs: &SignVector,
        cap: Option<usize>,
        deadline: Option<Instant>,
    ) -> Result<Vec<Ray>, Error> {
        if let Some(rays) = self.cache.as_ref().and_then(|c| c.load(j.d(), signs, cap)) {
            return Ok(rays);
        }
        let opts = DdOptions { order: self.config.dd_order, deadline, max_slack: cap, ..DdOptions::default() };
        let rays = extreme_rays_dd(&j_cone(j)?, &opts)?;
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.store(j.d(), signs, cap, &rays) {
                eprintln!("warning: cache write failed: {e}");
            }
        }
        Ok(rays)
    }

    fn min_rank(&self, d: usize, signs: &SignVector, deadline: Option<Instant>) -> Result<MinRankReport, Error> {
        if signs.len() < 2 || d < 1 {
            return Err(Error::InvalidInput(format!("need n >= 2 and d >= 1, got n={}, d={d}", signs.len())));
        }
        let j = build_signed_direct(d, signs);
        // Signed cones enumerate fully, matching the library.
        let report = if signs.is_standard() {
            min_rank_search(&j, signs.len(), |cap| self.rays(&j, signs, cap, deadline))?
        } else {
            min_rank_from_rays(&j, &self.rays(&j, signs, None, deadline)?)?
        };
        if self.verify() {
            verify_report(&report, (!signs.is_standard()).then_some(signs))?;
        }
        Ok(report)
    }

    fn jmat(&self, t: &Target) -> CliResult<()> {
        let (d, signs) = self.resolve(t)?;
        let j = build_signed_direct(d, &signs);
        if self.verify() && build_signed_recursive(d, &signs) != j {
            return Err(Failure { code: 2, message: "recursive and direct constructions differ".into() });
        }
        eprintln!("J: {} x {}", j.rows(), j.cols());
        self.emit(&match self.format(Format::Json) {
            Format::Json => format::jmat_json(&j),
            Format::Csv => format::jmat_csv(&j),
        })
    }

    fn vertices(&self, t: &Target, check: bool) -> CliResult<()> {
        let (d, signs) = self.resolve(t)?;
        let j = build_signed_direct(d, &signs);
        let rays = self.rays(&j, &signs, None, self.deadline())?;
        let trace = vec![Rational::from_integer(1.into()); j.cols()];
        let mut vertices = slice_to_vertices(&rays, &trace, &Rational::from_integer(1.into()))?;
        vertices.sort();
        if check {
            let (rows, rhs) = trace_slice_system(&j_cone(&j)?);
            let bad = vertices
                .par_iter()
                .position_first(|v| !matches!(certify_vertex(&rows, &rhs, &v.coords), Ok(true)));
            if let Some(i) = bad {
                return Err(Failure { code: 2, message: format!("vertex {i} failed certification") });
            }
        }
        eprintln!("vertices={}", vertices.len());
        let points: Vec<Vec<Rational>> = vertices.into_iter().map(|v| v.coords).collect();
        self.emit(&match self.format(Format::Json) {
            Format::Json => format::points_json(&points),
            Format::Csv => format::points_csv(&points),
        })
    }

    fn minrank(&self, t: &Target) -> CliResult<()> {
        let (d, signs) = self.resolve(t)?;
        let report = match self.min_rank(d, &signs, self.deadline()) {
            Err(Error::TimedOut) => {
                eprintln!("R=timeout");
                return Ok(());
            }
            r => r?,
        };
        match report.value {
            Some(v) => eprintln!("R={v}"),
            None => eprintln!("R=none (conjecture vacuous at this degree)"),
        }
        let signs_label = (!signs.is_standard()).then(|| signs.to_string());
        self.emit(&match self.format(Format::Json) {
            Format::Json => format::report_json(&report, signs_label.as_deref(), self.verify().then_some(true)),
            Format::Csv => {
                let points: Vec<Vec<Rational>> = report.witnesses.iter().map(|w| w.coords.clone()).collect();
                format::points_csv(&points)
            }
        })
    }

    fn table(&self, pairs: &[(usize, usize)], max_sum: Option<usize>) -> CliResult<()> {
        let mut pairs = pairs.to_vec();
        if let Some(s) = max_sum {
            for n in 2..s {
                for d in 2..=s.saturating_sub(n) {
                    pairs.push((n, d));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Failure::input("give --pairs or --max-sum"));
        }
        let mismatch = AtomicBool::new(false);
        let rows = reproduce_table_with(
            &pairs,
            self.workers,
            self.config.time_limit.map(|s| Duration::from_secs(s.get())),
            |n, d, deadline| {
                let r = self.min_rank(d, &SignVector::standard(n), deadline);
                if matches!(r, Err(Error::InternalInconsistency(_))) {
                    mismatch.store(true, Ordering::Relaxed);
                }
                r
            },
        );
        let entries: Vec<(usize, usize, Option<usize>)> =
            rows.iter().filter(|r| r.status == RowStatus::Ok).map(|r| (r.n, r.d, r.value())).collect();
        let checks = pattern_checks(&entries);
        for r in &rows {
            match (&r.status, r.value()) {
                (RowStatus::Ok, Some(v)) => eprintln!("{:>3} {:>2}  {v}", r.n, r.d),
                (RowStatus::Ok, None) => eprintln!("{:>3} {:>2}  none", r.n, r.d),
                (RowStatus::Error(e), _) => eprintln!("{:>3} {:>2}  error: {e}", r.n, r.d),
                (s, _) => eprintln!("{:>3} {:>2}  {}", r.n, r.d, s.label()),
            }
        }
        eprint!("{}", format::pattern_summary(&checks));
        let timing = !self.config.no_timing;
        self.emit(&match self.format(Format::Csv) {
            Format::Json => format::table_json(&rows, &checks, timing),
            Format::Csv => format::table_csv(&rows, timing),
        })?;
        if mismatch.load(Ordering::Relaxed) {
            return Err(Failure { code: 2, message: "verification failed for at least one row".into() });
        }
        Ok(())
    }

    fn check(&self, n: usize, d: usize, file: &PathBuf) -> CliResult<()> {
        let text = std::fs::read_to_string(file)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", file.display())))?;
        let h = format::read_herm_json(&text)?;
        let report = check_candidate_hermitian(n, d, &h)?;
        eprintln!("qualifies={} prolong_rank={}", report.qualifies, report.prolong_rank);
        self.emit(&match self.format(Format::Json) {
            Format::Json => format::candidate_json(&report),
            Format::Csv => format::candidate_csv(&report),
        })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let workers = cli
        .config
        .workers
        .map(NonZeroUsize::get)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Failure { code: 1, message: e.to_string() })?;
    let cache = match &cli.config.cache_dir {
        Some(dir) => Some(RayCache::open(dir).map_err(|e| Failure::input(format!("cache {}: {e}", dir.display())))?),
        None => None,
    };
    let runner = Runner { config: cli.config, workers, cache };
    match &cli.command {
        Command::Jmat(t) => runner.jmat(t),
        Command::Vertices { target, check } => runner.vertices(target, *check),
        Command::Minrank(t) => runner.minrank(t),
        Command::Table { pairs, max_sum } => runner.table(pairs, *max_sum),
        Command::Check { n, d, file } => runner.check(*n, *d, file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
