//! The `permstar` command line.
//!
//! Every subcommand writes its data to `--out` (or standard output when no
//! path is given) and prints a one-line summary with the headline value and
//! the wall time. The summary goes to standard output when the data goes to
//! a file, and to standard error otherwise, so piped data stays clean.
//!
//! Exit codes: 0 success, 1 invalid arguments or input, 2 solver failure,
//! 3 failed regression check.

use std::ffi::OsString;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use permstar_core::discrepancy::{local_discrepancy_map, star_discrepancy, BoxKind};
use permstar_core::optimizer::{build_problem, optimize, OptimizationProblem, DEFAULT_EPSILON};
use permstar_core::PointSet;

use crate::error::{Error, Result};
use crate::format;
use crate::generator::GeneratorSpec;
use crate::harness::{self, ExperimentRecord, Profile, RecordStore, RunConfig};
use crate::reference::{self, ReferenceTable};
use crate::report::ResultDocument;
use crate::WallClock;

#[derive(Parser, Debug)]
#[command(
    name = "permstar",
    version,
    about = "Point sets with low L∞ star discrepancy from fixed point orders"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated point set.
    Generate(GenerateArgs),
    /// Exact star discrepancy of a point-set file.
    Evaluate(EvaluateArgs),
    /// Optimise the coordinates of a point order.
    Optimize(OptimizeArgs),
    /// Open and closed local discrepancies over the critical grid (2D).
    Heatmap(HeatmapArgs),
    /// Optimise the Fibonacci order for a range of shifts.
    ShiftScan(ShiftScanArgs),
    /// Optimise every distinct Kronecker permutation of size n.
    Sweep(SweepArgs),
    /// Optimise a batch of seeded random permutations.
    RandomBatch(RandomBatchArgs),
    /// Compare results with the built-in reference values.
    Regress(RegressArgs),
    /// Reference curves c·ln(n)/n.
    Curves(CurvesArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenName {
    Fibonacci,
    Kronecker,
    Vdc,
    Sobol,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Txt,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Generator of the point set.
    #[arg(long = "gen", value_enum)]
    pub generator: Option<GenName>,
    /// Number of points.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub dim: u8,
    /// Start index of the Fibonacci or van der Corput sequence.
    #[arg(long, default_value_t = 0)]
    pub shift: u64,
    /// Initial Sobol' points to skip.
    #[arg(long, default_value_t = 0)]
    pub skip: u64,
    /// Kronecker parameter as an exact fraction p/q.
    #[arg(long, conflicts_with = "r")]
    pub rational: Option<String>,
    /// Kronecker parameter as a real number.
    #[arg(long)]
    pub r: Option<f64>,
    /// Seed of random permutations and of the optimizer's restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Build 3D Sobol' sets by lifting the 2D sequence.
    #[arg(long)]
    pub lift: bool,
}

impl GenArgs {
    fn given(&self) -> bool {
        self.generator.is_some()
    }

    /// Descriptor, point count and dimension.
    fn resolve(&self) -> Result<(GeneratorSpec, usize, usize)> {
        let g = self
            .generator
            .ok_or_else(|| Error::Invalid("--gen is required".into()))?;
        let n = self
            .n
            .ok_or_else(|| Error::Invalid("--n is required with --gen".into()))?;
        if n == 0 {
            return Err(Error::Invalid("--n must be at least 1".into()));
        }
        let dim = self.dim as usize;
        if g != GenName::Kronecker && (self.rational.is_some() || self.r.is_some()) {
            return Err(Error::Invalid(
                "--rational and --r only apply to --gen kronecker".into(),
            ));
        }
        if self.lift && g != GenName::Sobol {
            return Err(Error::Invalid("--lift only applies to --gen sobol".into()));
        }
        let spec = match g {
            GenName::Fibonacci => GeneratorSpec::Fibonacci { shift: self.shift },
            GenName::Vdc => GeneratorSpec::Vdc { shift: self.shift },
            GenName::Sobol => GeneratorSpec::Sobol {
                skip: self.skip,
                lifted: self.lift,
            },
            GenName::Random => GeneratorSpec::Random {
                seed: self.seed,
                stream: 0,
            },
            GenName::Kronecker => {
                let r = match (&self.rational, self.r) {
                    (Some(q), None) => q.trim().to_string(),
                    (None, Some(v)) => v.to_string(),
                    _ => {
                        return Err(Error::Invalid(
                            "--gen kronecker needs --rational p/q or --r <real>".into(),
                        ))
                    }
                };
                GeneratorSpec::Kronecker { r, interior: false }
            }
        };
        // surface parameter errors (e.g. q > n) before any work
        if let GeneratorSpec::Kronecker { .. } = spec {
            spec.kronecker_generator(n)?;
        }
        Ok((spec, n, dim))
    }

    fn point_set(&self) -> Result<(PointSet, GeneratorSpec)> {
        let (spec, n, dim) = self.resolve()?;
        Ok((spec.point_set(n, dim)?, spec))
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Minimum gap between consecutive coordinates.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Seconds per instance [default: 60 in 2D, 600 in 3D, 2 with --fast].
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Perturbation restarts per instance [default: 4, 1 with --fast].
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Short budget for quick runs.
    #[arg(long)]
    pub fast: bool,
}

impl SolveArgs {
    fn config(&self, dim: usize, seed: u64) -> Result<RunConfig> {
        let profile = if self.fast {
            Profile::Fast
        } else {
            Profile::Full
        };
        let mut c = RunConfig::profile(profile, dim);
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Invalid(format!(
                "--epsilon {} must lie in (0,1)",
                self.epsilon
            )));
        }
        c.epsilon = self.epsilon;
        if let Some(t) = self.time_limit {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::Invalid("--time-limit must be positive".into()));
            }
            c.time_limit = t;
        }
        if let Some(r) = self.restarts {
            c.restarts = r;
        }
        c.seed = seed;
        c.solver().validate()?;
        Ok(c)
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: GenArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Txt)]
    pub format: OutFormat,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Point-set file.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Txt)]
    pub format: OutFormat,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Point-set file whose order and coordinates start the optimisation.
    pub input: Option<PathBuf>,
    /// Permutation file; the run starts from evenly spaced coordinates.
    #[arg(long, conflicts_with = "input")]
    pub perm: Option<PathBuf>,
    #[command(flatten)]
    pub source: GenArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `json` writes the result document, `txt` the optimised point set.
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
}

#[derive(Args, Debug)]
pub struct HeatmapArgs {
    /// Point-set file (alternatively use --gen).
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub source: GenArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
}

#[derive(Args, Debug)]
pub struct BatchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads [default: available parallelism].
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Record store (JSONL, appended to). A summary CSV and a histogram CSV
    /// are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Histogram bins.
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Args, Debug)]
pub struct ShiftScanArgs {
    /// Shifts as `a..b` (half-open), `a..=b` or a single value.
    #[arg(long, default_value = "0..200")]
    pub shifts: String,
    #[command(flatten)]
    pub batch: BatchArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub batch: BatchArgs,
}

#[derive(Args, Debug)]
pub struct RandomBatchArgs {
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub dim: u8,
    #[command(flatten)]
    pub batch: BatchArgs,
}

#[derive(Args, Debug)]
pub struct RegressArgs {
    /// Record stores to compare (JSONL).
    #[arg(long)]
    pub records: Vec<PathBuf>,
    /// Reference tables to use: 2d, best-shift, 3d [default: all].
    #[arg(long)]
    pub table: Vec<String>,
    /// Allowed factor above optimised reference values.
    #[arg(long, default_value_t = 1.02)]
    pub slack: f64,
    /// Skip evaluating the generating sets of exact rows.
    #[arg(long)]
    pub no_exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 500)]
    pub n_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    let mut io = Io { stdout, stderr };
    match execute(cli.command, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    /// Writes data to `path` or standard output, then the summary line to
    /// whichever stream carries no data.
    fn emit(&mut self, path: Option<&Path>, data: &str, summary: &str) -> Result<()> {
        let stdout_err = |e| Error::io("<stdout>", e);
        match path {
            Some(p) => {
                format::write_string(p, data)?;
                writeln!(self.stdout, "{summary}").map_err(stdout_err)
            }
            None => {
                self.stdout.write_all(data.as_bytes()).map_err(stdout_err)?;
                writeln!(self.stderr, "{summary}").map_err(|e| Error::io("<stderr>", e))
            }
        }
    }

    fn summary(&mut self, summary: &str) -> Result<()> {
        writeln!(self.stdout, "{summary}").map_err(|e| Error::io("<stdout>", e))
    }
}

fn execute(cmd: Command, io: &mut Io) -> Result<()> {
    match cmd {
        Command::Generate(a) => generate(a, io),
        Command::Evaluate(a) => evaluate(a, io),
        Command::Optimize(a) => optimize_cmd(a, io),
        Command::Heatmap(a) => heatmap(a, io),
        Command::ShiftScan(a) => {
            let shifts = parse_range(&a.shifts)?;
            let b = a.batch;
            batch(&b, 2, io, |config, jobs, store| {
                harness::shift_scan(b.n, shifts, config, jobs, store)
            })
        }
        Command::Sweep(a) => {
            let b = a.batch;
            batch(&b, 2, io, |config, jobs, store| {
                harness::kronecker_sweep(b.n, config, jobs, store)
            })
        }
        Command::RandomBatch(a) => {
            let b = a.batch;
            let dim = a.dim as usize;
            batch(&b, dim, io, |config, jobs, store| {
                harness::random_batch(b.n, a.count, b.seed, dim, config, jobs, store)
            })
        }
        Command::Regress(a) => regress(a, io),
        Command::Curves(a) => curves(a, io),
    }
}

fn secs(t: Instant) -> String {
    format!("{:.3} s", t.elapsed().as_secs_f64())
}

fn generate(a: GenerateArgs, io: &mut Io) -> Result<()> {
    let t = Instant::now();
    let (ps, spec) = a.source.point_set()?;
    let data = match a.format {
        OutFormat::Txt => format::point_set_to_string(&ps),
        OutFormat::Csv => {
            let axes = ["x", "y", "z"];
            let mut s = axes[..ps.dim()].join(",");
            s.push('\n');
            for p in ps.points() {
                let row: Vec<String> = p.iter().map(|&v| format::fmt_f64(v)).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        OutFormat::Json => {
            let pts: Vec<&[f64]> = ps.points().collect();
            let doc = serde_json::json!({
                "generator": spec,
                "n": ps.len(),
                "dim": ps.dim(),
                "points": pts,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    let summary = format!(
        "{} {} n={} d={} ({})",
        spec.label(),
        spec.param(),
        ps.len(),
        ps.dim(),
        secs(t)
    );
    io.emit(a.out.as_deref(), &data, &summary)
}

fn evaluate(a: EvaluateArgs, io: &mut Io) -> Result<()> {
    let t = Instant::now();
    let ps = format::read_point_set(&a.input)?;
    let v = star_discrepancy(&ps);
    let summary = format!("{} (n={}, d={}, {})", v.value, ps.len(), ps.dim(), secs(t));
    match a.format {
        OutFormat::Json => {
            let doc = serde_json::json!({
                "n": ps.len(),
                "dim": ps.dim(),
                "star_discrepancy": v.value,
                "witness": {
                    "anchor": v.witness.anchor,
                    "corner": v.witness.corner,
                    "kind": match v.witness.kind { BoxKind::Open => "open", BoxKind::Closed => "closed" },
                },
                "wall_time_seconds": t.elapsed().as_secs_f64(),
            });
            let data = format!("{}\n", serde_json::to_string_pretty(&doc).unwrap());
            io.emit(a.out.as_deref(), &data, &summary)
        }
        OutFormat::Txt | OutFormat::Csv => match &a.out {
            Some(p) => io.emit(Some(p), &format!("{}\n", v.value), &summary),
            None => io.summary(&summary),
        },
    }
}

fn optimize_cmd(a: OptimizeArgs, io: &mut Io) -> Result<()> {
    let t = Instant::now();
    let sources = a.input.is_some() as u8 + a.perm.is_some() as u8 + a.source.given() as u8;
    if sources != 1 {
        return Err(Error::Invalid(
            "give exactly one of a point-set file, --perm or --gen".into(),
        ));
    }
    let (problem, dim): (OptimizationProblem, usize) = if let Some(p) = &a.perm {
        let perm = format::read_permutation(p)?;
        let dim = perm.dim();
        let config = a.solve.config(dim, a.source.seed)?;
        (OptimizationProblem::new(perm, config.epsilon, None)?, dim)
    } else {
        let ps = match &a.input {
            Some(path) => format::read_point_set(path)?,
            None => a.source.point_set()?.0,
        };
        if !matches!(ps.dim(), 2 | 3) {
            return Err(Error::Invalid(format!(
                "optimisation supports d = 2 or 3, got {}",
                ps.dim()
            )));
        }
        (build_problem(&ps, a.solve.epsilon, true)?, ps.dim())
    };
    let config = a.solve.config(dim, a.source.seed)?;
    let result = optimize(&problem, &config.solver(), &WallClock::start())?;
    let doc = ResultDocument::new(&problem, &result, t.elapsed().as_secs_f64());
    let data = match a.format {
        OutFormat::Json => doc.to_json(),
        OutFormat::Txt => format::point_set_to_string(&doc.point_set()?),
        OutFormat::Csv => return Err(Error::Invalid("optimize writes json or txt".into())),
    };
    let summary = format!(
        "f={} exact={} n={} d={} status={} iterations={} ({})",
        result.f,
        result.exact,
        problem.n(),
        dim,
        result.status.as_str(),
        result.iterations,
        secs(t)
    );
    io.emit(a.out.as_deref(), &data, &summary)
}

fn heatmap(a: HeatmapArgs, io: &mut Io) -> Result<()> {
    let t = Instant::now();
    if a.format != OutFormat::Csv {
        return Err(Error::Invalid("heatmaps are written as csv".into()));
    }
    let ps = match (&a.input, a.source.given()) {
        (Some(p), false) => format::read_point_set(p)?,
        (None, true) => a.source.point_set()?.0,
        _ => {
            return Err(Error::Invalid(
                "give exactly one of a point-set file or --gen".into(),
            ))
        }
    };
    let map = local_discrepancy_map(&ps)?;
    let summary = format!(
        "max local discrepancy {} over {}x{} grid (n={}, {})",
        map.max(),
        map.grid_x.len(),
        map.grid_y.len(),
        ps.len(),
        secs(t)
    );
    io.emit(a.out.as_deref(), &format::heatmap_to_csv(&map), &summary)
}

fn parse_range(s: &str) -> Result<Range<u64>> {
    let bad = || Error::Invalid(format!("cannot parse shift range {s:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let r = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..num(b)? + 1
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..num(b)?
    } else {
        let a = num(s)?;
        a..a + 1
    };
    if r.is_empty() {
        return Err(bad());
    }
    Ok(r)
}

/// Sibling path with `.jsonl` replaced by `suffix`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn batch(
    b: &BatchArgs,
    dim: usize,
    io: &mut Io,
    run: impl FnOnce(&RunConfig, usize, Option<&RecordStore>) -> Result<Vec<ExperimentRecord>>,
) -> Result<()> {
    let t = Instant::now();
    let config = b.solve.config(dim, b.seed)?;
    let jobs = b.jobs.unwrap_or_else(harness::default_jobs);
    if jobs == 0 {
        return Err(Error::Invalid("--jobs must be at least 1".into()));
    }
    let store = b.out.as_deref().map(RecordStore::open).transpose()?;
    let records = run(&config, jobs, store.as_ref())?;
    if let Some(path) = &b.out {
        format::write_string(
            &sibling(path, ".csv"),
            &harness::summary_csv(&harness::rank(records.clone())),
        )?;
        let f: Vec<f64> = records.iter().filter_map(|r| r.f).collect();
        format::write_string(
            &sibling(path, ".hist.csv"),
            &harness::histogram_csv(&harness::histogram(&f, b.bins)),
        )?;
    }
    let line = match (harness::best(&records), harness::summarize(&records)) {
        (Some(best), Some(s)) => format!(
            "best f={} ({} {}) median={} max={} runs={} failed={} ({})",
            best.f.unwrap(),
            best.label,
            best.param,
            s.median,
            s.max,
            s.count,
            s.failed,
            secs(t)
        ),
        _ => format!("no successful runs out of {} ({})", records.len(), secs(t)),
    };
    io.summary(&line)?;
    if records.iter().all(|r| !r.succeeded()) {
        let msg = records
            .iter()
            .find_map(|r| r.error.clone())
            .unwrap_or_else(|| "no instances".into());
        return Err(Error::Core(permstar_core::Error::SolverFailure(msg)));
    }
    Ok(())
}

fn regress(a: RegressArgs, io: &mut Io) -> Result<()> {
    let t = Instant::now();
    if a.slack.is_nan() || a.slack < 1.0 {
        return Err(Error::Invalid("--slack must be at least 1".into()));
    }
    let tables: Vec<ReferenceTable> = if a.table.is_empty() {
        ReferenceTable::all()
    } else {
        a.table
            .iter()
            .map(|name| {
                ReferenceTable::by_name(name).ok_or_else(|| {
                    Error::Invalid(format!("unknown table {name:?} (2d, best-shift, 3d)"))
                })
            })
            .collect::<Result<_>>()?
    };
    let mut measurements = Vec::new();
    for path in &a.records {
        measurements.extend(reference::measurements(&harness::load_records(path)?));
    }
    if !a.no_exact {
        for table in &tables {
            measurements.extend(reference::evaluate_exact_rows(table)?);
        }
    }
    let report = reference::regression_compare(&measurements, &tables, a.slack);
    let data = match a.format {
        OutFormat::Json => format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
        OutFormat::Csv | OutFormat::Txt => {
            let mut s =
                String::from("table,label,n,dim,kind,reference,achieved,matched,pass,soft\n");
            for r in &report.rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.table,
                    r.row.label,
                    r.row.n,
                    r.row.dim,
                    serde_json::to_value(r.row.kind).unwrap().as_str().unwrap(),
                    r.row.value,
                    r.achieved,
                    r.matched,
                    r.pass,
                    r.row.soft
                ));
            }
            s
        }
    };
    let failed: Vec<_> = report.failures().collect();
    let soft = report.rows.iter().filter(|r| !r.pass && r.row.soft).count();
    for r in &failed {
        let _ = writeln!(
            io.stderr,
            "FAIL {} n={} d={}: achieved {} vs reference {}",
            r.row.label, r.row.n, r.row.dim, r.achieved, r.row.value
        );
    }
    let summary = format!(
        "regression: {} rows, {} failed, {} soft mismatches, {} unmatched measurements ({})",
        report.rows.len(),
        failed.len(),
        soft,
        report.unmatched.len(),
        secs(t)
    );
    io.emit(a.out.as_deref(), &data, &summary)?;
    if !failed.is_empty() {
        return Err(Error::Regression(format!(
            "{} of {} rows failed",
            failed.len(),
            report.rows.len()
        )));
    }
    Ok(())
}

fn curves(a: CurvesArgs, io: &mut Io) -> Result<()> {
    let t = Instant::now();
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(Error::Invalid("need 1 ≤ --n-min ≤ --n-max".into()));
    }
    let mut s = String::from("n,0.2223*ln(n)/n,0.3*ln(n)/n\n");
    for n in a.n_min..=a.n_max {
        let l = (n as f64).ln() / n as f64;
        s.push_str(&format!("{n},{},{}\n", 0.2223 * l, 0.3 * l));
    }
    let summary = format!("curves for n={}..={} ({})", a.n_min, a.n_max, secs(t));
    io.emit(a.out.as_deref(), &s, &summary)
}
