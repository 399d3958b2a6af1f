//! Batch experiments: Fibonacci shift scans, sweeps over every Kronecker
//! permutation and batches of random permutations.
//!
//! Each instance becomes an [`ExperimentRecord`]. Records are appended to a
//! line-delimited JSON store as workers finish; the returned list is sorted
//! by record id (the generator index), so the outcome does not depend on
//! scheduling. Solver failures are recorded per row and never abort a batch.

use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use permstar_core::generators::{
    dedupe_permutations, enumerate_kronecker_generators, KroneckerParam,
};
use permstar_core::optimizer::{build_problem, optimize, SolverConfig, DEFAULT_EPSILON};
use permstar_core::star_discrepancy;

use crate::error::{Error, Result};
use crate::format::read_to_string;
use crate::generator::GeneratorSpec;
use crate::WallClock;

/// Per-instance budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// 60 s per 2D instance, 600 s per 3D instance, 4 restarts.
    Full,
    /// 2 s per instance, 1 restart.
    Fast,
}

impl Profile {
    pub fn time_limit(self, dim: usize) -> f64 {
        match (self, dim) {
            (Profile::Fast, _) => 2.0,
            (Profile::Full, 3) => 600.0,
            (Profile::Full, _) => 60.0,
        }
    }

    pub fn restarts(self) -> usize {
        match self {
            Profile::Full => 4,
            Profile::Fast => 1,
        }
    }
}

/// Solver settings stored with every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub epsilon: f64,
    pub time_limit: f64,
    pub max_outer_iterations: usize,
    pub improvement_tolerance: f64,
    pub restarts: usize,
    pub perturbation_scale: f64,
    pub seed: u64,
}

impl RunConfig {
    pub fn profile(profile: Profile, dim: usize) -> Self {
        let base = SolverConfig::default();
        RunConfig {
            epsilon: DEFAULT_EPSILON,
            time_limit: profile.time_limit(dim),
            max_outer_iterations: base.max_outer_iterations,
            improvement_tolerance: base.improvement_tolerance,
            restarts: profile.restarts(),
            perturbation_scale: base.perturbation_scale,
            seed: base.seed,
        }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            time_limit: self.time_limit,
            max_outer_iterations: self.max_outer_iterations,
            improvement_tolerance: self.improvement_tolerance,
            restarts: self.restarts,
            perturbation_scale: self.perturbation_scale,
            seed: self.seed,
        }
    }

    /// The same settings with the seed offset by a record id, so instances
    /// of one batch draw independent restart noise.
    fn for_instance(&self, id: u64) -> Self {
        RunConfig {
            seed: self.seed.wrapping_add(id),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub id: u64,
    pub experiment: String,
    pub generator: GeneratorSpec,
    pub label: String,
    pub param: String,
    pub n: usize,
    pub dim: usize,
    pub config: RunConfig,
    /// Star discrepancy of the generating set before optimisation.
    pub initial_exact: Option<f64>,
    pub f: Option<f64>,
    pub exact: Option<f64>,
    pub status: String,
    pub iterations: usize,
    pub restarts_used: usize,
    pub wall_time_seconds: f64,
    /// Seconds since the Unix epoch when the instance finished.
    pub timestamp: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ExperimentRecord {
    pub fn succeeded(&self) -> bool {
        self.f.is_some()
    }
}

/// Runs one instance: build the generating set, optimise its order starting
/// from its own coordinates, re-evaluate.
pub fn run_instance(
    experiment: &str,
    id: u64,
    generator: &GeneratorSpec,
    n: usize,
    dim: usize,
    config: &RunConfig,
) -> ExperimentRecord {
    let start = Instant::now();
    let mut rec = ExperimentRecord {
        id,
        experiment: experiment.to_string(),
        generator: generator.clone(),
        label: generator.label(),
        param: generator.param(),
        n,
        dim,
        config: config.clone(),
        initial_exact: None,
        f: None,
        exact: None,
        status: "failed".into(),
        iterations: 0,
        restarts_used: 0,
        wall_time_seconds: 0.0,
        timestamp: 0,
        error: None,
    };
    let outcome = (|| -> Result<_> {
        let ps = generator.point_set(n, dim)?;
        let initial = star_discrepancy(&ps).value;
        let problem = build_problem(&ps, config.epsilon, true)?;
        let result = optimize(&problem, &config.solver(), &WallClock::start())?;
        Ok((initial, result))
    })();
    match outcome {
        Ok((initial, r)) => {
            rec.initial_exact = Some(initial);
            rec.f = Some(r.f);
            rec.exact = Some(r.exact);
            rec.status = r.status.as_str().to_string();
            rec.iterations = r.iterations;
            rec.restarts_used = r.restarts_used;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec.wall_time_seconds = start.elapsed().as_secs_f64();
    rec.timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    rec
}

/// Re-runs a record from its descriptor and stored settings.
pub fn replay(record: &ExperimentRecord) -> ExperimentRecord {
    run_instance(
        &record.experiment,
        record.id,
        &record.generator,
        record.n,
        record.dim,
        &record.config,
    )
}

/// Append-only JSONL store shared by the workers of a batch.
pub struct RecordStore {
    path: PathBuf,
    out: Mutex<BufWriter<File>>,
}

impl RecordStore {
    /// Opens `path` for appending, creating it if needed.
    pub fn open(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        Ok(RecordStore {
            path: path.to_path_buf(),
            out: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn append(&self, record: &ExperimentRecord) -> Result<()> {
        let line = serde_json::to_string(record).expect("records serialize");
        let mut out = self.out.lock().unwrap_or_else(|e| e.into_inner());
        // flush per line so a crash loses at most the record in flight
        writeln!(out, "{line}")
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

pub fn load_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = read_to_string(path)?;
    let src = path.display().to_string();
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(&src, i + 1, e.to_string())))
        .collect()
}

/// Worker count when none is given.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs every `(id, generator)` pair on `jobs` worker threads.
pub fn run_batch(
    experiment: &str,
    items: &[(u64, GeneratorSpec)],
    n: usize,
    dim: usize,
    config: &RunConfig,
    jobs: usize,
    store: Option<&RecordStore>,
) -> Result<Vec<ExperimentRecord>> {
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(items.len()));
    let store_error = Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, items.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some((id, generator)) = items.get(k) else {
                    break;
                };
                let rec = run_instance(
                    experiment,
                    *id,
                    generator,
                    n,
                    dim,
                    &config.for_instance(*id),
                );
                if let Some(store) = store {
                    if let Err(e) = store.append(&rec) {
                        store_error.lock().unwrap().get_or_insert(e);
                    }
                }
                done.lock().unwrap().push(rec);
            });
        }
    });
    if let Some(e) = store_error.into_inner().unwrap() {
        return Err(e);
    }
    let mut records = done.into_inner().unwrap();
    records.sort_by_key(|r| r.id);
    Ok(records)
}

/// Optimises the Fibonacci order for every shift in `shifts`.
pub fn shift_scan(
    n: usize,
    shifts: Range<u64>,
    config: &RunConfig,
    jobs: usize,
    store: Option<&RecordStore>,
) -> Result<Vec<ExperimentRecord>> {
    if n < 2 {
        return Err(Error::Invalid("shift scans need n ≥ 2".into()));
    }
    let items: Vec<_> = shifts
        .map(|s| (s, GeneratorSpec::Fibonacci { shift: s }))
        .collect();
    run_batch("shift-scan", &items, n, 2, config, jobs, store)
}

/// Optimises every distinct Kronecker permutation of size `n`; the result
/// is ranked (see [`rank`]).
pub fn kronecker_sweep(
    n: usize,
    config: &RunConfig,
    jobs: usize,
    store: Option<&RecordStore>,
) -> Result<Vec<ExperimentRecord>> {
    let gens = enumerate_kronecker_generators(n)?;
    let items: Vec<_> = dedupe_permutations(&gens)?
        .into_iter()
        .enumerate()
        .map(|(k, (_, g))| {
            let interior = matches!(g.param, KroneckerParam::Interior(_));
            (
                k as u64,
                GeneratorSpec::Kronecker {
                    r: g.param.to_string(),
                    interior,
                },
            )
        })
        .collect();
    let records = run_batch("kronecker-sweep", &items, n, 2, config, jobs, store)?;
    Ok(rank(records))
}

/// Optimises `count` random permutations; draw `k` uses ChaCha stream `k`.
pub fn random_batch(
    n: usize,
    count: usize,
    seed: u64,
    dim: usize,
    config: &RunConfig,
    jobs: usize,
    store: Option<&RecordStore>,
) -> Result<Vec<ExperimentRecord>> {
    if count == 0 {
        return Err(Error::Invalid("count must be at least 1".into()));
    }
    let items: Vec<_> = (0..count as u64)
        .map(|k| (k, GeneratorSpec::Random { seed, stream: k }))
        .collect();
    run_batch("random-batch", &items, n, dim, config, jobs, store)
}

/// Sorts by `f` ascending (failures last), then by generator parameter,
/// then by id.
pub fn rank(mut records: Vec<ExperimentRecord>) -> Vec<ExperimentRecord> {
    records.sort_by(|a, b| {
        let fa = a.f.unwrap_or(f64::INFINITY);
        let fb = b.f.unwrap_or(f64::INFINITY);
        fa.total_cmp(&fb)
            .then(a.generator.param_key().total_cmp(&b.generator.param_key()))
            .then(a.id.cmp(&b.id))
    });
    records
}

pub fn best(records: &[ExperimentRecord]) -> Option<&ExperimentRecord> {
    records.iter().filter(|r| r.f.is_some()).min_by(|a, b| {
        a.f.unwrap()
            .total_cmp(&b.f.unwrap())
            .then(a.generator.param_key().total_cmp(&b.generator.param_key()))
            .then(a.id.cmp(&b.id))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub failed: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

/// Statistics of `f` over the successful records; `None` if there are none.
pub fn summarize(records: &[ExperimentRecord]) -> Option<Summary> {
    let mut f: Vec<f64> = records.iter().filter_map(|r| r.f).collect();
    if f.is_empty() {
        return None;
    }
    f.sort_by(f64::total_cmp);
    let m = f.len();
    let median = if m % 2 == 1 {
        f[m / 2]
    } else {
        0.5 * (f[m / 2 - 1] + f[m / 2])
    };
    Some(Summary {
        count: records.len(),
        failed: records.len() - m,
        min: f[0],
        median,
        max: f[m - 1],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width bins spanning exactly `[min, max]` of the values; the last
/// bin is closed. A constant sample gets a single degenerate bin.
pub fn histogram(values: &[f64], bins: usize) -> Vec<Bin> {
    if values.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return vec![Bin {
            lo,
            hi,
            count: values.len(),
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|k| Bin {
            lo: lo + k as f64 * width,
            hi: if k + 1 == bins {
                hi
            } else {
                lo + (k + 1) as f64 * width
            },
            count: 0,
        })
        .collect();
    for &v in values {
        let mut k = (((v - lo) / width) as usize).min(bins - 1);
        // keep bin membership consistent with the printed edges
        while k > 0 && v < out[k].lo {
            k -= 1;
        }
        while k + 1 < bins && v >= out[k].hi {
            k += 1;
        }
        out[k].count += 1;
    }
    out
}

pub fn histogram_csv(bins: &[Bin]) -> String {
    let mut s = String::from("bin_lo,bin_hi,count\n");
    for b in bins {
        writeln!(s, "{},{},{}", b.lo, b.hi, b.count).unwrap();
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn summary_csv(records: &[ExperimentRecord]) -> String {
    let mut s = String::from("label,param,n,dim,f,exact,status,seconds\n");
    let num = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in records {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            csv_field(&r.label),
            csv_field(&r.param),
            r.n,
            r.dim,
            num(r.f),
            num(r.exact),
            r.status,
            r.wall_time_seconds
        )
        .unwrap();
    }
    s
}
