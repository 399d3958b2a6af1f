//! Coordinate optimisation for a fixed point order.
//!
//! For a permutation π (or a pair in three dimensions) the discrepancy model
//! minimises `f` subject to
//!
//! * closed rows `C(i,j)/n − x_i·y_j ≤ f` for `i, j ∈ 1..=n`,
//! * open rows `x_i·y_j − C(i−1,j−1)/n ≤ f` for `i, j ∈ 1..=n+1`,
//! * `x_{n+1} = y_{n+1} = 1`, consecutive gaps `≥ ε`, coordinates in
//!   `[0,1]`, `f ≥ 0`,
//!
//! and the three-dimensional version uses triple products. With every family
//! but one fixed, each row bounds a single free coordinate from one side, so
//! for a given `f` feasibility is an interval per coordinate plus the gap
//! chain. Feasibility is monotone in `f`, which makes the block problem an
//! exact one-parameter search ([`solve_block_lp`]). [`optimize`] cycles over
//! the blocks until the objective stalls, then restarts from perturbations of
//! the best point found.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::discrepancy::star_discrepancy;
use crate::error::{invalid, Error, Result};
use crate::pointset::{
    assemble, assemble3d, cumulative_counts, cumulative_counts3d, extract_permutation,
    extract_permutation3d, CoordinateFamily, CumulativeCountTable, Permutation, Permutation3D,
    PointSet,
};

/// Gap between consecutive coordinates unless configured otherwise.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Source of elapsed time, in seconds since the run started.
pub trait Clock {
    fn elapsed(&self) -> f64;
}

/// A clock that never advances; time limits are then never hit.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> f64 {
        0.0
    }
}

impl<F: Fn() -> f64> Clock for F {
    fn elapsed(&self) -> f64 {
        self()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PermutationSpec {
    Two(Permutation),
    Three(Permutation3D),
}

impl PermutationSpec {
    pub fn len(&self) -> usize {
        match self {
            PermutationSpec::Two(p) => p.len(),
            PermutationSpec::Three(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            PermutationSpec::Two(_) => 2,
            PermutationSpec::Three(_) => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    n: usize,
    perm: PermutationSpec,
    counts: CumulativeCountTable,
    epsilon: f64,
    init: Option<Vec<CoordinateFamily>>,
}

impl OptimizationProblem {
    pub fn new(
        perm: PermutationSpec,
        epsilon: f64,
        init: Option<Vec<CoordinateFamily>>,
    ) -> Result<Self> {
        let n = perm.len();
        if n == 0 {
            return Err(invalid!("empty permutation"));
        }
        if !(epsilon > 0.0) || (n - 1) as f64 * epsilon >= 1.0 {
            return Err(invalid!(
                "epsilon {epsilon} must be positive with (n-1)·epsilon < 1 for n = {n}"
            ));
        }
        if let Some(init) = &init {
            if init.len() != perm.dim() {
                return Err(Error::DimensionMismatch {
                    expected: perm.dim(),
                    got: init.len(),
                });
            }
            for fam in init {
                if fam.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: fam.len(),
                    });
                }
                if fam.min_gap() < epsilon - 1e-12 {
                    return Err(invalid!("initial coordinates violate the epsilon gap"));
                }
            }
        }
        let counts = match &perm {
            PermutationSpec::Two(p) => cumulative_counts(p),
            PermutationSpec::Three(p) => cumulative_counts3d(p),
        };
        Ok(OptimizationProblem {
            n,
            perm,
            counts,
            epsilon,
            init,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.perm.dim()
    }

    pub fn permutation(&self) -> &PermutationSpec {
        &self.perm
    }

    pub fn counts(&self) -> &CumulativeCountTable {
        &self.counts
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn initial(&self) -> Option<&[CoordinateFamily]> {
        self.init.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Seconds, measured by the [`Clock`] passed to [`optimize`].
    pub time_limit: f64,
    pub max_outer_iterations: usize,
    /// A sweep over all blocks that improves `f` by less than this ends a run.
    pub improvement_tolerance: f64,
    /// Additional runs from perturbed starting points.
    pub restarts: usize,
    /// Restart noise is uniform in `±perturbation_scale / n` per coordinate.
    pub perturbation_scale: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_limit: 60.0,
            max_outer_iterations: 100_000,
            improvement_tolerance: 1e-10,
            restarts: 4,
            perturbation_scale: 0.25,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_limit > 0.0) {
            return Err(invalid!("time limit must be positive"));
        }
        if self.max_outer_iterations == 0 {
            return Err(invalid!("max_outer_iterations must be positive"));
        }
        if !(self.improvement_tolerance >= 1e-12) {
            return Err(invalid!("improvement tolerance must be at least 1e-12"));
        }
        if !(self.perturbation_scale > 0.0) {
            return Err(invalid!("perturbation scale must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    TimeLimit,
    IterationLimit,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::TimeLimit => "time_limit",
            Status::IterationLimit => "iteration_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// One family per axis.
    pub coordinates: Vec<CoordinateFamily>,
    /// Model objective at `coordinates`.
    pub f: f64,
    /// Star discrepancy of the assembled set.
    pub exact: f64,
    /// Outer sweeps over all runs.
    pub iterations: usize,
    pub restarts_used: usize,
    pub status: Status,
    /// Best objective after each outer sweep; non-increasing.
    pub trace: Vec<f64>,
}

fn check_feasible(fams: &[&CoordinateFamily], n: usize) -> Result<()> {
    for fam in fams {
        if fam.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: fam.len(),
            });
        }
    }
    Ok(())
}

/// Model objective for two families.
pub fn evaluate_model_f(
    x: &CoordinateFamily,
    y: &CoordinateFamily,
    counts: &CumulativeCountTable,
) -> Result<f64> {
    if counts.axes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: counts.axes(),
        });
    }
    check_feasible(&[x, y], counts.n())?;
    Ok(model_f2(x.values(), y.values(), counts))
}

/// Model objective for three families.
pub fn evaluate_model_f3(
    x: &CoordinateFamily,
    y: &CoordinateFamily,
    z: &CoordinateFamily,
    counts: &CumulativeCountTable,
) -> Result<f64> {
    if counts.axes() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: counts.axes(),
        });
    }
    check_feasible(&[x, y, z], counts.n())?;
    Ok(model_f3(x.values(), y.values(), z.values(), counts))
}

#[inline]
fn ext(v: &[f64], i: usize) -> f64 {
    if i == v.len() + 1 {
        1.0
    } else {
        v[i - 1]
    }
}

fn model_f2(x: &[f64], y: &[f64], c: &CumulativeCountTable) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let mut f = 0.0f64;
    for i in 1..=n + 1 {
        let xi = ext(x, i);
        for j in 1..=n + 1 {
            let vol = xi * ext(y, j);
            if i <= n && j <= n {
                f = f.max(c.at(i, j) as f64 / nf - vol);
            }
            f = f.max(vol - c.at(i - 1, j - 1) as f64 / nf);
        }
    }
    f
}

fn model_f3(x: &[f64], y: &[f64], z: &[f64], c: &CumulativeCountTable) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let mut f = 0.0f64;
    for i in 1..=n + 1 {
        let xi = ext(x, i);
        for j in 1..=n + 1 {
            let xy = xi * ext(y, j);
            for k in 1..=n + 1 {
                let vol = xy * ext(z, k);
                if i <= n && j <= n && k <= n {
                    f = f.max(c.at3(i, j, k) as f64 / nf - vol);
                }
                f = f.max(vol - c.at3(i - 1, j - 1, k - 1) as f64 / nf);
            }
        }
    }
    f
}

fn model_f(coords: &[Vec<f64>], c: &CumulativeCountTable) -> f64 {
    match coords {
        [x, y] => model_f2(x, y, c),
        [x, y, z] => model_f3(x, y, z, c),
        _ => unreachable!("only two or three axes"),
    }
}

/// Rows of one block problem, reduced to their Pareto frontiers.
///
/// For free coordinate `t_k`, a closed row `(a, c)` reads `c − a·t_k ≤ f`
/// and an open row reads `a·t_k − c ≤ f`.
struct BlockRows {
    closed: Vec<Vec<(f64, f64)>>,
    open: Vec<Vec<(f64, f64)>>,
    /// Lower bound on `f` from rows not involving the free family.
    floor: f64,
}

/// Keeps closed rows not dominated by a row with larger `c` and smaller `a`.
fn closed_frontier(rows: &mut Vec<(f64, f64)>, floor: &mut f64) {
    rows.retain(|&(a, c)| {
        if a <= 0.0 {
            *floor = floor.max(c);
            false
        } else {
            c > 0.0
        }
    });
    rows.sort_by(|p, q| q.1.total_cmp(&p.1).then(p.0.total_cmp(&q.0)));
    let mut min_a = f64::INFINITY;
    rows.retain(|&(a, _)| {
        if a < min_a {
            min_a = a;
            true
        } else {
            false
        }
    });
}

/// Keeps open rows not dominated by a row with smaller `c` and larger `a`.
fn open_frontier(rows: &mut Vec<(f64, f64)>) {
    rows.retain(|&(a, _)| a > 0.0);
    rows.sort_by(|p, q| p.1.total_cmp(&q.1).then(q.0.total_cmp(&p.0)));
    let mut max_a = 0.0;
    rows.retain(|&(a, _)| {
        if a > max_a {
            max_a = a;
            true
        } else {
            false
        }
    });
}

fn block_rows(coords: &[Vec<f64>], counts: &CumulativeCountTable, free: usize) -> BlockRows {
    let n = counts.n();
    let nf = n as f64;
    let d = coords.len();
    let mut closed = vec![Vec::new(); n];
    let mut open = vec![Vec::new(); n];
    let mut floor = 0.0f64;

    let count = |idx: &[usize; 3]| -> f64 {
        let v = if d == 2 {
            counts.at(idx[0], idx[1])
        } else {
            counts.at3(idx[0], idx[1], idx[2])
        };
        v as f64 / nf
    };

    let others: Vec<usize> = (0..d).filter(|&a| a != free).collect();
    // enumerate fixed-axis index tuples in 1..=n+1
    let fixed_tuples: Vec<([usize; 2], f64)> = if d == 2 {
        (1..=n + 1)
            .map(|i| ([i, 0], ext(&coords[others[0]], i)))
            .collect()
    } else {
        let mut v = Vec::with_capacity((n + 1) * (n + 1));
        for i in 1..=n + 1 {
            let a = ext(&coords[others[0]], i);
            for j in 1..=n + 1 {
                v.push(([i, j], a * ext(&coords[others[1]], j)));
            }
        }
        v
    };

    for k in 1..=n + 1 {
        for &(fixed, a) in &fixed_tuples {
            let mut hi = [0usize; 3];
            let mut lo = [0usize; 3];
            hi[free] = k;
            lo[free] = k - 1;
            for (slot, &axis) in others.iter().enumerate() {
                hi[axis] = fixed[slot];
                lo[axis] = fixed[slot] - 1;
            }
            let inner = fixed.iter().take(d - 1).all(|&t| t <= n);
            if k <= n {
                if inner {
                    closed[k - 1].push((a, count(&hi)));
                }
                open[k - 1].push((a, count(&lo)));
            } else {
                // free coordinate is the dummy 1
                floor = floor.max(a - count(&lo));
            }
        }
    }
    for rows in closed.iter_mut() {
        closed_frontier(rows, &mut floor);
    }
    for rows in open.iter_mut() {
        open_frontier(rows);
    }
    BlockRows {
        closed,
        open,
        floor,
    }
}

impl BlockRows {
    fn bounds(&self, k: usize, f: f64) -> (f64, f64) {
        let mut lo = 0.0f64;
        for &(a, c) in &self.closed[k] {
            if c <= f {
                break; // sorted by c descending
            }
            lo = lo.max((c - f) / a);
        }
        let mut hi = 1.0f64;
        for &(a, c) in &self.open[k] {
            hi = hi.min((f + c) / a);
        }
        (lo, hi)
    }

    /// Lowest feasible chain at `f`, if any.
    fn lowest_chain(&self, f: f64, eps: f64, out: &mut Vec<f64>) -> bool {
        out.clear();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..self.closed.len() {
            let (lo, hi) = self.bounds(k, f);
            let v = if k == 0 { lo } else { lo.max(prev + eps) };
            if v > hi {
                return false;
            }
            out.push(v);
            prev = v;
        }
        true
    }

    fn highest_chain(&self, f: f64, eps: f64) -> Vec<f64> {
        let n = self.closed.len();
        let mut out = vec![0.0; n];
        let mut next = f64::INFINITY;
        for k in (0..n).rev() {
            let (_, hi) = self.bounds(k, f);
            let v = if k == n - 1 { hi } else { hi.min(next - eps) };
            out[k] = v;
            next = v;
        }
        out
    }
}

/// Exactly minimises the model over one free family with the others fixed.
///
/// `coords` holds every family (one per axis); the entry at `free` is
/// ignored. Returns the optimal family and the optimal objective of the
/// block problem. Among optimal families the one halfway between the
/// lowest and the highest feasible chain is returned.
pub fn solve_block_lp(
    coords: &[CoordinateFamily],
    free: usize,
    counts: &CumulativeCountTable,
    epsilon: f64,
) -> Result<(CoordinateFamily, f64)> {
    let d = coords.len();
    if d != counts.axes() || free >= d {
        return Err(Error::DimensionMismatch {
            expected: counts.axes(),
            got: d,
        });
    }
    let n = counts.n();
    for fam in coords {
        if fam.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: fam.len(),
            });
        }
    }
    if !(epsilon > 0.0) || (n - 1) as f64 * epsilon >= 1.0 {
        return Err(invalid!("epsilon {epsilon} is infeasible for n = {n}"));
    }
    let raw: Vec<Vec<f64>> = coords.iter().map(|c| c.values().to_vec()).collect();
    let (values, f) = solve_block(&raw, free, counts, epsilon)?;
    Ok((CoordinateFamily::new(values)?, f))
}

fn solve_block(
    coords: &[Vec<f64>],
    free: usize,
    counts: &CumulativeCountTable,
    eps: f64,
) -> Result<(Vec<f64>, f64)> {
    let rows = block_rows(coords, counts, free);
    let mut chain = Vec::with_capacity(counts.n());
    let mut lo = rows.floor;
    let mut hi;
    if rows.lowest_chain(lo, eps, &mut chain) {
        hi = lo;
    } else {
        hi = 1.0f64.max(lo);
        if !rows.lowest_chain(hi, eps, &mut chain) {
            return Err(Error::Infeasible);
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if rows.lowest_chain(mid, eps, &mut chain) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !rows.lowest_chain(hi, eps, &mut chain) {
            return Err(Error::SolverFailure(
                "lost feasibility at the bisection end point".into(),
            ));
        }
    }
    let top = rows.highest_chain(hi, eps);
    let mut out: Vec<f64> = chain
        .iter()
        .zip(&top)
        .map(|(&a, &b)| (0.5 * (a + b)).clamp(0.0, 1.0))
        .collect();
    // halving can shave an ulp off a gap of exactly eps
    for k in 1..out.len() {
        if out[k] - out[k - 1] < eps {
            out[k] = chain[k].max(out[k - 1] + eps);
        }
    }
    if out.windows(2).any(|w| !(w[0] < w[1])) || out.iter().any(|v| !(0.0..=1.0).contains(v)) {
        out = chain;
    }
    Ok((out, hi))
}

/// The block problem of [`solve_block_lp`] written out row by row for the
/// dense simplex in [`crate::lp`]: variables `t_1..t_n` (the free family)
/// and `f`. Builds O(n^d) rows, so only small instances are practical.
pub fn solve_block_simplex(
    coords: &[CoordinateFamily],
    free: usize,
    counts: &CumulativeCountTable,
    epsilon: f64,
) -> Result<(CoordinateFamily, f64)> {
    use crate::lp::{Cmp, LinearProgram};

    let d = coords.len();
    let n = counts.n();
    if d != counts.axes() || free >= d || coords.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: counts.axes(),
            got: d,
        });
    }
    let nf = n as f64;
    let fv = n;
    let mut lp = LinearProgram::new(n + 1);
    lp.set_objective(fv, 1.0);
    for k in 0..n {
        lp.set_bounds(k, 0.0, 1.0);
    }
    for k in 0..n.saturating_sub(1) {
        lp.add_row(&[(k + 1, 1.0), (k, -1.0)], Cmp::Ge, epsilon);
    }

    let mut idx = [1usize; 3];
    loop {
        let fixed: f64 = (0..d)
            .filter(|&a| a != free)
            .map(|a| coords[a].get(idx[a]))
            .product();
        let t = idx[free];
        let inner = idx[..d].iter().all(|&v| v <= n);
        let (hi, lo) = if d == 2 {
            (
                if inner { counts.at(idx[0], idx[1]) } else { 0 },
                counts.at(idx[0] - 1, idx[1] - 1),
            )
        } else {
            (
                if inner {
                    counts.at3(idx[0], idx[1], idx[2])
                } else {
                    0
                },
                counts.at3(idx[0] - 1, idx[1] - 1, idx[2] - 1),
            )
        };
        let (hi, lo) = (hi as f64 / nf, lo as f64 / nf);
        if t <= n {
            let var = t - 1;
            // c - a t ≤ f   and   a t - c ≤ f
            if inner {
                lp.add_row(&[(var, -fixed), (fv, -1.0)], Cmp::Le, -hi);
            }
            lp.add_row(&[(var, fixed), (fv, -1.0)], Cmp::Le, lo);
        } else {
            lp.add_row(&[(fv, 1.0)], Cmp::Ge, fixed - lo);
        }

        let mut a = d;
        loop {
            if a == 0 {
                let sol = lp.solve()?;
                let values: Vec<f64> = sol.x[..n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
                return Ok((CoordinateFamily::new(values)?, sol.x[fv]));
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] <= n + 1 {
                break;
            }
            idx[a] = 1;
        }
    }
}

struct Run {
    coords: Vec<Vec<f64>>,
    f: f64,
    trace: Vec<f64>,
    iterations: usize,
    status: Status,
}

fn descend(
    problem: &OptimizationProblem,
    config: &SolverConfig,
    clock: &dyn Clock,
    mut coords: Vec<Vec<f64>>,
    iteration_budget: usize,
) -> Result<Run> {
    let d = coords.len();
    let mut f = model_f(&coords, &problem.counts);
    let mut trace = vec![f];
    let mut iterations = 0;
    let status = loop {
        if iterations >= iteration_budget {
            break Status::IterationLimit;
        }
        if clock.elapsed() >= config.time_limit {
            break Status::TimeLimit;
        }
        let start = f;
        for axis in 0..d {
            let (values, _) = solve_block(&coords, axis, &problem.counts, problem.epsilon)?;
            let old = core::mem::replace(&mut coords[axis], values);
            let f_new = model_f(&coords, &problem.counts);
            if f_new <= f {
                f = f_new;
            } else {
                coords[axis] = old;
            }
        }
        iterations += 1;
        trace.push(f);
        if start - f < config.improvement_tolerance {
            break Status::Converged;
        }
    };
    Ok(Run {
        coords,
        f,
        trace,
        iterations,
        status,
    })
}

fn perturb(
    coords: &[Vec<f64>],
    scale: f64,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    let n = coords[0].len();
    let amp = scale / n as f64;
    coords
        .iter()
        .map(|fam| {
            let noisy: Vec<f64> = fam
                .iter()
                .map(|&v| {
                    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                    v + amp * (2.0 * u - 1.0)
                })
                .collect();
            CoordinateFamily::project(&noisy, eps).map(CoordinateFamily::into_values)
        })
        .collect()
}

/// Block-coordinate descent with perturbation restarts.
///
/// The first run starts from the problem's initial coordinates (evenly
/// spaced midpoints when none are given). Each of the `config.restarts`
/// further runs starts from a random perturbation of the best point found so
/// far. The best run wins; ties go to the earlier run.
pub fn optimize(
    problem: &OptimizationProblem,
    config: &SolverConfig,
    clock: &dyn Clock,
) -> Result<OptimizationResult> {
    config.validate()?;
    let n = problem.n;
    let d = problem.dim();
    let init: Vec<Vec<f64>> = match &problem.init {
        Some(fams) => fams.iter().map(|f| f.values().to_vec()).collect(),
        None => (0..d)
            .map(|_| CoordinateFamily::midpoints(n).into_values())
            .collect(),
    };

    let mut best = descend(problem, config, clock, init, config.max_outer_iterations)?;
    let mut iterations = best.iterations;
    let mut status = best.status;
    let mut restarts_used = 0;
    let mut trace = best.trace.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for _ in 0..config.restarts {
        if status == Status::TimeLimit || clock.elapsed() >= config.time_limit {
            status = Status::TimeLimit;
            break;
        }
        if iterations >= config.max_outer_iterations {
            status = Status::IterationLimit;
            break;
        }
        let start = perturb(
            &best.coords,
            config.perturbation_scale,
            problem.epsilon,
            &mut rng,
        )?;
        let run = descend(
            problem,
            config,
            clock,
            start,
            config.max_outer_iterations - iterations,
        )?;
        restarts_used += 1;
        iterations += run.iterations;
        if run.status != Status::Converged {
            status = run.status;
        }
        // overall trace records the best value after every sweep
        let incumbent = best.f;
        trace.extend(run.trace.iter().skip(1).map(|&v| v.min(incumbent)));
        if run.f < best.f {
            let last = *trace.last().unwrap();
            debug_assert!(last <= run.f);
            best = run;
        }
    }

    let coordinates = best
        .coords
        .into_iter()
        .map(CoordinateFamily::new)
        .collect::<Result<Vec<_>>>()?;
    let exact = star_discrepancy(&assemble_problem(problem, &coordinates)?).value;
    Ok(OptimizationResult {
        coordinates,
        f: best.f,
        exact,
        iterations,
        restarts_used,
        status,
        trace,
    })
}

/// Point set for `coords` under the problem's permutation(s).
pub fn assemble_problem(
    problem: &OptimizationProblem,
    coords: &[CoordinateFamily],
) -> Result<PointSet> {
    match (&problem.perm, coords) {
        (PermutationSpec::Two(p), [x, y]) => assemble(x, y, p),
        (PermutationSpec::Three(p), [x, y, z]) => assemble3d(x, y, z, p),
        _ => Err(Error::DimensionMismatch {
            expected: problem.dim(),
            got: coords.len(),
        }),
    }
}

/// Extracts the permutation(s) of `ps` and, optionally, seeds the initial
/// coordinates from its sorted coordinates repaired to the `epsilon` gap.
pub fn build_problem(
    ps: &PointSet,
    epsilon: f64,
    use_coords_as_init: bool,
) -> Result<OptimizationProblem> {
    let perm = match ps.dim() {
        2 => PermutationSpec::Two(extract_permutation(ps)?),
        3 => PermutationSpec::Three(extract_permutation3d(ps)?),
        d => return Err(Error::UnsupportedDimension(d)),
    };
    let init = if use_coords_as_init {
        let fams = (0..ps.dim())
            .map(|axis| {
                let v: Vec<f64> = ps.axis(axis).collect();
                CoordinateFamily::project(&v, epsilon)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(fams)
    } else {
        None
    };
    OptimizationProblem::new(perm, epsilon, init)
}
