//! Point sets, permutations and the tables that tie them together.
//!
//! Permutations are 1-indexed at every public boundary: `get(i)` takes
//! `i ∈ 1..=n` and returns a value in `1..=n`. Storage is 0-indexed.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};

/// Where a point set came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Output of a named generator, with its parameters rendered as text.
    Generated { name: String, params: String },
    /// Assembled from optimized coordinate families.
    Optimized,
    /// Read from a file or built by hand.
    External,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Generated { name, params } if params.is_empty() => f.write_str(name),
            Provenance::Generated { name, params } => write!(f, "{name}({params})"),
            Provenance::Optimized => f.write_str("optimized"),
            Provenance::External => f.write_str("external"),
        }
    }
}

/// `n ≥ 1` points in `[0,1]^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    provenance: Provenance,
    general_position: bool,
}

impl PointSet {
    /// Builds a point set from row-major coordinates.
    ///
    /// Rejects `dim == 0`, an empty set, a length that is not a multiple of
    /// `dim`, and any coordinate outside `[0,1]` (NaN included).
    pub fn new(dim: usize, coords: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if coords.is_empty() {
            return Err(invalid!("a point set needs at least one point"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(invalid!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            ));
        }
        if let Some(pos) = coords.iter().position(|c| !(0.0..=1.0).contains(c)) {
            return Err(invalid!(
                "coordinate {} of point {} is outside [0,1]: {}",
                pos % dim + 1,
                pos / dim + 1,
                coords[pos]
            ));
        }
        let general_position = (0..dim).all(|axis| {
            let mut v: Vec<f64> = coords.iter().skip(axis).step_by(dim).copied().collect();
            v.sort_by(f64::total_cmp);
            v.windows(2).all(|w| w[0] < w[1])
        });
        Ok(PointSet {
            dim,
            coords,
            provenance,
            general_position,
        })
    }

    /// Convenience constructor from a list of points.
    pub fn from_points<P: AsRef<[f64]>>(points: &[P], provenance: Provenance) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.as_ref().len());
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(invalid!(
                    "point {} has {} coordinates, expected {dim}",
                    i + 1,
                    p.len()
                ));
            }
            coords.extend_from_slice(p);
        }
        if points.is_empty() {
            return Err(invalid!("a point set needs at least one point"));
        }
        Self::new(dim, coords, provenance)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Values of one axis in point order.
    pub fn axis(&self, axis: usize) -> impl Iterator<Item = f64> + '_ {
        self.coords.iter().skip(axis).step_by(self.dim).copied()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// True when no two points share a value on any axis.
    pub fn is_general_position(&self) -> bool {
        self.general_position
    }
}

/// A bijection on `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n as u32).collect(),
        }
    }

    /// Builds from 1-based images `π(1), …, π(n)`.
    pub fn from_one_based(values: &[usize]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(invalid!("empty permutation"));
        }
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v > n {
                return Err(invalid!("π({}) = {v} is outside 1..={n}", i + 1));
            }
            if core::mem::replace(&mut seen[v - 1], true) {
                return Err(invalid!("value {v} appears twice"));
            }
            map.push((v - 1) as u32);
        }
        Ok(Permutation { map })
    }

    pub(crate) fn from_zero_based_unchecked(map: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = map.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i as u32 == v)
        });
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `π(i)` for `i ∈ 1..=n`.
    pub fn get(&self, i: usize) -> usize {
        self.map[i - 1] as usize + 1
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v as usize + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[u32] {
        &self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str(")")
    }
}

/// Rank permutations of the second and third coordinates, indexed by the
/// rank of the first coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation3D {
    pub sigma: Permutation,
    pub tau: Permutation,
}

impl Permutation3D {
    pub fn new(sigma: Permutation, tau: Permutation) -> Result<Self> {
        if sigma.len() != tau.len() {
            return Err(Error::DimensionMismatch {
                expected: sigma.len(),
                got: tau.len(),
            });
        }
        Ok(Permutation3D { sigma, tau })
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }
}

/// Prefix counts `C(i,j) = |{u ≤ i : π(u) ≤ j}|` over `0..=n` on every axis
/// (and the three-axis analogue for [`Permutation3D`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeCountTable {
    n: usize,
    axes: usize,
    data: Vec<u32>,
}

impl CumulativeCountTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    /// `C(i,j)` with `i, j ∈ 0..=n`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        debug_assert_eq!(self.axes, 2);
        self.data[i * (self.n + 1) + j]
    }

    /// `C(i,j,k)` with `i, j, k ∈ 0..=n`.
    #[inline]
    pub fn at3(&self, i: usize, j: usize, k: usize) -> u32 {
        debug_assert_eq!(self.axes, 3);
        let m = self.n + 1;
        self.data[(i * m + j) * m + k]
    }

    /// Checks the structural invariants: zero borders, `C(n,…,n) = n`,
    /// monotonicity and unit steps along the first axis.
    pub fn check_invariants(&self) -> bool {
        let m = self.n + 1;
        match self.axes {
            2 => {
                for i in 0..m {
                    for j in 0..m {
                        let c = self.at(i, j);
                        if (i == 0 || j == 0) && c != 0 {
                            return false;
                        }
                        if i > 0 {
                            let d = c.wrapping_sub(self.at(i - 1, j));
                            if d > 1 {
                                return false;
                            }
                        }
                        if j > 0 && c < self.at(i, j - 1) {
                            return false;
                        }
                    }
                }
                self.at(self.n, self.n) as usize == self.n
            }
            3 => {
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            let c = self.at3(i, j, k);
                            if (i == 0 || j == 0 || k == 0) && c != 0 {
                                return false;
                            }
                            if i > 0 && c.wrapping_sub(self.at3(i - 1, j, k)) > 1 {
                                return false;
                            }
                            if j > 0 && c < self.at3(i, j - 1, k) {
                                return false;
                            }
                            if k > 0 && c < self.at3(i, j, k - 1) {
                                return false;
                            }
                        }
                    }
                }
                self.at3(self.n, self.n, self.n) as usize == self.n
            }
            _ => false,
        }
    }
}

/// Sorted, strictly increasing coordinates `x_1 < … < x_n` in `[0,1]`.
/// The dummy `x_{n+1} = 1` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateFamily {
    values: Vec<f64>,
}

impl CoordinateFamily {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("empty coordinate family"));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid!("coordinate {v} is outside [0,1]"));
        }
        if let Some(k) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(invalid!(
                "coordinates are not strictly increasing at position {}",
                k + 1
            ));
        }
        Ok(CoordinateFamily { values })
    }

    /// Like [`new`](Self::new) but also demands consecutive gaps of at least
    /// `epsilon` (up to `1e-12` of rounding slack).
    pub fn with_min_gap(values: Vec<f64>, epsilon: f64) -> Result<Self> {
        let fam = Self::new(values)?;
        if fam.min_gap() < epsilon - 1e-12 {
            return Err(invalid!(
                "minimum gap {} is below epsilon {epsilon}",
                fam.min_gap()
            ));
        }
        Ok(fam)
    }

    /// Repairs arbitrary values into a family with gaps of at least
    /// `epsilon`: sort, clamp, then a forward sweep pushing values up and a
    /// backward sweep pulling them under 1.
    pub fn project(values: &[f64], epsilon: f64) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(invalid!("empty coordinate family"));
        }
        if !(epsilon > 0.0) || (n - 1) as f64 * epsilon >= 1.0 {
            return Err(invalid!(
                "epsilon {epsilon} is infeasible for {n} coordinates"
            ));
        }
        let mut w: Vec<f64> = values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        w.sort_by(f64::total_cmp);
        for i in 1..n {
            if w[i] < w[i - 1] + epsilon {
                w[i] = w[i - 1] + epsilon;
            }
        }
        if w[n - 1] > 1.0 {
            w[n - 1] = 1.0;
        }
        for i in (0..n - 1).rev() {
            if w[i] > w[i + 1] - epsilon {
                w[i] = w[i + 1] - epsilon;
            }
        }
        // (n-1)·ε < 1 keeps w[0] ≥ 0 up to rounding
        if w[0] < 0.0 {
            w[0] = 0.0;
        }
        Self::new(w)
    }

    /// Evenly spaced midpoints `(2i-1)/(2n)`.
    pub fn midpoints(n: usize) -> Self {
        let nf = n as f64;
        CoordinateFamily {
            values: (1..=n).map(|i| (2 * i - 1) as f64 / (2.0 * nf)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `x_i` for `i ∈ 1..=n+1`; index `n+1` is the dummy value 1.
    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        if i == self.values.len() + 1 {
            1.0
        } else {
            self.values[i - 1]
        }
    }

    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Indices of the points ordered by one axis, ties broken by original index.
fn order_by_axis(ps: &PointSet, axis: usize) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..ps.len() as u32).collect();
    idx.sort_by(|&a, &b| {
        ps.point(a as usize)[axis]
            .total_cmp(&ps.point(b as usize)[axis])
            .then(a.cmp(&b))
    });
    idx
}

/// Rank (0-based) of every point along one axis, ties broken by index.
fn ranks_on_axis(ps: &PointSet, axis: usize) -> Vec<u32> {
    let order = order_by_axis(ps, axis);
    let mut rank = vec![0u32; order.len()];
    for (r, &p) in order.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    rank
}

fn permutation_for_axis(ps: &PointSet, by_first: &[u32], axis: usize) -> Permutation {
    let rank = ranks_on_axis(ps, axis);
    Permutation::from_zero_based_unchecked(by_first.iter().map(|&p| rank[p as usize]).collect())
}

/// Rank permutation of a two-dimensional set: the point with the i-th
/// smallest first coordinate has the π(i)-th smallest second coordinate.
/// Equal coordinates are ranked by their position in the input.
pub fn extract_permutation(ps: &PointSet) -> Result<Permutation> {
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ps.dim(),
        });
    }
    let by_first = order_by_axis(ps, 0);
    Ok(permutation_for_axis(ps, &by_first, 1))
}

/// Three-dimensional analogue of [`extract_permutation`].
pub fn extract_permutation3d(ps: &PointSet) -> Result<Permutation3D> {
    if ps.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: ps.dim(),
        });
    }
    let by_first = order_by_axis(ps, 0);
    Ok(Permutation3D {
        sigma: permutation_for_axis(ps, &by_first, 1),
        tau: permutation_for_axis(ps, &by_first, 2),
    })
}

/// Builds `C(i,j)` in O(n²), one row at a time.
pub fn cumulative_counts(p: &Permutation) -> CumulativeCountTable {
    let n = p.len();
    let m = n + 1;
    let mut data = vec![0u32; m * m];
    for i in 1..=n {
        let pi = p.zero_based()[i - 1] as usize + 1;
        for j in 1..=n {
            data[i * m + j] = data[(i - 1) * m + j] + u32::from(j >= pi);
        }
    }
    CumulativeCountTable { n, axes: 2, data }
}

/// Builds `C(i,j,k) = |{u ≤ i : σ(u) ≤ j, τ(u) ≤ k}|` in O(n³).
pub fn cumulative_counts3d(p: &Permutation3D) -> CumulativeCountTable {
    let n = p.len();
    let m = n + 1;
    let layer = m * m;
    let mut data = vec![0u32; m * layer];
    for i in 1..=n {
        let s = p.sigma.zero_based()[i - 1] as usize + 1;
        let t = p.tau.zero_based()[i - 1] as usize + 1;
        let (prev, cur) = data.split_at_mut(i * layer);
        let prev = &prev[(i - 1) * layer..];
        let cur = &mut cur[..layer];
        cur.copy_from_slice(prev);
        for j in s..=n {
            for k in t..=n {
                cur[j * m + k] += 1;
            }
        }
    }
    CumulativeCountTable { n, axes: 3, data }
}

/// Point `i` becomes `(x_i, y_{π(i)})`.
pub fn assemble(x: &CoordinateFamily, y: &CoordinateFamily, p: &Permutation) -> Result<PointSet> {
    let n = p.len();
    for fam in [x, y] {
        if fam.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: fam.len(),
            });
        }
    }
    let mut coords = Vec::with_capacity(2 * n);
    for (i, &pi) in p.zero_based().iter().enumerate() {
        coords.push(x.values[i]);
        coords.push(y.values[pi as usize]);
    }
    PointSet::new(2, coords, Provenance::Optimized)
}

/// Point `i` becomes `(x_i, y_{σ(i)}, z_{τ(i)})`.
pub fn assemble3d(
    x: &CoordinateFamily,
    y: &CoordinateFamily,
    z: &CoordinateFamily,
    p: &Permutation3D,
) -> Result<PointSet> {
    let n = p.len();
    for fam in [x, y, z] {
        if fam.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: fam.len(),
            });
        }
    }
    let mut coords = Vec::with_capacity(3 * n);
    for i in 0..n {
        coords.push(x.values[i]);
        coords.push(y.values[p.sigma.zero_based()[i] as usize]);
        coords.push(z.values[p.tau.zero_based()[i] as usize]);
    }
    PointSet::new(3, coords, Provenance::Optimized)
}

/// Index convention for the coordinate added by [`lift`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftIndex {
    /// `i/n` for `i = 0..n-1`; the first point sits on the axis at 0.
    #[default]
    ZeroBased,
    /// `i/n` for `i = 1..n`; the last point sits at 1.
    OneBased,
}

impl LiftIndex {
    fn value(self, i: usize, n: usize) -> f64 {
        match self {
            LiftIndex::ZeroBased => i as f64 / n as f64,
            LiftIndex::OneBased => (i + 1) as f64 / n as f64,
        }
    }
}

fn check_half_open(values: &[f64]) -> Result<()> {
    if let Some(pos) = values.iter().position(|v| !(0.0..1.0).contains(v)) {
        return Err(invalid!(
            "value {} at position {} is outside [0,1)",
            values[pos],
            pos + 1
        ));
    }
    Ok(())
}

/// Lifts a one-dimensional sequence to the two-dimensional set
/// `{(i/n, v_i)}`.
pub fn lift(values: &[f64], convention: LiftIndex) -> Result<PointSet> {
    if values.is_empty() {
        return Err(invalid!("cannot lift an empty sequence"));
    }
    check_half_open(values)?;
    let n = values.len();
    let mut coords = Vec::with_capacity(2 * n);
    for (i, &v) in values.iter().enumerate() {
        coords.push(convention.value(i, n));
        coords.push(v);
    }
    PointSet::new(2, coords, Provenance::External)
}

/// Lifts a point set by one dimension, prepending `i/n` to point `i`.
pub fn lift_points(ps: &PointSet, convention: LiftIndex) -> Result<PointSet> {
    check_half_open(ps.coords())?;
    let n = ps.len();
    let d = ps.dim();
    let mut coords = Vec::with_capacity((d + 1) * n);
    for (i, p) in ps.points().enumerate() {
        coords.push(convention.value(i, n));
        coords.extend_from_slice(p);
    }
    let provenance = match ps.provenance() {
        Provenance::Generated { name, params } => Provenance::Generated {
            name: alloc::format!("{name}-lifted"),
            params: params.clone(),
        },
        other => other.clone(),
    };
    PointSet::new(d + 1, coords, provenance)
}
