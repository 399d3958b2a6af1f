//! Exact L∞ star discrepancy.
//!
//! The supremum over anchored boxes `[0,q)` is attained on the critical
//! grid: on each axis, the distinct coordinates of the set together with 1.
//! At every grid anchor `q` two local discrepancies are evaluated,
//!
//! * open:   `λ([0,q)) − |P ∩ [0,q)| / n`  (strict inclusion, too few points)
//! * closed: `|P ∩ [0,q]| / n − λ([0,q))`  (non-strict, too many points)
//!
//! and the star discrepancy is the largest of them. Counting goes through a
//! d-dimensional prefix-sum table over grid ranks, so the whole grid costs
//! O(n^d) after sorting.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// Which of the two box families a local discrepancy belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxKind {
    Open,
    Closed,
}

/// An anchored box on the critical grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxWitness {
    /// Grid index per axis (0-based into that axis's grid).
    pub anchor: Vec<usize>,
    /// Upper corner `q` of the box.
    pub corner: Vec<f64>,
    pub kind: BoxKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyValue {
    pub value: f64,
    pub witness: BoxWitness,
}

/// Per-axis critical grid and the prefix-count table over it.
struct Grid {
    n: usize,
    axes: Vec<Vec<f64>>,
    /// Strides of the (m_k + 1)-sized prefix table.
    strides: Vec<usize>,
    /// `prefix[a] = |{p : rank_k(p) < a_k for all k}|`.
    prefix: Vec<u32>,
}

impl Grid {
    fn build(ps: &PointSet) -> Grid {
        let n = ps.len();
        let d = ps.dim();
        let axes: Vec<Vec<f64>> = (0..d)
            .map(|k| {
                let mut v: Vec<f64> = ps.axis(k).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                if *v.last().unwrap() < 1.0 {
                    v.push(1.0);
                }
                v
            })
            .collect();

        let mut strides = vec![1usize; d];
        for k in (0..d.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (axes[k + 1].len() + 1);
        }
        let size = strides[0] * (axes[0].len() + 1);
        let mut prefix = vec![0u32; size];

        for p in ps.points() {
            let mut off = 0;
            for k in 0..d {
                // grid contains every coordinate exactly
                let r = axes[k].partition_point(|&g| g < p[k]);
                off += (r + 1) * strides[k];
            }
            prefix[off] += 1;
        }
        // cumulative sums along each axis in turn
        for k in 0..d {
            let len_k = axes[k].len() + 1;
            let stride = strides[k];
            for idx in 0..size {
                let a_k = (idx / stride) % len_k;
                if a_k > 0 {
                    prefix[idx] += prefix[idx - stride];
                }
            }
        }
        Grid {
            n,
            axes,
            strides,
            prefix,
        }
    }

    fn dim(&self) -> usize {
        self.axes.len()
    }

    #[inline]
    fn open_count(&self, anchor: &[usize]) -> u32 {
        let off: usize = anchor.iter().zip(&self.strides).map(|(a, s)| a * s).sum();
        self.prefix[off]
    }

    #[inline]
    fn closed_count(&self, anchor: &[usize]) -> u32 {
        let off: usize = anchor
            .iter()
            .zip(&self.strides)
            .map(|(a, s)| (a + 1) * s)
            .sum();
        self.prefix[off]
    }

    fn volume(&self, anchor: &[usize]) -> f64 {
        anchor
            .iter()
            .zip(&self.axes)
            .fold(1.0, |v, (&a, axis)| v * axis[a])
    }

    /// Visits every anchor in lexicographic order.
    fn for_each_anchor(&self, mut f: impl FnMut(&[usize], f64, f64)) {
        let d = self.dim();
        let nf = self.n as f64;
        let mut anchor = vec![0usize; d];
        loop {
            let vol = self.volume(&anchor);
            let open = vol - self.open_count(&anchor) as f64 / nf;
            let closed = self.closed_count(&anchor) as f64 / nf - vol;
            f(&anchor, open, closed);

            let mut k = d;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                anchor[k] += 1;
                if anchor[k] < self.axes[k].len() {
                    break;
                }
                anchor[k] = 0;
            }
        }
    }

    fn witness(&self, anchor: &[usize], kind: BoxKind) -> BoxWitness {
        BoxWitness {
            anchor: anchor.to_vec(),
            corner: anchor
                .iter()
                .zip(&self.axes)
                .map(|(&a, axis)| axis[a])
                .collect(),
            kind,
        }
    }
}

/// Exact star discrepancy of `ps`, with the box attaining it.
///
/// Among equal maxima the lexicographically smallest anchor wins, open
/// before closed at the same anchor.
pub fn star_discrepancy(ps: &PointSet) -> DiscrepancyValue {
    let grid = Grid::build(ps);
    let mut best = f64::NEG_INFINITY;
    let mut best_anchor = Vec::new();
    let mut best_kind = BoxKind::Open;
    grid.for_each_anchor(|anchor, open, closed| {
        if open > best {
            best = open;
            best_anchor.clear();
            best_anchor.extend_from_slice(anchor);
            best_kind = BoxKind::Open;
        }
        if closed > best {
            best = closed;
            best_anchor.clear();
            best_anchor.extend_from_slice(anchor);
            best_kind = BoxKind::Closed;
        }
    });
    DiscrepancyValue {
        value: best,
        witness: grid.witness(&best_anchor, best_kind),
    }
}

/// Recounts the local discrepancy of a single box directly from the points.
pub fn evaluate_box(ps: &PointSet, witness: &BoxWitness) -> f64 {
    let q = &witness.corner;
    let count = match witness.kind {
        BoxKind::Open => ps
            .points()
            .filter(|p| p.iter().zip(q).all(|(c, b)| c < b))
            .count(),
        BoxKind::Closed => ps
            .points()
            .filter(|p| p.iter().zip(q).all(|(c, b)| c <= b))
            .count(),
    };
    let vol = q.iter().fold(1.0, |v, &c| v * c);
    let frac = count as f64 / ps.len() as f64;
    match witness.kind {
        BoxKind::Open => vol - frac,
        BoxKind::Closed => frac - vol,
    }
}

/// Open and closed local discrepancies over the full two-dimensional grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDiscrepancyMap {
    pub n: usize,
    pub grid_x: Vec<f64>,
    pub grid_y: Vec<f64>,
    /// Row-major, `open[i * grid_y.len() + j]`.
    pub open: Vec<f64>,
    pub closed: Vec<f64>,
}

impl LocalDiscrepancyMap {
    pub fn open_at(&self, i: usize, j: usize) -> f64 {
        self.open[i * self.grid_y.len() + j]
    }

    pub fn closed_at(&self, i: usize, j: usize) -> f64 {
        self.closed[i * self.grid_y.len() + j]
    }

    /// Largest entry over both tables.
    pub fn max(&self) -> f64 {
        self.open
            .iter()
            .chain(&self.closed)
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn local_discrepancy_map(ps: &PointSet) -> Result<LocalDiscrepancyMap> {
    if ps.dim() != 2 {
        return Err(Error::UnsupportedDimension(ps.dim()));
    }
    let grid = Grid::build(ps);
    let cells = grid.axes[0].len() * grid.axes[1].len();
    let mut open = Vec::with_capacity(cells);
    let mut closed = Vec::with_capacity(cells);
    grid.for_each_anchor(|_, o, c| {
        open.push(o);
        closed.push(c);
    });
    let mut axes = grid.axes.into_iter();
    Ok(LocalDiscrepancyMap {
        n: ps.len(),
        grid_x: axes.next().unwrap(),
        grid_y: axes.next().unwrap(),
        open,
        closed,
    })
}

/// Brute-force reference: every combination of candidate coordinates
/// (all point coordinates plus 1 on each axis, duplicates kept), every point
/// tested against every box. O(n^(d+1)); meant for small sets in tests.
pub fn oracle_star_discrepancy(ps: &PointSet) -> f64 {
    let n = ps.len();
    let d = ps.dim();
    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut c = Vec::with_capacity(n + 1);
        for i in 0..n {
            c.push(ps.point(i)[k]);
        }
        c.push(1.0);
        candidates.push(c);
    }

    let mut worst = 0.0f64;
    let mut pick = vec![0usize; d];
    let mut q = vec![0.0f64; d];
    'outer: loop {
        for k in 0..d {
            q[k] = candidates[k][pick[k]];
        }
        let mut volume = 1.0;
        for &c in &q {
            volume *= c;
        }
        let mut inside_open = 0usize;
        let mut inside_closed = 0usize;
        for i in 0..n {
            let p = ps.point(i);
            let mut lt = true;
            let mut le = true;
            for k in 0..d {
                if !(p[k] < q[k]) {
                    lt = false;
                }
                if !(p[k] <= q[k]) {
                    le = false;
                }
            }
            if lt {
                inside_open += 1;
            }
            if le {
                inside_closed += 1;
            }
        }
        let a = volume - inside_open as f64 / n as f64;
        let b = inside_closed as f64 / n as f64 - volume;
        if a > worst {
            worst = a;
        }
        if b > worst {
            worst = b;
        }

        let mut k = d;
        while k > 0 {
            k -= 1;
            pick[k] += 1;
            if pick[k] <= n {
                continue 'outer;
            }
            pick[k] = 0;
        }
        break;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::Provenance;

    fn ps(dim: usize, coords: &[f64]) -> PointSet {
        PointSet::new(dim, coords.to_vec(), Provenance::External).unwrap()
    }

    #[test]
    fn single_point_center() {
        let p = ps(2, &[0.5, 0.5]);
        let v = star_discrepancy(&p);
        assert_eq!(v.value, 0.75);
        assert_eq!(v.witness.kind, BoxKind::Closed);
        assert_eq!(oracle_star_discrepancy(&p), 0.75);
    }

    #[test]
    fn single_point_corner() {
        let p = ps(2, &[1.0, 1.0]);
        let v = star_discrepancy(&p);
        assert_eq!(v.value, 1.0);
        assert_eq!(v.witness.kind, BoxKind::Open);
        assert_eq!(v.witness.corner, vec![1.0, 1.0]);
    }

    #[test]
    fn one_dimensional() {
        // {0.25, 0.75}: open box [0,0.75) holds 1 point, volume 0.75 → 0.25
        let p = ps(1, &[0.25, 0.75]);
        assert_eq!(star_discrepancy(&p).value, 0.25);
        assert_eq!(oracle_star_discrepancy(&p), 0.25);
    }

    #[test]
    fn duplicates_are_counted() {
        let p = ps(2, &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(star_discrepancy(&p).value, 0.75);
        assert_eq!(oracle_star_discrepancy(&p), 0.75);
    }

    #[test]
    fn witness_reevaluates_exactly() {
        let p = ps(2, &[0.1, 0.7, 0.4, 0.2, 0.8, 0.5, 0.6, 0.95]);
        let v = star_discrepancy(&p);
        assert_eq!(evaluate_box(&p, &v.witness), v.value);
        assert_eq!(oracle_star_discrepancy(&p), v.value);
    }

    #[test]
    fn map_single_point_entries() {
        let m = local_discrepancy_map(&ps(2, &[0.5, 0.5])).unwrap();
        assert_eq!(m.grid_x, vec![0.5, 1.0]);
        assert_eq!(m.closed_at(0, 0), 0.75);
        assert_eq!(m.open_at(0, 0), 0.25);
        assert_eq!(m.open_at(1, 1), 0.0);
        assert_eq!(m.max(), 0.75);
    }

    #[test]
    fn map_rejects_3d() {
        assert_eq!(
            local_discrepancy_map(&ps(3, &[0.5, 0.5, 0.5])),
            Err(Error::UnsupportedDimension(3))
        );
    }

    #[test]
    fn order_invariance() {
        let a = ps(2, &[0.1, 0.7, 0.4, 0.2, 0.8, 0.5]);
        let b = ps(2, &[0.8, 0.5, 0.1, 0.7, 0.4, 0.2]);
        assert_eq!(star_discrepancy(&a).value, star_discrepancy(&b).value);
    }

    #[test]
    fn three_dimensional_small() {
        let p = ps(3, &[0.2, 0.3, 0.9, 0.6, 0.1, 0.4, 0.9, 0.8, 0.2]);
        let v = star_discrepancy(&p);
        assert_eq!(v.value, oracle_star_discrepancy(&p));
        assert_eq!(evaluate_box(&p, &v.witness), v.value);
    }
}
