//! Construction of point sets with low L∞ star discrepancy.
//!
//! The central idea is to separate the *order* of a point set from the exact
//! placement of its coordinates. A two-dimensional set is described by a
//! [`Permutation`] pairing the i-th smallest first coordinate with the
//! π(i)-th smallest second coordinate; three-dimensional sets carry a pair of
//! such permutations. With the order fixed, the coordinates can be moved to
//! minimise the exact star discrepancy, which is what [`optimizer`] does.
//!
//! The crate is `no_std` and only needs `alloc`. Anything that touches files,
//! threads or wall-clock time lives in the `permstar` companion crate; the
//! optimizer reads time through the [`optimizer::Clock`] trait.
//!
//! Modules:
//! * [`pointset`]: point sets, permutations, cumulative count tables,
//!   sorted coordinate families and the conversions between them.
//! * [`discrepancy`]: exact star discrepancy, local discrepancy maps and an
//!   independent brute-force oracle.
//! * [`generators`]: Fibonacci, Kronecker, van der Corput and Sobol' sets,
//!   seeded random permutations and the Farey enumeration of all Kronecker
//!   permutations.
//! * [`lp`]: a small dense simplex solver.
//! * [`optimizer`]: block-coordinate descent over exact linear subproblems.

#![no_std]
#![forbid(unsafe_code)]
// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod discrepancy;
mod error;
pub mod generators;
pub mod lp;
pub mod optimizer;
pub mod pointset;
pub mod rational;

pub use discrepancy::{
    local_discrepancy_map, oracle_star_discrepancy, star_discrepancy, BoxKind, BoxWitness,
    DiscrepancyValue, LocalDiscrepancyMap,
};
pub use error::{Error, Result};
pub use pointset::{
    assemble, assemble3d, cumulative_counts, cumulative_counts3d, extract_permutation,
    extract_permutation3d, lift, lift_points, CoordinateFamily, CumulativeCountTable, LiftIndex,
    Permutation, Permutation3D, PointSet, Provenance,
};
pub use rational::Ratio;
