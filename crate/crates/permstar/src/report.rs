//! JSON document describing one optimisation run.

use serde::{Deserialize, Serialize};

use permstar_core::optimizer::{OptimizationProblem, OptimizationResult, PermutationSpec};
use permstar_core::{CoordinateFamily, PointSet};

use crate::error::{Error, Result};

/// Field order is fixed by declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub n: usize,
    pub dim: usize,
    pub permutation: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    pub epsilon: f64,
    pub f: f64,
    pub exact_discrepancy: f64,
    pub status: String,
    pub iterations: usize,
    pub restarts_used: usize,
    pub wall_time_seconds: f64,
    pub coordinates: Coordinates,
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coordinates {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
}

impl ResultDocument {
    pub fn new(problem: &OptimizationProblem, result: &OptimizationResult, wall_time: f64) -> Self {
        let (permutation, tau) = match problem.permutation() {
            PermutationSpec::Two(p) => (p.to_one_based(), None),
            PermutationSpec::Three(p) => (p.sigma.to_one_based(), Some(p.tau.to_one_based())),
        };
        let fam = |k: usize| result.coordinates[k].values().to_vec();
        ResultDocument {
            n: problem.n(),
            dim: problem.dim(),
            permutation,
            tau,
            epsilon: problem.epsilon(),
            f: result.f,
            exact_discrepancy: result.exact,
            status: result.status.as_str().to_string(),
            iterations: result.iterations,
            restarts_used: result.restarts_used,
            wall_time_seconds: wall_time,
            coordinates: Coordinates {
                x: fam(0),
                y: fam(1),
                z: (problem.dim() == 3).then(|| fam(2)),
            },
            trace: result.trace.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, src: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(src, e.line(), e.to_string()))
    }

    /// Rebuilds the optimised point set from the stored order and
    /// coordinates.
    pub fn point_set(&self) -> Result<PointSet> {
        let perm = |v: &[usize]| permstar_core::Permutation::from_one_based(v);
        let fam = |v: &[f64]| CoordinateFamily::new(v.to_vec());
        let c = &self.coordinates;
        let ps = match (&self.tau, &c.z) {
            (None, None) => {
                permstar_core::assemble(&fam(&c.x)?, &fam(&c.y)?, &perm(&self.permutation)?)?
            }
            (Some(tau), Some(z)) => permstar_core::assemble3d(
                &fam(&c.x)?,
                &fam(&c.y)?,
                &fam(z)?,
                &permstar_core::Permutation3D::new(perm(&self.permutation)?, perm(tau)?)?,
            )?,
            _ => return Err(Error::Invalid("tau and z must be given together".into())),
        };
        Ok(ps)
    }
}
