//! Serializable generator descriptors, shared by the CLI and the harness.

use serde::{Deserialize, Serialize};

use permstar_core::generators::{
    fibonacci_set, kronecker_lattice, random_permutation_stream, sobol, van_der_corput_lifted,
    GeneratorOrigin, KroneckerGenerator, KroneckerParam, ShiftSpec,
};
use permstar_core::{lift_points, LiftIndex, Permutation, PointSet, Provenance, Ratio};

use crate::error::{Error, Result};

/// Everything needed to rebuild a generating point set for a given `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// `(i/n, {(i+shift)φ})`.
    Fibonacci { shift: u64 },
    /// `(i/n, {i·r})`. `r` is `p/q` or a decimal; `interior` marks an exact
    /// rational that stands for an open Farey interval rather than a
    /// fraction with `q ≤ n`.
    Kronecker {
        r: String,
        #[serde(default)]
        interior: bool,
    },
    /// Lifted base-2 van der Corput sequence starting at index `shift`.
    Vdc { shift: u64 },
    /// Sobol' points after `skip`; `lifted` builds a 3D set from the 2D
    /// sequence instead of using the third Sobol' dimension.
    Sobol {
        skip: u64,
        #[serde(default)]
        lifted: bool,
    },
    /// Points `((i-1)/n, (π(i)-1)/n)` for a seeded random π; 3D sets use a
    /// second permutation from the next stream.
    Random { seed: u64, stream: u64 },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Fibonacci { .. } => "fibonacci",
            GeneratorSpec::Kronecker { .. } => "kronecker",
            GeneratorSpec::Vdc { .. } => "vdc",
            GeneratorSpec::Sobol { .. } => "sobol",
            GeneratorSpec::Random { .. } => "random",
        }
    }

    /// Name of the generating set, as used by the reference tables, e.g.
    /// `fibonacci+1` or `sobol(L)`.
    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::Fibonacci { shift: 0 } => "fibonacci".into(),
            GeneratorSpec::Fibonacci { shift } => format!("fibonacci+{shift}"),
            GeneratorSpec::Vdc { shift: 0 } => "vdc".into(),
            GeneratorSpec::Vdc { shift } => format!("vdc+{shift}"),
            GeneratorSpec::Kronecker { r, .. } => format!("kronecker({r})"),
            GeneratorSpec::Sobol { lifted: true, .. } => "sobol(L)".into(),
            GeneratorSpec::Sobol { .. } => "sobol".into(),
            GeneratorSpec::Random { .. } => "random".into(),
        }
    }

    pub fn param(&self) -> String {
        match self {
            GeneratorSpec::Fibonacci { shift } | GeneratorSpec::Vdc { shift } => {
                format!("shift={shift}")
            }
            GeneratorSpec::Kronecker { r, interior: false } => format!("r={r}"),
            GeneratorSpec::Kronecker { r, interior: true } => format!("r={r} (interval)"),
            GeneratorSpec::Sobol { skip, .. } => format!("skip={skip}"),
            GeneratorSpec::Random { seed, stream } => format!("seed={seed};stream={stream}"),
        }
    }

    /// Numeric parameter used to break ranking ties.
    pub fn param_key(&self) -> f64 {
        match self {
            GeneratorSpec::Fibonacci { shift } | GeneratorSpec::Vdc { shift } => *shift as f64,
            GeneratorSpec::Kronecker { r, .. } => parse_r(r).map(|p| p.value()).unwrap_or(f64::NAN),
            GeneratorSpec::Sobol { skip, .. } => *skip as f64,
            GeneratorSpec::Random { stream, .. } => *stream as f64,
        }
    }

    pub fn kronecker_generator(&self, n: usize) -> Result<KroneckerGenerator> {
        let GeneratorSpec::Kronecker { r, interior } = self else {
            return Err(Error::Invalid(format!(
                "{} is not a Kronecker generator",
                self.name()
            )));
        };
        match (parse_r(r)?, interior) {
            (KroneckerParam::Fraction(q), false) => Ok(KroneckerGenerator::rational(n, q)?),
            (KroneckerParam::Fraction(q), true) => Ok(KroneckerGenerator {
                n,
                param: KroneckerParam::Interior(q),
                origin: GeneratorOrigin::User,
            }),
            (KroneckerParam::Real(v), false) => Ok(KroneckerGenerator::real(n, v)?),
            _ => Err(Error::Invalid(format!(
                "interior parameter {r} must be a fraction p/q"
            ))),
        }
    }

    /// The generating point set with `n` points in dimension `dim`.
    pub fn point_set(&self, n: usize, dim: usize) -> Result<PointSet> {
        if n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        let ps = match (self, dim) {
            (GeneratorSpec::Fibonacci { shift }, 2) => fibonacci_set(n, ShiftSpec(*shift))?,
            (GeneratorSpec::Kronecker { .. }, 2) => {
                kronecker_lattice(&self.kronecker_generator(n)?)?
            }
            (GeneratorSpec::Vdc { shift }, 2) => van_der_corput_lifted(n, ShiftSpec(*shift))?,
            (
                GeneratorSpec::Sobol {
                    skip,
                    lifted: false,
                },
                2 | 3,
            ) => sobol(n, dim, *skip)?,
            (GeneratorSpec::Sobol { skip, lifted: true }, 3) => {
                lift_points(&sobol(n, 2, *skip)?, LiftIndex::ZeroBased)?
            }
            (GeneratorSpec::Random { seed, stream }, 2) => {
                grid_set(&[random_permutation_stream(n, *seed, *stream)])?
            }
            (GeneratorSpec::Random { seed, stream }, 3) => grid_set(&[
                random_permutation_stream(n, *seed, 2 * stream),
                random_permutation_stream(n, *seed, 2 * stream + 1),
            ])?,
            _ => {
                return Err(Error::Invalid(format!(
                    "generator {} is not available in dimension {dim}",
                    self.label()
                )))
            }
        };
        Ok(ps)
    }
}

/// Parses `p/q` as an exact fraction, anything else as a real.
pub fn parse_r(s: &str) -> Result<KroneckerParam> {
    if s.contains('/') {
        let r: Ratio = s
            .parse()
            .map_err(|_| Error::Invalid(format!("cannot parse fraction {s:?}")))?;
        Ok(KroneckerParam::Fraction(r))
    } else {
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Invalid(format!("cannot parse real parameter {s:?}")))?;
        Ok(KroneckerParam::Real(v))
    }
}

/// `((i-1)/n, (π(i)-1)/n, …)` on the regular grid.
fn grid_set(perms: &[Permutation]) -> Result<PointSet> {
    let n = perms[0].len();
    let nf = n as f64;
    let mut coords = Vec::with_capacity(n * (perms.len() + 1));
    for i in 1..=n {
        coords.push((i - 1) as f64 / nf);
        for p in perms {
            coords.push((p.get(i) - 1) as f64 / nf);
        }
    }
    Ok(PointSet::new(
        perms.len() + 1,
        coords,
        Provenance::Generated {
            name: "random".into(),
            params: format!("n={n}"),
        },
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use permstar_core::extract_permutation;

    #[test]
    fn descriptors_serialize_with_a_name_tag() {
        let g = GeneratorSpec::Fibonacci { shift: 3 };
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"name":"fibonacci","shift":3}"#);
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&s).unwrap(), g);
        let k: GeneratorSpec = serde_json::from_str(r#"{"name":"kronecker","r":"2/5"}"#).unwrap();
        assert_eq!(k.label(), "kronecker(2/5)");
    }

    #[test]
    fn random_grid_set_carries_its_permutation() {
        let g = GeneratorSpec::Random { seed: 5, stream: 2 };
        let ps = g.point_set(30, 2).unwrap();
        assert_eq!(
            extract_permutation(&ps).unwrap(),
            random_permutation_stream(30, 5, 2)
        );
    }

    #[test]
    fn dimension_checks() {
        assert!(GeneratorSpec::Fibonacci { shift: 0 }
            .point_set(5, 3)
            .is_err());
        assert!(GeneratorSpec::Sobol {
            skip: 0,
            lifted: true
        }
        .point_set(5, 2)
        .is_err());
        assert_eq!(
            GeneratorSpec::Sobol {
                skip: 0,
                lifted: true
            }
            .point_set(5, 3)
            .unwrap()
            .dim(),
            3
        );
        let k = GeneratorSpec::Kronecker {
            r: "1/7".into(),
            interior: false,
        };
        assert!(k.point_set(5, 2).is_err());
    }
}
