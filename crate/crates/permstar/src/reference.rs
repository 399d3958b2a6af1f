//! Published reference values and the regression check against them.
//!
//! Labels follow [`GeneratorSpec::label`]: a bare label such as
//! `fibonacci+1` names the generating set itself (an *exact* row, compared
//! with an absolute tolerance), `pi(fibonacci+1)` names the optimised set
//! for that order (an *optimized* row, an upper bound checked with a
//! multiplicative slack). A `*` before the closing parenthesis matches any
//! suffix, which is how best-over-shifts rows pick up a whole shift scan.

use serde::Serialize;

use permstar_core::star_discrepancy;

use crate::error::Result;
use crate::generator::GeneratorSpec;
use crate::harness::ExperimentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Exact,
    Optimized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub label: &'static str,
    pub n: usize,
    pub dim: usize,
    pub value: f64,
    pub kind: RowKind,
    /// Absolute tolerance of exact rows; matches the printed precision.
    pub tolerance: f64,
    /// A failing soft row is reported but does not fail the comparison.
    pub soft: bool,
    pub source: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceTable {
    pub name: &'static str,
    pub rows: Vec<ReferenceRow>,
}

const N_2D: [usize; 9] = [20, 50, 100, 180, 220, 260, 350, 420, 500];
const N_3D: [usize; 9] = [14, 18, 22, 26, 30, 34, 38, 42, 50];

fn series(
    label: &'static str,
    dim: usize,
    ns: &[usize],
    values: &[Option<f64>],
    kind: RowKind,
    source: &'static str,
) -> Vec<ReferenceRow> {
    ns.iter()
        .zip(values)
        .filter_map(|(&n, v)| {
            v.map(|value| ReferenceRow {
                label,
                n,
                dim,
                value,
                kind,
                tolerance: 5e-6,
                soft: false,
                source,
            })
        })
        .collect()
}

impl ReferenceTable {
    /// Fixed-order optimisation in two dimensions, plus the exact
    /// discrepancy of the shifted Fibonacci sets.
    pub fn two_dimensional() -> Self {
        const SRC: &str = "2D fixed-order optimisation results";
        let mut rows = Vec::new();
        rows.extend(series(
            "mpmc",
            2,
            &N_2D,
            &[
                Some(0.0666),
                None,
                Some(0.0188),
                Some(0.0115),
                Some(0.0097),
                Some(0.0084),
                None,
                Some(0.0058),
                Some(0.0052),
            ],
            RowKind::Optimized,
            SRC,
        ));
        rows.extend(series(
            "pi(vdc)",
            2,
            &N_2D,
            &[
                Some(0.06562),
                Some(0.02899),
                Some(0.01588),
                Some(0.00932),
                Some(0.00784),
                Some(0.00689),
            ],
            RowKind::Optimized,
            SRC,
        ));
        rows.extend(series(
            "pi(fibonacci)",
            2,
            &N_2D,
            &[
                Some(0.06319),
                Some(0.02733),
                Some(0.01525),
                Some(0.00954),
                Some(0.00799),
                Some(0.006862),
            ],
            RowKind::Optimized,
            SRC,
        ));
        rows.extend(series(
            "pi(fibonacci+1)",
            2,
            &N_2D,
            &[
                Some(0.06219),
                Some(0.02742),
                Some(0.01492),
                Some(0.00901),
                Some(0.00737),
                Some(0.00640),
                Some(0.004872),
                Some(0.00412),
            ],
            RowKind::Optimized,
            SRC,
        ));
        let mut exact = series(
            "fibonacci+1",
            2,
            &N_2D,
            &[
                Some(0.105883),
                Some(0.049165),
                Some(0.026105),
                Some(0.015165),
                Some(0.012407),
                Some(0.010894),
                Some(0.008731),
                Some(0.00728),
                Some(0.00611),
            ],
            RowKind::Exact,
            SRC,
        );
        // the last two entries are printed with five decimals only
        for r in exact.iter_mut().filter(|r| r.n >= 420) {
            r.tolerance = 5e-5;
        }
        rows.extend(exact);
        rows.push(ReferenceRow {
            label: "fibonacci",
            n: 100,
            dim: 2,
            value: 0.027485,
            kind: RowKind::Exact,
            tolerance: 5e-6,
            soft: false,
            source: "unshifted Fibonacci set quoted alongside the 2D results",
        });
        ReferenceTable { name: "2d", rows }
    }

    /// Best value over Fibonacci shifts 0..199 per size. Where two
    /// published figures disagree (0.007718 and 0.007719 at n = 200) the
    /// larger one is used.
    pub fn best_shift() -> Self {
        let rows = series(
            "pi(fibonacci*)",
            2,
            &[50, 100, 150, 200],
            &[Some(0.027088), Some(0.014444), Some(0.01), Some(0.007719)],
            RowKind::Optimized,
            "best optimised value over Fibonacci shifts",
        );
        ReferenceTable {
            name: "best-shift",
            rows,
        }
    }

    pub fn three_dimensional() -> Self {
        const SRC: &str = "3D fixed-order optimisation results";
        let mut rows = Vec::new();
        rows.extend(series(
            "pi(kritzinger(L))",
            3,
            &N_3D,
            &[
                Some(0.1480),
                Some(0.1222),
                Some(0.1044),
                Some(0.09091),
                Some(0.08265),
                Some(0.07213),
                Some(0.06545),
                Some(0.05839),
                Some(0.05226),
            ],
            RowKind::Optimized,
            SRC,
        ));
        rows.extend(series(
            "pi(sobol(L))",
            3,
            &N_3D,
            &[
                Some(0.14286),
                Some(0.1136),
                Some(0.1002),
                Some(0.08882),
                Some(0.08016),
                Some(0.07635),
                Some(0.06947),
                Some(0.06836),
                Some(0.05500),
            ],
            RowKind::Optimized,
            SRC,
        ));
        rows.extend(series(
            "pi(sobol)",
            3,
            &N_3D,
            &[
                Some(0.1429),
                Some(0.125),
                Some(0.1103),
                Some(0.09977),
                Some(0.0885),
                Some(0.07983),
                Some(0.07183),
                Some(0.07073),
                Some(0.05978),
            ],
            RowKind::Optimized,
            SRC,
        ));
        let mut sobol = series(
            "sobol",
            3,
            &N_3D,
            &[
                Some(0.23096),
                Some(0.21788),
                Some(0.17602),
                Some(0.16657),
                Some(0.13322),
                Some(0.17243),
                Some(0.13068),
                Some(0.14273),
                Some(0.08997),
            ],
            RowKind::Exact,
            SRC,
        );
        // the Sobol' variant behind these values is not specified
        for r in &mut sobol {
            r.soft = true;
        }
        rows.extend(sobol);
        ReferenceTable { name: "3d", rows }
    }

    pub fn all() -> Vec<ReferenceTable> {
        vec![
            Self::two_dimensional(),
            Self::best_shift(),
            Self::three_dimensional(),
        ]
    }

    pub fn by_name(name: &str) -> Option<ReferenceTable> {
        Self::all().into_iter().find(|t| t.name == name)
    }
}

/// A value to compare against reference rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub n: usize,
    pub dim: usize,
    pub value: f64,
}

/// The optimised and the initial value of each successful record.
pub fn measurements(records: &[ExperimentRecord]) -> Vec<Measurement> {
    let mut out = Vec::new();
    for r in records {
        if let Some(f) = r.f {
            out.push(Measurement {
                label: format!("pi({})", r.label),
                n: r.n,
                dim: r.dim,
                value: f,
            });
        }
        if let Some(v) = r.initial_exact {
            out.push(Measurement {
                label: r.label.clone(),
                n: r.n,
                dim: r.dim,
                value: v,
            });
        }
    }
    out
}

fn generator_for(label: &str) -> Option<GeneratorSpec> {
    match label {
        "fibonacci" => Some(GeneratorSpec::Fibonacci { shift: 0 }),
        "vdc" => Some(GeneratorSpec::Vdc { shift: 0 }),
        "sobol" => Some(GeneratorSpec::Sobol {
            skip: 0,
            lifted: false,
        }),
        "sobol(L)" => Some(GeneratorSpec::Sobol {
            skip: 0,
            lifted: true,
        }),
        _ => label
            .strip_prefix("fibonacci+")
            .and_then(|s| s.parse().ok())
            .map(|shift| GeneratorSpec::Fibonacci { shift }),
    }
}

/// Evaluates the generating set of every exact row that names a known
/// generator.
pub fn evaluate_exact_rows(table: &ReferenceTable) -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for row in table.rows.iter().filter(|r| r.kind == RowKind::Exact) {
        if let Some(g) = generator_for(row.label) {
            let ps = g.point_set(row.n, row.dim)?;
            out.push(Measurement {
                label: row.label.to_string(),
                n: row.n,
                dim: row.dim,
                value: star_discrepancy(&ps).value,
            });
        }
    }
    Ok(out)
}

fn label_matches(pattern: &str, label: &str) -> bool {
    match pattern.strip_suffix("*)") {
        Some(prefix) => label.starts_with(prefix) && label.ends_with(')'),
        None => pattern == label,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowResult {
    pub table: &'static str,
    pub row: ReferenceRow,
    /// Best optimised value, or the evaluated value farthest from the
    /// reference for exact rows.
    pub achieved: f64,
    pub matched: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegressionReport {
    pub rows: Vec<RowResult>,
    /// Measurements that no row of any compared table refers to.
    pub unmatched: Vec<Measurement>,
}

impl RegressionReport {
    /// Failing rows that are not soft.
    pub fn failures(&self) -> impl Iterator<Item = &RowResult> {
        self.rows.iter().filter(|r| !r.pass && !r.row.soft)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Compares measurements with the rows of `tables`. Only rows with at least
/// one matching measurement are reported, so an empty input gives an empty
/// report.
pub fn regression_compare(
    measurements: &[Measurement],
    tables: &[ReferenceTable],
    slack: f64,
) -> RegressionReport {
    let mut report = RegressionReport::default();
    let mut used = vec![false; measurements.len()];
    for table in tables {
        for row in &table.rows {
            let hits: Vec<(usize, &Measurement)> = measurements
                .iter()
                .enumerate()
                .filter(|(_, m)| {
                    m.n == row.n && m.dim == row.dim && label_matches(row.label, &m.label)
                })
                .collect();
            if hits.is_empty() {
                continue;
            }
            for (k, _) in &hits {
                used[*k] = true;
            }
            let (achieved, pass) = match row.kind {
                RowKind::Optimized => {
                    let best = hits
                        .iter()
                        .map(|(_, m)| m.value)
                        .fold(f64::INFINITY, f64::min);
                    (best, best <= row.value * slack)
                }
                RowKind::Exact => {
                    let worst = hits
                        .iter()
                        .map(|(_, m)| m.value)
                        .max_by(|a, b| (a - row.value).abs().total_cmp(&(b - row.value).abs()))
                        .unwrap();
                    (worst, (worst - row.value).abs() <= row.tolerance)
                }
            };
            report.rows.push(RowResult {
                table: table.name,
                row: row.clone(),
                achieved,
                matched: hits.len(),
                pass,
            });
        }
    }
    report.unmatched = measurements
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(m, _)| m.clone())
        .collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(label: &str, n: usize, value: f64) -> Measurement {
        Measurement {
            label: label.into(),
            n,
            dim: 2,
            value,
        }
    }

    #[test]
    fn empty_input_gives_empty_report() {
        let r = regression_compare(&[], &ReferenceTable::all(), 1.02);
        assert!(r.rows.is_empty() && r.unmatched.is_empty() && r.passed());
    }

    #[test]
    fn optimized_rows_use_slack() {
        let t = [ReferenceTable::two_dimensional()];
        let r = regression_compare(&[m("pi(fibonacci+1)", 20, 0.0630)], &t, 1.02);
        assert!(r.passed());
        let r = regression_compare(&[m("pi(fibonacci+1)", 20, 0.0640)], &t, 1.02);
        assert!(!r.passed());
    }

    #[test]
    fn wildcard_rows_take_the_best_match() {
        let t = [ReferenceTable::best_shift()];
        let ms = [
            m("pi(fibonacci+3)", 50, 0.04),
            m("pi(fibonacci+24)", 50, 0.02709),
            m("pi(vdc)", 50, 0.01),
        ];
        let r = regression_compare(&ms, &t, 1.0 + 1e-3);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].matched, 2);
        assert!(r.passed());
        assert_eq!(r.unmatched, vec![ms[2].clone()]);
    }

    #[test]
    fn exact_rows_reproduce() {
        let table = ReferenceTable::two_dimensional();
        let ms = evaluate_exact_rows(&table).unwrap();
        let r = regression_compare(&ms, &[table], 1.0);
        let shifted: Vec<_> = r
            .rows
            .iter()
            .filter(|x| x.row.label == "fibonacci+1")
            .collect();
        assert_eq!(shifted.len(), 9);
        assert!(shifted.iter().all(|x| x.pass), "{shifted:?}");
    }
}
