//! Plain-text file formats.
//!
//! * Point sets: a header line `n d`, then one point per line with `d`
//!   space-separated coordinates.
//! * Permutations: a line holding `n`, then `π(1) … π(n)`; three-dimensional
//!   problems add a third line with `τ(1) … τ(n)`.
//! * Local discrepancy maps: CSV with header `i,j,x,y,open,closed`, one row
//!   per grid anchor (0-based grid indices).
//!
//! Floats are written in scientific notation with 17 significant digits, so
//! every value reads back bit-for-bit. Output is UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use permstar_core::discrepancy::LocalDiscrepancyMap;
use permstar_core::optimizer::PermutationSpec;
use permstar_core::{Permutation, Permutation3D, PointSet, Provenance};

use crate::error::{Error, Result};

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Non-empty lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_field<T: std::str::FromStr>(src: &str, line: usize, field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(src, line, format!("cannot parse {what} from {field:?}")))
}

pub fn point_set_to_string(ps: &PointSet) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", ps.len(), ps.dim()).unwrap();
    for p in ps.points() {
        let row: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Parses the point-set format; `src` names the input in error messages.
pub fn parse_point_set(text: &str, src: &str) -> Result<PointSet> {
    let mut it = lines(text);
    let (hline, header) = it
        .next()
        .ok_or_else(|| Error::parse(src, 1, "empty input, expected header `n d`"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::parse(src, hline, "header must be `n d`"));
    }
    let n: usize = parse_field(src, hline, head[0], "point count")?;
    let d: usize = parse_field(src, hline, head[1], "dimension")?;
    if n == 0 || d == 0 {
        return Err(Error::parse(src, hline, "n and d must be positive"));
    }
    let mut coords = Vec::with_capacity(n * d);
    for k in 0..n {
        let (ln, line) = it.next().ok_or_else(|| {
            Error::parse(
                src,
                text.lines().count() + 1,
                format!("expected {n} points, found {k}"),
            )
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != d {
            return Err(Error::parse(
                src,
                ln,
                format!("expected {d} coordinates, found {}", fields.len()),
            ));
        }
        for f in fields {
            let v: f64 = parse_field(src, ln, f, "coordinate")?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::parse(
                    src,
                    ln,
                    format!("coordinate {f} is outside [0,1]"),
                ));
            }
            coords.push(v);
        }
    }
    if let Some((ln, _)) = it.next() {
        return Err(Error::parse(
            src,
            ln,
            format!("unexpected data after {n} points"),
        ));
    }
    Ok(PointSet::new(d, coords, Provenance::External)?)
}

pub fn read_point_set(path: &Path) -> Result<PointSet> {
    parse_point_set(&read_to_string(path)?, &path.display().to_string())
}

pub fn write_point_set(path: &Path, ps: &PointSet) -> Result<()> {
    write_string(path, &point_set_to_string(ps))
}

fn join(p: &Permutation) -> String {
    let v: Vec<String> = p.to_one_based().iter().map(usize::to_string).collect();
    v.join(" ")
}

pub fn permutation_to_string(p: &PermutationSpec) -> String {
    match p {
        PermutationSpec::Two(p) => format!("{}\n{}\n", p.len(), join(p)),
        PermutationSpec::Three(p) => {
            format!("{}\n{}\n{}\n", p.len(), join(&p.sigma), join(&p.tau))
        }
    }
}

pub fn parse_permutation(text: &str, src: &str) -> Result<PermutationSpec> {
    let mut it = lines(text);
    let (hline, header) = it
        .next()
        .ok_or_else(|| Error::parse(src, 1, "empty input, expected `n`"))?;
    let n: usize = parse_field(src, hline, header, "size")?;
    let mut rows = Vec::new();
    for (ln, line) in it {
        if rows.len() == 2 {
            return Err(Error::parse(
                src,
                ln,
                "at most two permutation lines are allowed",
            ));
        }
        let values = line
            .split_whitespace()
            .map(|f| parse_field::<usize>(src, ln, f, "permutation entry"))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != n {
            return Err(Error::parse(
                src,
                ln,
                format!("expected {n} entries, found {}", values.len()),
            ));
        }
        let p = Permutation::from_one_based(&values)
            .map_err(|e| Error::parse(src, ln, e.to_string()))?;
        rows.push(p);
    }
    let mut rows = rows.into_iter();
    match (rows.next(), rows.next()) {
        (Some(p), None) => Ok(PermutationSpec::Two(p)),
        (Some(s), Some(t)) => Ok(PermutationSpec::Three(Permutation3D::new(s, t)?)),
        _ => Err(Error::parse(src, hline + 1, "missing permutation line")),
    }
}

pub fn read_permutation(path: &Path) -> Result<PermutationSpec> {
    parse_permutation(&read_to_string(path)?, &path.display().to_string())
}

/// One row of a heatmap CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapRow {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub open: f64,
    pub closed: f64,
}

pub const HEATMAP_HEADER: &str = "i,j,x,y,open,closed";

pub fn heatmap_rows(map: &LocalDiscrepancyMap) -> Vec<HeatmapRow> {
    let mut out = Vec::with_capacity(map.open.len());
    for (i, &x) in map.grid_x.iter().enumerate() {
        for (j, &y) in map.grid_y.iter().enumerate() {
            out.push(HeatmapRow {
                i,
                j,
                x,
                y,
                open: map.open_at(i, j),
                closed: map.closed_at(i, j),
            });
        }
    }
    out
}

pub fn heatmap_to_csv(map: &LocalDiscrepancyMap) -> String {
    let mut out = String::with_capacity(map.open.len() * 100);
    out.push_str(HEATMAP_HEADER);
    out.push('\n');
    for r in heatmap_rows(map) {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.i,
            r.j,
            fmt_f64(r.x),
            fmt_f64(r.y),
            fmt_f64(r.open),
            fmt_f64(r.closed)
        )
        .unwrap();
    }
    out
}

pub fn parse_heatmap_csv(text: &str, src: &str) -> Result<Vec<HeatmapRow>> {
    let mut it = lines(text);
    match it.next() {
        Some((_, h)) if h == HEATMAP_HEADER => {}
        Some((ln, _)) => {
            return Err(Error::parse(
                src,
                ln,
                format!("expected header {HEATMAP_HEADER}"),
            ))
        }
        None => return Err(Error::parse(src, 1, "empty input")),
    }
    it.map(|(ln, line)| {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::parse(
                src,
                ln,
                format!("expected 6 fields, found {}", f.len()),
            ));
        }
        Ok(HeatmapRow {
            i: parse_field(src, ln, f[0], "i")?,
            j: parse_field(src, ln, f[1], "j")?,
            x: parse_field(src, ln, f[2], "x")?,
            y: parse_field(src, ln, f[3], "y")?,
            open: parse_field(src, ln, f[4], "open")?,
            closed: parse_field(src, ln, f[5], "closed")?,
        })
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        let v = 0.1 + 0.2;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn point_set_errors_name_the_line() {
        let err = parse_point_set("2 2\n0.1 0.2\n0.3 x\n", "pts.txt").unwrap_err();
        assert_eq!(
            err.to_string(),
            "pts.txt:3: cannot parse coordinate from \"x\""
        );
        let err = parse_point_set("2 2\n0.1 0.2\n", "pts.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_point_set("1 2\n0.1 1.5\n", "p").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_point_set("1 2\n0.1 0.5\n0.2 0.2\n", "p").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn permutation_round_trip() {
        let p = PermutationSpec::Two(Permutation::from_one_based(&[3, 1, 2]).unwrap());
        let text = permutation_to_string(&p);
        assert_eq!(text, "3\n3 1 2\n");
        assert_eq!(parse_permutation(&text, "-").unwrap(), p);
        let err = parse_permutation("3\n3 1 1\n", "perm").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
