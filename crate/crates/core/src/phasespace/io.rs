//! CSV serialization of phase-space fields.
//!
//! The first line is a `#` comment carrying `key=value` metadata (`kind`,
//! `extent`, `points` and, for operator fields, `atom_dim`), enough to rebuild
//! the grid. Rows follow the node order: x-major, y fastest.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;

use super::field::{OperatorPhaseField, PhaseFunction, PhaseKind};
use super::grid::PhaseGrid;
use crate::error::{Error, Result};
use crate::output::csv_float;

fn header(kind: &str, grid: &PhaseGrid, extra: &[(&str, String)]) -> String {
    let mut h = format!(
        "# kind={kind} extent={} points={}",
        csv_float(grid.extent()),
        grid.points()
    );
    for (k, v) in extra {
        h.push_str(&format!(" {k}={v}"));
    }
    h
}

pub fn write_phase_function<W: Write>(f: &PhaseFunction, extra: &[(&str, String)], mut out: W) -> Result<()> {
    writeln!(out, "{}", header(f.kind.name(), &f.grid, extra))?;
    writeln!(out, "x,y,value")?;
    for (a, v) in f.grid.nodes().zip(&f.values) {
        writeln!(out, "{},{},{}", csv_float(a.re), csv_float(a.im), csv_float(*v))?;
    }
    Ok(())
}

pub fn write_operator_field<W: Write>(
    f: &OperatorPhaseField,
    kind: &str,
    extra: &[(&str, String)],
    mut out: W,
) -> Result<()> {
    let d = f.atom_dim;
    let mut extra = extra.to_vec();
    extra.insert(0, ("atom_dim", d.to_string()));
    writeln!(out, "{}", header(kind, &f.grid, &extra))?;
    let mut cols = vec!["x".to_string(), "y".to_string()];
    for r in 0..d {
        for s in 0..d {
            cols.push(format!("re_{r}_{s}"));
            cols.push(format!("im_{r}_{s}"));
        }
    }
    writeln!(out, "{}", cols.join(","))?;
    for (k, a) in f.grid.nodes().enumerate() {
        let mut row = vec![csv_float(a.re), csv_float(a.im)];
        for plane in &f.planes {
            row.push(csv_float(plane[k].re));
            row.push(csv_float(plane[k].im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Parsed leading metadata line.
pub fn parse_header(line: &str) -> Result<HashMap<String, String>> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("missing '#' metadata line".into()))?;
    Ok(body
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn grid_from(meta: &HashMap<String, String>) -> Result<PhaseGrid> {
    let get = |k: &str| meta.get(k).ok_or_else(|| Error::Parse(format!("metadata lacks '{k}'")));
    let extent: f64 = get("extent")?.parse().map_err(|e| Error::Parse(format!("extent: {e}")))?;
    let points: usize = get("points")?.parse().map_err(|e| Error::Parse(format!("points: {e}")))?;
    PhaseGrid::new(extent, points)
}

fn rows<R: BufRead>(input: R) -> Result<(HashMap<String, String>, Vec<Vec<f64>>)> {
    let mut lines = input.lines();
    let meta = parse_header(&lines.next().ok_or_else(|| Error::Parse("empty file".into()))??)?;
    lines.next().ok_or_else(|| Error::Parse("missing column header".into()))??;
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{c}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    Ok((meta, out))
}

pub fn read_phase_function<R: BufRead>(input: R) -> Result<PhaseFunction> {
    let (meta, rows) = rows(input)?;
    let grid = grid_from(&meta)?;
    let kind = meta
        .get("kind")
        .and_then(|k| PhaseKind::parse(k))
        .unwrap_or(PhaseKind::Generic);
    let values = rows
        .iter()
        .map(|r| r.get(2).copied().ok_or_else(|| Error::Parse("short row".into())))
        .collect::<Result<Vec<_>>>()?;
    PhaseFunction::new(grid, kind, values)
}

pub fn read_operator_field<R: BufRead>(input: R) -> Result<OperatorPhaseField> {
    let (meta, rows) = rows(input)?;
    let grid = grid_from(&meta)?;
    let d: usize = meta
        .get("atom_dim")
        .ok_or_else(|| Error::Parse("metadata lacks 'atom_dim'".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("atom_dim: {e}")))?;
    if rows.len() != grid.len() {
        return Err(Error::Parse(format!("expected {} rows, found {}", grid.len(), rows.len())));
    }
    let mut field = OperatorPhaseField::zeros(grid, d);
    for (k, row) in rows.iter().enumerate() {
        if row.len() != 2 + 2 * d * d {
            return Err(Error::Parse(format!("row {k} has {} columns", row.len())));
        }
        for (p, plane) in field.planes.iter_mut().enumerate() {
            plane[k] = C64::new(row[2 + 2 * p], row[3 + 2 * p]);
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_field_round_trip() {
        let grid = PhaseGrid::new(2.5, 32).unwrap();
        let mut f = OperatorPhaseField::zeros(grid, 2);
        for (p, plane) in f.planes.iter_mut().enumerate() {
            for (k, v) in plane.iter_mut().enumerate() {
                *v = C64::new((k as f64 * 0.01 + p as f64).sin() / 3.0, 1.0 / (1.0 + k as f64));
            }
        }
        let mut buf = Vec::new();
        write_operator_field(&f, "husimi", &[("time", "0.5".into())], &mut buf).unwrap();
        let back = read_operator_field(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_missing_metadata() {
        let text = "x,y,value\n0,0,1\n";
        assert!(read_phase_function(text.as_bytes()).is_err());
    }
}
