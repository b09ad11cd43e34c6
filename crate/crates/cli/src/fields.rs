//! Sampled path and field files.
//!
//! Two layouts are read:
//!
//! * a 1D table `tau,q` (optionally `tau,q_re,q_im`) with an optional header
//!   row; the nodes must be uniformly spaced and fix the domain;
//! * a shape header `shape,m1[,m2[,m3]]` (node counts per axis) followed by
//!   the values in row-major order, last axis fastest, one `re` or `re,im`
//!   per line; the domain comes from the spec.
//!
//! Blank lines and lines starting with `#` are skipped.

use std::path::Path;

use falva_core::numcore::{Grid1D, GridNd};
use falva_core::Complex64;

use crate::CliError;

/// Samples on a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid: GridNd,
    pub values: Vec<Complex64>,
}

fn bad(path: &Path, line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::validation(format!("{}:{line}: {msg}", path.display()))
}

fn number(path: &Path, line: usize, s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| bad(path, line, format!("`{}` is not a number", s.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(path, line, "non-finite value"))
    }
}

fn complex(path: &Path, line: usize, fields: &[&str]) -> Result<Complex64, CliError> {
    match fields {
        [re] => Ok(Complex64::new(number(path, line, re)?, 0.0)),
        [re, im] => Ok(Complex64::new(number(path, line, re)?, number(path, line, im)?)),
        _ => Err(bad(path, line, format!("expected 1 or 2 value columns, got {}", fields.len()))),
    }
}

/// Reads a field file; `domain` supplies the box for the shape layout and
/// must agree with the nodes of a 1D table when both are present.
pub fn read_field(path: &Path, domain: &[(f64, f64)]) -> Result<SampledField, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_field(path, &text, domain)
}

pub fn parse_field(path: &Path, text: &str, domain: &[(f64, f64)]) -> Result<SampledField, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let Some(&(first_no, first)) = lines.peek() else {
        return Err(CliError::validation(format!("{}: no data", path.display())));
    };
    let first_fields: Vec<&str> = first.split(',').map(str::trim).collect();

    if first_fields[0] == "shape" {
        lines.next();
        let counts: Vec<usize> = first_fields[1..]
            .iter()
            .map(|s| s.parse::<usize>().ok().filter(|&m| m >= 3))
            .collect::<Option<_>>()
            .ok_or_else(|| bad(path, first_no, "shape entries must be node counts >= 3"))?;
        if counts.is_empty() || counts.len() > 3 {
            return Err(bad(path, first_no, "shape needs 1 to 3 axes"));
        }
        if domain.len() != counts.len() {
            return Err(bad(
                path,
                first_no,
                format!("shape has {} axes but {} domain axes are given", counts.len(), domain.len()),
            ));
        }
        let axes = counts
            .iter()
            .zip(domain)
            .map(|(&m, &(lo, hi))| Grid1D::new(lo, hi, m - 1))
            .collect::<Result<Vec<_>, _>>()?;
        let grid = GridNd::new(axes)?;
        let mut values = Vec::with_capacity(grid.len());
        for (no, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            values.push(complex(path, no, &fields)?);
        }
        if values.len() != grid.len() {
            return Err(CliError::validation(format!(
                "{}: shape needs {} values, found {}",
                path.display(),
                grid.len(),
                values.len()
            )));
        }
        return Ok(SampledField { grid, values });
    }

    // 1D table, header row if the first field is not a number
    if first_fields[0].parse::<f64>().is_err() {
        lines.next();
    }
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 2 {
            return Err(bad(path, no, "expected tau,q"));
        }
        nodes.push(number(path, no, fields[0])?);
        values.push(complex(path, no, &fields[1..])?);
    }
    if nodes.len() < 3 {
        return Err(CliError::validation(format!("{}: need at least 3 samples", path.display())));
    }
    let grid = Grid1D::from_nodes(&nodes).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    match domain {
        [] => {}
        [(lo, hi)] => {
            let tol = 1e-12 * (hi - lo).abs().max(1.0);
            if (grid.lower() - lo).abs() > tol || (grid.upper() - hi).abs() > tol {
                return Err(CliError::validation(format!(
                    "{}: samples span [{}, {}] but the domain is [{lo}, {hi}]",
                    path.display(),
                    grid.lower(),
                    grid.upper()
                )));
            }
        }
        _ => return Err(CliError::validation(format!("{}: a tau,q table is 1D", path.display()))),
    }
    Ok(SampledField { grid: GridNd::new(vec![grid])?, values })
}
