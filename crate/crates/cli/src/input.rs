//! Parsing of numbers, lists and matrices given on the command line.

use std::fs;

use conebessel::cone::{ConePoint, HermMatrix};
use conebessel::linalg::Matrix;
use conebessel::{Error, Field, Result};
use num_complex::Complex64;

fn bad(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

/// A real or complex number: `1.5`, `-2i`, `0.3+0.2i`, `i`, `1e-3-4i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad("empty number"));
    }
    if let Ok(x) = t.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Err(bad(format!("cannot parse number {text:?}")));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = 0;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = i;
            break;
        }
    }
    let (re, im) = body.split_at(split);
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad(format!("cannot parse number {text:?}")))? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad(format!("cannot parse number {text:?}")))?,
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_real(text: &str) -> Result<f64> {
    let z = parse_complex(text)?;
    if z.im != 0.0 {
        return Err(bad(format!("expected a real number, got {text:?}")));
    }
    Ok(z.re)
}

pub fn parse_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_real).collect()
}

/// Plain-text matrix: rows on lines, entries separated by whitespace.
pub fn read_matrix_file(path: &str) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("cannot read {path}: {e}")))?;
    parse_matrix_text(&text)
}

pub fn parse_matrix_text(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(bad("matrix rows must be non-empty and of equal length"));
    }
    Matrix::from_rows(rows.len(), cols, rows.concat())
}

/// A matrix-valued flag: `@path` reads a matrix file, otherwise a comma
/// list is the diagonal.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    match text.strip_prefix('@') {
        Some(path) => read_matrix_file(path),
        None => Ok(Matrix::from_complex_diag(&parse_list(text)?)),
    }
}

pub fn cone_point(text: &str, field: Field, q: usize) -> Result<ConePoint> {
    let m = parse_matrix(text)?;
    if m.rows() != q {
        return Err(bad(format!("expected a rank-{q} matrix, got {} x {}", m.rows(), m.cols())));
    }
    ConePoint::from_matrix(m, field)
}

pub fn herm(text: &str, field: Field, q: usize) -> Result<HermMatrix> {
    let m = parse_matrix(text)?;
    if m.rows() != q {
        return Err(bad(format!("expected a rank-{q} matrix, got {} x {}", m.rows(), m.cols())));
    }
    HermMatrix::new(m, field)
}

/// `key=value` lines turned into extra command-line arguments for keys not
/// already given as flags. `true`/`false` values toggle switches.
pub fn config_args(text: &str, present: &[String]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("config line {}: expected key=value", n + 1)))?;
        let flag = format!("--{}", key.trim().trim_start_matches("--"));
        if present.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match value.trim() {
            "true" => out.push(flag),
            "false" => {}
            v => {
                out.push(flag);
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}
