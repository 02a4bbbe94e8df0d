use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with `j` accepted for `i`, optional
/// spaces, and exponents in either part).
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad complex literal '{token}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("", body),
    };
    let re = if re.is_empty() {
        0.0
    } else {
        re.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Square matrix from comma-separated rows. Blank lines and `#` comments
/// are skipped.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("empty matrix".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "row {} has {} entries, expected {n}",
            i + 1,
            r.len()
        )));
    }
    ComplexMatrix::from_vec(n, n, rows.into_iter().flatten().collect())
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}
