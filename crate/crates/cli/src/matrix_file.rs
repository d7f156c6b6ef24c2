//! The `skewmm-matrix v1` text format.
//!
//! ```text
//! skewmm-matrix v1 p=5
//! 1 0 -1/2 0
//! ...
//! ```
//!
//! A header, then p − 1 rows of p − 1 rationals separated by single spaces,
//! each row ending in LF. Rationals are `<num>` or `<num>/<den>` in lowest
//! terms with den > 1. Only the canonical form is accepted, so reading and
//! writing back reproduces the input byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use skewmm::cyclotomic::is_prime;
use skewmm::{RatMatrix, Rational};

use crate::error::CliError;

const HEADER: &str = "skewmm-matrix v1 p=";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub p: u64,
    pub matrix: RatMatrix,
}

/// Why a text is not a valid matrix file; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

impl MatrixFile {
    pub fn new(p: u64, matrix: RatMatrix) -> Self {
        Self { p, matrix }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let Some(body) = text.strip_suffix('\n') else {
            return Err(err(1, "missing final newline"));
        };
        let mut lines = body.split('\n');
        let header = lines.next().unwrap_or_default();
        let p: u64 = header
            .strip_prefix(HEADER)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(1, format!("expected header `{HEADER}<prime>`")))?;
        if p < 3 || !is_prime(p) {
            return Err(err(1, format!("{p} is not an odd prime")));
        }
        let n = (p - 1) as usize;
        let mut rows = Vec::with_capacity(n);
        for (k, line) in lines.enumerate() {
            let lineno = k + 2;
            if rows.len() == n {
                return Err(err(lineno, format!("more than {n} rows")));
            }
            let row = line
                .split(' ')
                .map(|tok| parse_rational(tok).ok_or_else(|| err(lineno, format!("bad entry `{tok}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(err(lineno, format!("expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(err(rows.len() + 2, format!("expected {n} rows, found {}", rows.len())));
        }
        let matrix = RatMatrix::from_rows(rows).map_err(|e| err(1, e.to_string()))?;
        Ok(Self { p, matrix })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER}{}\n", self.p);
        for i in 0..self.matrix.rows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        Self::parse(&text).map_err(|e| CliError::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_text()).map_err(|e| CliError::io(path.display(), e))
    }
}

/// Accepts only the canonical spelling: what `Display` would print.
fn parse_rational(tok: &str) -> Option<Rational> {
    let ok_int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty()
            && digits.bytes().all(|b| b.is_ascii_digit())
            && (digits == "0" || !digits.starts_with('0'))
    };
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (tok, None),
    };
    if !ok_int(num) || den.is_some_and(|d| !ok_int(d) || d.starts_with('-')) {
        return None;
    }
    let value: Rational = tok.parse().ok()?;
    (value.to_string() == tok).then_some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rationals() {
        for ok in ["0", "7", "-3", "1/2", "-10/3"] {
            assert_eq!(parse_rational(ok).unwrap().to_string(), ok);
        }
        for bad in ["", "-0", "+1", "01", "2/4", "3/1", "1/-2", "1/0", "0/5", "1.5", "1e3", "1/", "/2"] {
            assert!(parse_rational(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn roundtrip_small_file() {
        let text = "skewmm-matrix v1 p=3\n1 -1/2\n0 3\n";
        let f = MatrixFile::parse(text).unwrap();
        assert_eq!(f.p, 3);
        assert_eq!(f.to_text(), text);
    }

    #[test]
    fn rejects_non_canonical_layout() {
        for bad in [
            "skewmm-matrix v1 p=3\n1 0\n0 1",
            "skewmm-matrix v1 p=3\n1 0 \n0 1\n",
            "skewmm-matrix v1 p=3\n1  0\n0 1\n",
            "skewmm-matrix v1 p=3\r\n1 0\r\n0 1\r\n",
            "skewmm-matrix v1 p=3\n1 0\n",
            "skewmm-matrix v1 p=3\n1 0\n0 1\n0 1\n",
            "skewmm-matrix v1 p=3\n1 0 0\n0 1\n",
            "skewmm-matrix v1 p=9\n1 0\n0 1\n",
            "skewmm-matrix v2 p=3\n1 0\n0 1\n",
        ] {
            assert!(MatrixFile::parse(bad).is_err(), "{bad:?}");
        }
    }
}
