//! Plain-text matrix files.
//!
//! ```text
//! # comment lines start with '#'
//! 2
//! 4 0
//! 0 9
//! ```
//!
//! The first non-comment line holds the dimension `r`, followed by exactly
//! `r` rows of `r` whitespace-separated decimals. Blank lines are ignored.
//! The matrix is symmetrized on load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sqrtx::SymMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("missing dimension header")]
    MissingHeader,
    #[error("line {line}: invalid dimension `{token}`")]
    BadDimension { line: usize, token: String },
    #[error("line {line}: invalid number `{token}`")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} data rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] sqrtx::Error),
}

pub fn parse_matrix(text: &str) -> Result<SymMatrix, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let dim: usize = match header.parse() {
        Ok(d) if d >= 1 => d,
        _ => {
            return Err(ParseError::BadDimension {
                line: header_line,
                token: header.to_string(),
            })
        }
    };

    let mut rows = Vec::with_capacity(dim);
    for (line, content) in lines {
        if rows.len() == dim {
            return Err(ParseError::RowCount {
                expected: dim,
                found: dim + 1,
            });
        }
        let row = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| ParseError::BadNumber {
                        line,
                        token: tok.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() != dim {
            return Err(ParseError::RowLength {
                line,
                expected: dim,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(ParseError::RowCount {
            expected: dim,
            found: rows.len(),
        });
    }
    Ok(SymMatrix::from_rows(&rows)?)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<SymMatrix, ParseError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text)
}

/// Dimension header plus rows, every entry at 17 significant digits.
pub fn format_matrix(m: &SymMatrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{:.16e}", x + 0.0)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn write_matrix(path: impl AsRef<Path>, m: &SymMatrix) -> std::io::Result<()> {
    fs::write(path, format_matrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let m = parse_matrix("# diag\n2\n\n4 0\n# mid\n0 9\n").unwrap();
        assert_eq!(m.rows(), vec![vec![4.0, 0.0], vec![0.0, 9.0]]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_matrix(""), Err(ParseError::MissingHeader)));
        assert!(matches!(parse_matrix("# only\n"), Err(ParseError::MissingHeader)));
        assert!(matches!(parse_matrix("0\n"), Err(ParseError::BadDimension { .. })));
        assert!(matches!(parse_matrix("x\n1\n"), Err(ParseError::BadDimension { .. })));
        assert!(matches!(
            parse_matrix("2\n1 0\n"),
            Err(ParseError::RowCount { expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_matrix("1\n1\n2\n"),
            Err(ParseError::RowCount { expected: 1, .. })
        ));
        assert!(matches!(
            parse_matrix("2\n1 0 0\n0 1\n"),
            Err(ParseError::RowLength { line: 2, .. })
        ));
        assert!(matches!(parse_matrix("1\nabc\n"), Err(ParseError::BadNumber { .. })));
        assert!(matches!(parse_matrix("1\nNaN\n"), Err(ParseError::BadNumber { .. })));
        assert!(matches!(
            parse_matrix("2\n0 1\n0 0\n"),
            Err(ParseError::Matrix(sqrtx::Error::NotSymmetric { .. }))
        ));
    }

    #[test]
    fn format_is_parseable() {
        let m = SymMatrix::from_rows(&[[0.1, -1.0 / 3.0], [-1.0 / 3.0, 1e-300]]).unwrap();
        let text = format_matrix(&m);
        assert!(text.starts_with("2\n1.0000000000000001e-1 "));
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }
}
