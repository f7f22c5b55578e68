//! Plain-text LIBSVM reader: one `label idx:val idx:val ...` row per line,
//! 1-based strictly increasing indices.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use graal_core::problems::LogRegDataset;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("no data rows")]
    Empty,
    #[error("{0}")]
    Dataset(#[from] graal_core::Error),
}

fn line_err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

type Row = (f64, Vec<(usize, f64)>);

fn parse_line(s: &str, lineno: usize) -> Result<Row, ParseError> {
    let mut tokens = s.split_ascii_whitespace();
    let label_tok = tokens.next().ok_or_else(|| line_err(lineno, "missing label"))?;
    let label: f64 = label_tok
        .parse()
        .map_err(|_| line_err(lineno, format!("label {label_tok:?} is not a number")))?;
    // {0, 1} and {-1, +1} conventions both map onto {-1, +1}
    let c = match label {
        l if l == 1.0 => 1.0,
        l if l == 0.0 || l == -1.0 => -1.0,
        l => return Err(line_err(lineno, format!("label {l} is not one of -1, 0, +1"))),
    };
    let mut entries = Vec::new();
    let mut prev = 0usize;
    for tok in tokens {
        let (i, v) = tok
            .split_once(':')
            .ok_or_else(|| line_err(lineno, format!("expected idx:val, got {tok:?}")))?;
        let idx: usize = i
            .parse()
            .map_err(|_| line_err(lineno, format!("index {i:?} is not a positive integer")))?;
        if idx == 0 {
            return Err(line_err(lineno, "indices are 1-based"));
        }
        if idx <= prev {
            return Err(line_err(lineno, format!("index {idx} does not increase (previous {prev})")));
        }
        let val: f64 = v
            .parse()
            .map_err(|_| line_err(lineno, format!("value {v:?} is not a number")))?;
        if !val.is_finite() {
            return Err(line_err(lineno, format!("value {v:?} is not finite")));
        }
        prev = idx;
        entries.push((idx - 1, val));
    }
    Ok((c, entries))
}

/// Reads a dataset. The feature dimension is the largest index seen unless
/// `n_features` is given (it must cover every index). Blank lines are
/// skipped. `β̄` is set to `0.005‖Cᵀc‖∞`.
pub fn parse_libsvm<R: BufRead>(reader: R, n_features: Option<usize>) -> Result<LogRegDataset, ParseError> {
    let mut rows = Vec::new();
    let mut n = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_line(&line, i + 1)?;
        if let Some(&(j, _)) = row.1.last() {
            n = n.max(j + 1);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some(dim) = n_features {
        if dim < n {
            return Err(ParseError::Dataset(graal_core::Error::InvalidParameter(format!(
                "feature dimension {dim} is smaller than the largest index {n}"
            ))));
        }
        n = dim;
    }
    Ok(LogRegDataset::from_rows(n, &rows)?)
}

pub fn read_libsvm_file(path: &Path, n_features: Option<usize>) -> Result<LogRegDataset, ParseError> {
    parse_libsvm(BufReader::new(File::open(path)?), n_features)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<LogRegDataset, ParseError> {
        parse_libsvm(s.as_bytes(), None)
    }

    #[test]
    fn walkthrough() {
        let ds = parse("+1 1:0.5 3:2\n-1 2:1\n").unwrap();
        assert_eq!((ds.m(), ds.n()), (2, 3));
        assert_eq!(ds.label(0), 1.0);
        assert_eq!(ds.row(0), (&[0usize, 2][..], &[0.5, 2.0][..]));
        assert_eq!(ds.label(1), -1.0);
        assert_eq!(ds.row(1), (&[1usize][..], &[1.0][..]));
    }

    #[test]
    fn zero_one_labels_remapped() {
        let ds = parse("0 1:1\n1 1:2").unwrap();
        assert_eq!((ds.label(0), ds.label(1)), (-1.0, 1.0));
    }

    #[test]
    fn index_order_enforced() {
        match parse("+1 3:1 2:1") {
            Err(ParseError::Line { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("+1 1:1\n+1 2:1 2:3") {
            Err(ParseError::Line { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_tokens() {
        for bad in ["x 1:1", "+1 a:1", "+1 1:b", "+1 0:1", "+1 1", "2 1:1", "+1 1:inf"] {
            assert!(matches!(parse(bad), Err(ParseError::Line { line: 1, .. })), "{bad}");
        }
        assert!(matches!(parse(""), Err(ParseError::Empty)));
        assert!(matches!(parse("\n  \n"), Err(ParseError::Empty)));
    }

    #[test]
    fn dimension_override() {
        let ds = parse_libsvm("+1 2:1\n".as_bytes(), Some(5)).unwrap();
        assert_eq!(ds.n(), 5);
        assert!(parse_libsvm("+1 7:1\n".as_bytes(), Some(5)).is_err());
    }

    #[test]
    fn label_only_rows_and_crlf() {
        let ds = parse("+1\r\n-1 1:3\r\n").unwrap();
        assert_eq!((ds.m(), ds.n(), ds.nnz()), (2, 1, 1));
    }
}
