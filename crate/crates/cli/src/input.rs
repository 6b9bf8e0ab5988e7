//! Matrix Market and CSV readers.

use std::path::Path;

use pfc_core::num_complex::Complex64;
use pfc_core::{ComplexMatrix, NonnegativeMatrix};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    MatrixMarket,
    Csv,
}

impl InputFormat {
    /// Guesses from the extension, then from a Matrix Market banner.
    pub fn detect(path: &Path, text: &str) -> InputFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx" | "mm") => InputFormat::MatrixMarket,
            Some("csv") => InputFormat::Csv,
            _ if text.trim_start().starts_with("%%MatrixMarket") => InputFormat::MatrixMarket,
            _ => InputFormat::Csv,
        }
    }
}

/// A square matrix as read from disk, before any sign checks.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedMatrix {
    Real { n: usize, entries: Vec<f64> },
    Complex { n: usize, entries: Vec<Complex64> },
}

impl ParsedMatrix {
    pub fn dim(&self) -> usize {
        match self {
            ParsedMatrix::Real { n, .. } | ParsedMatrix::Complex { n, .. } => *n,
        }
    }

    /// Rejects complex input and negative entries, naming the first bad
    /// entry by its zero-based `(row, col)`.
    pub fn into_nonnegative(self) -> Result<NonnegativeMatrix, CliError> {
        match self {
            ParsedMatrix::Real { n, entries } => {
                if let Some(k) = entries.iter().position(|v| *v < 0.0) {
                    return Err(CliError::Input(format!(
                        "negative entry {} at ({}, {}) in a nonnegative context",
                        entries[k],
                        k / n,
                        k % n
                    )));
                }
                Ok(NonnegativeMatrix::new(n, entries)?)
            }
            ParsedMatrix::Complex { .. } => Err(CliError::Input(
                "complex matrix given where a nonnegative real matrix is required".into(),
            )),
        }
    }

    pub fn into_complex(self) -> Result<ComplexMatrix, CliError> {
        match self {
            ParsedMatrix::Real { n, entries } => Ok(ComplexMatrix::from_real(n, &entries)?),
            ParsedMatrix::Complex { n, entries } => Ok(ComplexMatrix::new(n, entries)?),
        }
    }
}

pub fn parse_matrix(path: &Path, format: Option<InputFormat>) -> Result<ParsedMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| InputFormat::detect(path, &text));
    parse_matrix_str(&text, format)
}

pub fn parse_matrix_str(text: &str, format: InputFormat) -> Result<ParsedMatrix, CliError> {
    match format {
        InputFormat::MatrixMarket => parse_matrix_market(text),
        InputFormat::Csv => parse_csv(text),
    }
}

fn number(tok: &str, line: usize) -> Result<f64, CliError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| CliError::Input(format!("line {line}: cannot parse {tok:?} as a number")))?;
    if !v.is_finite() {
        return Err(CliError::Input(format!(
            "line {line}: non-finite value {tok:?}"
        )));
    }
    Ok(v)
}

fn parse_csv(text: &str) -> Result<ParsedMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("CSV: {e}")))?;
        let row = record
            .iter()
            .map(|tok| number(tok, i + 1))
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Input("CSV: no rows".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Input(format!(
                "CSV: row {i} has {} entries, expected {n} for a square matrix",
                row.len()
            )));
        }
    }
    Ok(ParsedMatrix::Real {
        n,
        entries: rows.concat(),
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

fn parse_matrix_market(text: &str) -> Result<ParsedMatrix, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, banner) = lines
        .next()
        .ok_or_else(|| CliError::Input("Matrix Market: empty file".into()))?;
    let fields: Vec<String> = banner
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(CliError::Input(format!(
            "Matrix Market: malformed header {banner:?}"
        )));
    }
    let layout = match fields[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => {
            return Err(CliError::Input(format!(
                "Matrix Market: unsupported layout {other:?}"
            )))
        }
    };
    let complex = match fields[3].as_str() {
        "real" => false,
        "complex" => true,
        other => {
            return Err(CliError::Input(format!(
                "Matrix Market: unsupported field {other:?}"
            )))
        }
    };
    if fields[4] != "general" {
        return Err(CliError::Input(format!(
            "Matrix Market: unsupported symmetry {:?}, only general",
            fields[4]
        )));
    }
    let mut data = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = data
        .next()
        .ok_or_else(|| CliError::Input("Matrix Market: missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("line {size_line}: malformed size line {size:?}")))?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(CliError::Input(format!(
            "line {size_line}: malformed size line {size:?}"
        )));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows != cols || rows == 0 {
        return Err(CliError::Input(format!(
            "Matrix Market: matrix is {rows} x {cols}, need square and nonempty"
        )));
    }
    let n = rows;
    let width = if complex { 2 } else { 1 };
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];

    match layout {
        Layout::Array => {
            let mut count = 0;
            for (line, l) in data {
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != width {
                    return Err(CliError::Input(format!(
                        "line {line}: expected {width} value(s), got {l:?}"
                    )));
                }
                if count == n * n {
                    return Err(CliError::Input(format!(
                        "line {line}: more than {} entries",
                        n * n
                    )));
                }
                // Column-major.
                let (i, j) = (count % n, count / n);
                re[i * n + j] = number(toks[0], line)?;
                if complex {
                    im[i * n + j] = number(toks[1], line)?;
                }
                count += 1;
            }
            if count != n * n {
                return Err(CliError::Input(format!(
                    "Matrix Market: {count} entries, expected {}",
                    n * n
                )));
            }
        }
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut count = 0;
            for (line, l) in data {
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 2 + width {
                    return Err(CliError::Input(format!(
                        "line {line}: malformed entry {l:?}"
                    )));
                }
                let index = |t: &str| -> Result<usize, CliError> {
                    match t.parse::<usize>() {
                        Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                        _ => Err(CliError::Input(format!(
                            "line {line}: index {t:?} outside 1..={n}"
                        ))),
                    }
                };
                let (i, j) = (index(toks[0])?, index(toks[1])?);
                // Repeated coordinates accumulate.
                re[i * n + j] += number(toks[2], line)?;
                if complex {
                    im[i * n + j] += number(toks[3], line)?;
                }
                count += 1;
            }
            if count != nnz {
                return Err(CliError::Input(format!(
                    "Matrix Market: header announces {nnz} entries, found {count}"
                )));
            }
        }
    }
    if complex {
        let entries = re
            .into_iter()
            .zip(im)
            .map(|(a, b)| Complex64::new(a, b))
            .collect();
        Ok(ParsedMatrix::Complex { n, entries })
    } else {
        Ok(ParsedMatrix::Real { n, entries: re })
    }
}
