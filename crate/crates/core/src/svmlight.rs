//! svmlight / libsvm text format: `<label> <col+1>:<value> ...` per row.

use std::fmt::Write as _;

use thiserror::Error;

use crate::sparse::{SparseError, SparseMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum SvmlightError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Matrix {
        line: usize,
        #[source]
        source: SparseError,
    },
    #[error("{labels} labels for {rows} rows")]
    LabelCount { rows: usize, labels: usize },
}

/// `printf("%.{sig}g")` formatting.
pub fn format_significant(value: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if value == 0.0 {
        return "0".to_owned();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{value:.decimals$}")).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serialize rows with 9 significant digits. Missing labels are written as
/// `0`.
pub fn write_svmlight(
    matrix: &SparseMatrix,
    labels: Option<&[u8]>,
) -> Result<String, SvmlightError> {
    if let Some(l) = labels {
        if l.len() != matrix.n_rows() {
            return Err(SvmlightError::LabelCount {
                rows: matrix.n_rows(),
                labels: l.len(),
            });
        }
    }
    let mut out = String::new();
    for i in 0..matrix.n_rows() {
        let label = labels.map_or(0, |l| l[i]);
        let _ = write!(out, "{label}");
        for (j, v) in matrix.row_entries(i) {
            let _ = write!(out, " {}:{}", j + 1, format_significant(v, 9));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parse svmlight text. The width is the larger of `min_cols` and the
/// highest column seen. `#` starts a comment.
pub fn read_svmlight(
    text: &str,
    min_cols: usize,
) -> Result<(Vec<f64>, SparseMatrix), SvmlightError> {
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut n_cols = min_cols;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| SvmlightError::Parse {
            line: lineno + 1,
            msg,
        };
        let mut fields = line.split_whitespace();
        let label = fields.next().expect("line is non-empty");
        labels.push(
            label
                .parse::<f64>()
                .map_err(|_| err(format!("bad label `{label}`")))?,
        );
        let mut row = Vec::new();
        for field in fields {
            let (idx, val) = field
                .split_once(':')
                .ok_or_else(|| err(format!("expected index:value, got `{field}`")))?;
            let idx: usize = idx
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| err(format!("bad index `{idx}`")))?;
            let val: f64 = val.parse().map_err(|_| err(format!("bad value `{val}`")))?;
            n_cols = n_cols.max(idx);
            row.push((idx - 1, val));
        }
        rows.push(row);
    }
    let mut m = SparseMatrix::new(n_cols);
    for (i, row) in rows.into_iter().enumerate() {
        m.push_row(row).map_err(|source| SvmlightError::Matrix {
            line: i + 1,
            source,
        })?;
    }
    Ok((labels, m))
}
