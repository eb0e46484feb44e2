//! LIBSVM text datasets as a CSR design matrix with `{-1, +1}` labels.
//!
//! Each nonempty line reads `label idx:val idx:val ...` with 1-based,
//! strictly increasing feature indices. `#` starts a comment. Labels drawn
//! from `{-1, +1}`, `{0, 1}` or `{1, 2}` are normalized to `{-1, +1}`.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};

/// Row-major sparse matrix `A` (rows x cols) with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDataset {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    labels: Vec<f64>,
}

impl SparseDataset {
    /// Builds a dataset from CSR arrays, checking every structural invariant.
    pub fn from_csr(
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
        labels: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.is_empty() || row_ptr[0] != 0 {
            return Err(Error::invalid("row_ptr must start with 0"));
        }
        let rows = row_ptr.len() - 1;
        if labels.len() != rows {
            return Err(Error::invalid(format!("{} labels for {rows} rows", labels.len())));
        }
        if *row_ptr.last().unwrap() != col_idx.len() || col_idx.len() != values.len() {
            return Err(Error::invalid("row_ptr, col_idx and values disagree in length"));
        }
        for r in 0..rows {
            let (lo, hi) = (row_ptr[r], row_ptr[r + 1]);
            if lo > hi {
                return Err(Error::invalid("row_ptr must be nondecreasing"));
            }
            let idx = &col_idx[lo..hi];
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("column indices of row {r} not strictly increasing")));
            }
            if idx.last().is_some_and(|&c| c >= cols) {
                return Err(Error::invalid(format!("column index out of range in row {r}")));
            }
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
            return Err(Error::invalid(format!("label {bad} is not +1 or -1")));
        }
        Ok(Self { rows, cols, row_ptr, col_idx, values, labels })
    }

    /// Dense row-major matrix to CSR, dropping exact zeros.
    pub fn from_dense(rows: &[Vec<f64>], labels: Vec<f64>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            if row.len() != cols {
                return Err(Error::invalid("ragged dense matrix"));
            }
            for (j, &a) in row.iter().enumerate() {
                if a != 0.0 {
                    col_idx.push(j);
                    values.push(a);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_csr(cols, row_ptr, col_idx, values, labels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// `a_r^T x`
    pub fn row_dot(&self, r: usize, x: &[f64]) -> f64 {
        let (idx, val) = self.row(r);
        idx.iter().zip(val).map(|(&j, &a)| a * x[j]).sum()
    }

    /// `A x`
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row_dot(r, x)).collect()
    }

    /// `A^T w`
    pub fn rmatvec(&self, w: &[f64]) -> Vec<f64> {
        debug_assert_eq!(w.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &wr) in w.iter().enumerate() {
            if wr == 0.0 {
                continue;
            }
            let (idx, val) = self.row(r);
            for (&j, &a) in idx.iter().zip(val) {
                out[j] += wr * a;
            }
        }
        out
    }

    /// Same data with a wider feature space (trailing all-zero columns).
    pub fn with_cols(mut self, cols: usize) -> Result<Self> {
        if cols < self.cols {
            return Err(Error::invalid(format!(
                "dimension override {cols} is below the largest feature index {}",
                self.cols
            )));
        }
        self.cols = cols;
        Ok(self)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses LIBSVM text from any reader.
pub fn parse_libsvm<R: Read>(source: R) -> Result<SparseDataset> {
    let reader = BufReader::new(source);
    let mut raw_labels = Vec::new();
    let mut label_lines = Vec::new();
    let mut row_ptr = vec![0];
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    let mut max_col = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = match line.find('#') {
            Some(p) => &line[..p],
            None => &line[..],
        };
        let mut tokens = content.split_whitespace();
        let Some(label_tok) = tokens.next() else { continue };
        let label: f64 = label_tok
            .parse()
            .map_err(|_| parse_err(lineno, format!("unparsable label `{label_tok}`")))?;
        if !label.is_finite() {
            return Err(parse_err(lineno, format!("unparsable label `{label_tok}`")));
        }
        let mut prev: Option<usize> = None;
        for tok in tokens {
            let (i, v) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(lineno, format!("malformed token `{tok}`")))?;
            let idx: i64 = i
                .parse()
                .map_err(|_| parse_err(lineno, format!("malformed index in `{tok}`")))?;
            if idx <= 0 {
                return Err(parse_err(lineno, format!("nonpositive index {idx}")));
            }
            let val: f64 = v
                .parse()
                .map_err(|_| parse_err(lineno, format!("malformed value in `{tok}`")))?;
            let col = (idx - 1) as usize;
            match prev {
                Some(p) if p == col => {
                    return Err(parse_err(lineno, format!("duplicate index {idx}")));
                }
                Some(p) if p > col => {
                    return Err(parse_err(lineno, format!("index {idx} out of increasing order")));
                }
                _ => {}
            }
            prev = Some(col);
            max_col = max_col.max(col + 1);
            col_idx.push(col);
            values.push(val);
        }
        row_ptr.push(col_idx.len());
        raw_labels.push(label);
        label_lines.push(lineno);
    }

    let labels = normalize_labels(&raw_labels, &label_lines)?;
    SparseDataset::from_csr(max_col, row_ptr, col_idx, values, labels)
}

fn normalize_labels(raw: &[f64], lines: &[usize]) -> Result<Vec<f64>> {
    let within = |set: [f64; 2]| raw.iter().all(|y| set.contains(y));
    let map: fn(f64) -> f64 = if within([-1.0, 1.0]) {
        |y| y
    } else if within([0.0, 1.0]) {
        |y| if y == 0.0 { -1.0 } else { 1.0 }
    } else if within([1.0, 2.0]) {
        |y| if y == 1.0 { -1.0 } else { 1.0 }
    } else {
        let (pos, bad) = raw
            .iter()
            .enumerate()
            .find(|(_, y)| ![-1.0, 0.0, 1.0, 2.0].contains(*y))
            .unwrap_or((0, &raw[0]));
        return Err(parse_err(
            lines[pos],
            format!("label {bad} cannot be mapped to a binary {{-1, +1}} encoding"),
        ));
    };
    Ok(raw.iter().map(|&y| map(y)).collect())
}

/// Reads a LIBSVM file; names ending in `.gz` are decompressed on the fly.
pub fn load_libsvm(path: impl AsRef<Path>, dim_override: Option<usize>) -> Result<SparseDataset> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let gz = path.extension().is_some_and(|e| e == "gz");
    let data = if gz { parse_libsvm(MultiGzDecoder::new(file))? } else { parse_libsvm(file)? };
    match dim_override {
        Some(n) => data.with_cols(n),
        None => Ok(data),
    }
}

/// Writes the dataset in LIBSVM text form. Values use shortest round-trip
/// formatting so reparsing reproduces the same bits.
pub fn write_libsvm<W: Write>(data: &SparseDataset, mut out: W) -> Result<()> {
    for r in 0..data.rows() {
        let label = if data.labels[r] > 0.0 { "+1" } else { "-1" };
        write!(out, "{label}")?;
        let (idx, val) = data.row(r);
        for (&j, &a) in idx.iter().zip(val) {
            write!(out, " {}:{:?}", j + 1, a)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_line() {
        let d = parse_libsvm("+1 1:0.5 3:-2\n".as_bytes()).unwrap();
        assert_eq!(d.rows(), 1);
        assert_eq!(d.cols(), 3);
        assert_eq!(d.labels(), &[1.0]);
        assert_eq!(d.row(0), (&[0usize, 2][..], &[0.5, -2.0][..]));
    }

    #[test]
    fn normalizes_zero_one_labels() {
        let d = parse_libsvm("0 2:1\n1 1:1\n".as_bytes()).unwrap();
        assert_eq!(d.labels(), &[-1.0, 1.0]);
        let d = parse_libsvm("1 2:1\n2 1:1\n".as_bytes()).unwrap();
        assert_eq!(d.labels(), &[-1.0, 1.0]);
    }

    #[test]
    fn whitespace_comments_and_crlf() {
        let text = "# header\r\n-1   1:1e-3  2:2.5E2 \r\n\n  +1 4:7 # trailing\r\n";
        let d = parse_libsvm(text.as_bytes()).unwrap();
        assert_eq!(d.rows(), 2);
        assert_eq!(d.cols(), 4);
        assert_eq!(d.values(), &[1e-3, 250.0, 7.0]);
    }

    #[test]
    fn empty_row_is_allowed() {
        let d = parse_libsvm("+1\n-1 1:2\n".as_bytes()).unwrap();
        assert_eq!(d.row(0).0.len(), 0);
        assert_eq!(d.row_ptr(), &[0, 0, 1]);
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        assert_eq!(line_of(parse_libsvm("+1 1:1\n+1 2:x\n".as_bytes()).unwrap_err()), 2);
        assert_eq!(line_of(parse_libsvm("+1 0:1\n".as_bytes()).unwrap_err()), 1);
        assert_eq!(line_of(parse_libsvm("+1 -3:1\n".as_bytes()).unwrap_err()), 1);
        assert_eq!(line_of(parse_libsvm("\n+1 2:1 2:3\n".as_bytes()).unwrap_err()), 2);
        assert_eq!(line_of(parse_libsvm("abc 1:1\n".as_bytes()).unwrap_err()), 1);
        assert_eq!(line_of(parse_libsvm("+1 1\n".as_bytes()).unwrap_err()), 1);
        assert_eq!(line_of(parse_libsvm("+1 1:1\n3 1:1\n".as_bytes()).unwrap_err()), 2);
    }

    #[test]
    fn dimension_override() {
        let d = parse_libsvm("+1 2:1\n".as_bytes()).unwrap();
        assert_eq!(d.clone().with_cols(10).unwrap().cols(), 10);
        assert!(d.with_cols(1).is_err());
    }

    #[test]
    fn matvec_and_transpose() {
        let d = SparseDataset::from_dense(&[vec![1.0, 0.0, 2.0], vec![0.0, 3.0, 0.0]], vec![1.0, -1.0])
            .unwrap();
        assert_eq!(d.matvec(&[1.0, 1.0, 1.0]), vec![3.0, 3.0]);
        assert_eq!(d.rmatvec(&[1.0, 2.0]), vec![1.0, 6.0, 2.0]);
    }

    #[test]
    fn from_csr_validates() {
        assert!(SparseDataset::from_csr(2, vec![0, 2], vec![1, 0], vec![1.0, 1.0], vec![1.0]).is_err());
        assert!(SparseDataset::from_csr(2, vec![0, 1], vec![2], vec![1.0], vec![1.0]).is_err());
        assert!(SparseDataset::from_csr(2, vec![0, 1], vec![1], vec![1.0], vec![0.5]).is_err());
    }
}
