//! Matrix Market coordinate files and plain-text vectors.
//!
//! Matrices: `%%MatrixMarket matrix coordinate real {general|symmetric}`
//! (`integer` fields are accepted on read). Indices are one-based. Symmetric
//! files store the lower triangle only.
//!
//! Vectors: one value per line. Complex vectors use two whitespace-separated
//! values per line, real part first. Lines starting with `%` or `#` are
//! comments.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::csr::CsrMatrix;
use super::vector::{ComplexVector, DenseVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixSymmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    parse_matrix_market(BufReader::new(File::open(path)?))
}

pub fn parse_matrix_market(reader: impl BufRead) -> Result<CsrMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix ...' header"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}'", tokens[2])));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", tokens[3])));
    }
    let symmetry = match tokens[4].as_str() {
        "general" => MatrixSymmetry::General,
        "symmetric" => MatrixSymmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (lineno, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'rows cols nnz'"));
                }
                let parse = |s: &str| s.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()));
                let dims = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                triplets.reserve(dims.2 * if symmetry == MatrixSymmetry::Symmetric { 2 } else { 1 });
                size = Some(dims);
            }
            Some((n_rows, n_cols, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'row col value'"));
                }
                let idx = |s: &str| -> Result<usize> {
                    let k = s.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?;
                    k.checked_sub(1).ok_or_else(|| parse_err(lineno, "indices are one-based"))
                };
                let (i, j) = (idx(fields[0])?, idx(fields[1])?);
                let v: f64 = fields[2].parse().map_err(|_| parse_err(lineno, format!("bad value '{}'", fields[2])))?;
                if i >= n_rows || j >= n_cols {
                    return Err(Error::IndexOutOfRange { row: i, col: j, n_rows, n_cols });
                }
                triplets.push((i, j, v));
                if symmetry == MatrixSymmetry::Symmetric && i != j {
                    triplets.push((j, i, v));
                }
            }
        }
    }
    let (n_rows, n_cols, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let stored = match symmetry {
        MatrixSymmetry::General => triplets.len(),
        MatrixSymmetry::Symmetric => triplets.iter().filter(|(i, j, _)| i >= j).count(),
    };
    if stored != nnz {
        return Err(parse_err(0, format!("declared {nnz} entries, found {stored}")));
    }
    CsrMatrix::from_triplets(&triplets, n_rows, n_cols)
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &CsrMatrix, symmetry: MatrixSymmetry) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    format_matrix_market(&mut out, a, symmetry)?;
    out.flush()?;
    Ok(())
}

/// Writes `a` in coordinate format. With [`MatrixSymmetry::Symmetric`] only
/// the lower triangle is written; the caller is responsible for `a` being
/// symmetric.
pub fn format_matrix_market(out: &mut impl Write, a: &CsrMatrix, symmetry: MatrixSymmetry) -> Result<()> {
    let kind = match symmetry {
        MatrixSymmetry::General => "general",
        MatrixSymmetry::Symmetric => "symmetric",
    };
    let entries: Vec<_> = a.triplets().filter(|&(i, j, _)| symmetry == MatrixSymmetry::General || i >= j).collect();
    writeln!(out, "%%MatrixMarket matrix coordinate real {kind}")?;
    writeln!(out, "{} {} {}", a.n_rows(), a.n_cols(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<DenseVector> {
    parse_vector(BufReader::new(File::open(path)?))
}

pub fn parse_vector(reader: impl BufRead) -> Result<DenseVector> {
    let mut v = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let x: f64 = trimmed.parse().map_err(|_| parse_err(k + 1, format!("bad value '{trimmed}'")))?;
        v.push(x);
    }
    Ok(v)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for x in v {
        writeln!(out, "{x:e}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_complex_vector(path: impl AsRef<Path>) -> Result<ComplexVector> {
    let reader = BufReader::new(File::open(path)?);
    let (mut re, mut im) = (Vec::new(), Vec::new());
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(k + 1, "expected 're im'"));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| parse_err(k + 1, format!("bad value '{s}'")));
        re.push(parse(fields[0])?);
        im.push(parse(fields[1])?);
    }
    ComplexVector::new(re, im)
}

pub fn write_complex_vector(path: impl AsRef<Path>, v: &ComplexVector) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (a, b) in v.re.iter().zip(&v.im) {
        writeln!(out, "{a:e} {b:e}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_symmetric_lower_triangle() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 3\n1 1 4\n2 1 2\n2 2 3\n";
        let a = parse_matrix_market(text.as_bytes()).unwrap();
        assert_eq!(a.get(0, 1), 2.0);
        assert_eq!(a.get(1, 0), 2.0);
        assert_eq!(a.nnz(), 4);
    }

    #[test]
    fn general_file_sums_duplicates() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 3 3\n1 3 1.5\n1 3 1.5\n2 1 -1\n";
        let a = parse_matrix_market(text.as_bytes()).unwrap();
        assert_eq!((a.n_rows(), a.n_cols()), (2, 3));
        assert_eq!(a.get(0, 2), 3.0);
    }

    #[test]
    fn rejects_bad_header_and_counts() {
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n".as_bytes()).is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate complex general\n".as_bytes()).is_err());
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n";
        assert!(parse_matrix_market(short.as_bytes()).is_err());
        let oob = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n";
        assert!(matches!(parse_matrix_market(oob.as_bytes()), Err(Error::IndexOutOfRange { .. })));
        let zero = "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1\n";
        assert!(matches!(parse_matrix_market(zero.as_bytes()), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn symmetric_write_then_read() {
        let a = CsrMatrix::tridiagonal(4, -1.0, 2.0, -1.0).kron_sum().unwrap().scaled(0.1);
        let mut buf = Vec::new();
        format_matrix_market(&mut buf, &a, MatrixSymmetry::Symmetric).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real symmetric\n16 16 40\n"));
        assert_eq!(parse_matrix_market(buf.as_slice()).unwrap(), a);
    }

    #[test]
    fn vector_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = vec![1.0, -2.5e-17, std::f64::consts::PI];
        write_vector(dir.path().join("v.txt"), &v).unwrap();
        assert_eq!(read_vector(dir.path().join("v.txt")).unwrap(), v);

        let c = ComplexVector::new(vec![1.0, 0.1], vec![-3.0, 1.0 / 3.0]).unwrap();
        write_complex_vector(dir.path().join("c.txt"), &c).unwrap();
        assert_eq!(read_complex_vector(dir.path().join("c.txt")).unwrap(), c);
    }

    #[test]
    fn vector_parse_error_reports_line() {
        let err = parse_vector("1.0\n# note\nabc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
