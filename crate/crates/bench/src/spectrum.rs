//! Eigenvalue export for `G_α`, `P_α⁻¹ A` and, when cheaply available, `A`.

use std::io::Write;
use std::path::Path;

use gsor_core::linalg::{dot, norm2, CsrMatrix};
use gsor_core::problems::{build_problem, ProblemSpec};
use gsor_core::theory::{gsor_spectrum, s_eigenvalues, symmetric_eigen};
use gsor_core::Error;
use num_complex::Complex64;

use crate::error::Result;

/// Largest grid size accepted by [`export_spectrum`].
pub const MAX_SPECTRUM_M: usize = 32;

const COMMUTE_TOL: f64 = 1e-12;
const PAIR_TOL: f64 = 1e-8;
const MIX: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug)]
pub struct SpectrumExport {
    pub alpha: f64,
    /// Eigenvalues of the GSOR iteration matrix.
    pub g: Vec<Complex64>,
    /// Eigenvalues of the preconditioned matrix.
    pub precond: Vec<Complex64>,
    /// Eigenvalues of the block matrix, if they could be paired.
    pub a: Option<Vec<Complex64>>,
    pub notes: Vec<String>,
}

fn probe(n: usize, k: usize) -> Vec<f64> {
    (0..n).map(|i| ((i as f64 + 1.0) * (0.7 + 0.31 * k as f64)).sin()).collect()
}

/// Whether `WT = TW`, tested on a few fixed probe vectors.
pub fn commutes(w: &CsrMatrix, t: &CsrMatrix) -> Result<bool> {
    let n = w.n_rows();
    let scale = w.frobenius_norm() * t.frobenius_norm();
    for k in 0..3 {
        let v = probe(n, k);
        let wtv = w.spmv(&t.spmv(&v)?)?;
        let twv = t.spmv(&w.spmv(&v)?)?;
        let diff: Vec<f64> = wtv.iter().zip(&twv).map(|(a, b)| a - b).collect();
        if norm2(&diff) > COMMUTE_TOL * scale * norm2(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `w_k ± i t_k` over a common eigenbasis of commuting `W` and `T`, or
/// `None` if no such basis is recovered from `W + cT`.
fn block_eigenvalues(w: &CsrMatrix, t: &CsrMatrix) -> Result<Option<Vec<Complex64>>> {
    let n = w.n_rows();
    let eig = symmetric_eigen(&w.linear_combination(1.0, t, MIX)?.to_dense())?;
    let scale = w.frobenius_norm().max(t.frobenius_norm()).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let v: Vec<f64> = (0..n).map(|i| eig.vectors[(i, k)]).collect();
        let (wv, tv) = (w.spmv(&v)?, t.spmv(&v)?);
        let (a, b) = (dot(&v, &wv), dot(&v, &tv));
        let rw: Vec<f64> = wv.iter().zip(&v).map(|(x, y)| x - a * y).collect();
        let rt: Vec<f64> = tv.iter().zip(&v).map(|(x, y)| x - b * y).collect();
        if norm2(&rw).max(norm2(&rt)) > PAIR_TOL * scale {
            return Ok(None);
        }
        out.push(Complex64::new(a, b));
        out.push(Complex64::new(a, -b));
    }
    Ok(Some(out))
}

pub fn spectrum_sets(w: &CsrMatrix, t: &CsrMatrix, alpha: f64) -> Result<SpectrumExport> {
    let mu = s_eigenvalues(w, t)?;
    let spec = gsor_spectrum(&mu, alpha)?;
    let mut notes = Vec::new();
    let a = if commutes(w, t)? {
        let a = block_eigenvalues(w, t)?;
        if a.is_none() {
            notes.push("A omitted: no common eigenbasis of W and T was recovered".to_string());
        }
        a
    } else {
        notes.push("A omitted: W and T do not commute".to_string());
        None
    };
    Ok(SpectrumExport { alpha, g: spec.lambda, precond: spec.precond_eigs, a, notes })
}

pub fn write_spectrum(out: &mut impl Write, export: &SpectrumExport) -> Result<()> {
    writeln!(out, "# alpha = {}", export.alpha)?;
    for note in &export.notes {
        writeln!(out, "# {note}")?;
    }
    writeln!(out, "set,re,im")?;
    let mut sets = vec![("G", &export.g), ("precondA", &export.precond)];
    if let Some(a) = &export.a {
        sets.push(("A", a));
    }
    for (name, values) in sets {
        for z in values {
            writeln!(out, "{name},{},{}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// Builds the problem, computes its spectra and writes them as CSV.
pub fn export_spectrum(spec: &ProblemSpec, alpha: f64, path: impl AsRef<Path>) -> Result<SpectrumExport> {
    if spec.m > MAX_SPECTRUM_M {
        return Err(
            Error::InvalidParameter(format!("spectrum export needs m <= {MAX_SPECTRUM_M}, got {}", spec.m)).into()
        );
    }
    let problem = build_problem(spec)?;
    let export = spectrum_sets(problem.system.w(), problem.system.t(), alpha)?;
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_spectrum(&mut file, &export)?;
    file.flush()?;
    Ok(export)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pair() {
        let w = CsrMatrix::from_diagonal(&[2.0, 3.0]);
        let t = CsrMatrix::from_diagonal(&[1.0, -1.0]);
        let ex = spectrum_sets(&w, &t, 0.5).unwrap();
        let mut a = ex.a.unwrap();
        a.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let expect = [(2.0, -1.0), (2.0, 1.0), (3.0, -1.0), (3.0, 1.0)];
        for (z, (re, im)) in a.iter().zip(expect) {
            assert!((z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12);
        }
        assert_eq!(ex.g.len(), 4);
        assert!(ex.notes.is_empty());
    }

    #[test]
    fn noncommuting_pair_is_noted() {
        let w = CsrMatrix::from_diagonal(&[1.0, 2.0]);
        let t = CsrMatrix::tridiagonal(2, 1.0, 0.0, 1.0);
        let ex = spectrum_sets(&w, &t, 0.5).unwrap();
        assert!(ex.a.is_none());
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &ex).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# A omitted: W and T do not commute\nset,re,im\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("G,")).count(), 4);
        assert!(!text.contains("\nA,"));
    }
}
