use crate::error::{Error, Result};

use super::cholesky::{cholesky, SpdFactor};
use super::csr::CsrMatrix;
use super::vector::{dot, ComplexVector, DenseVector};

/// Relative tolerance of the symmetry check on `W` and `T`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Real block form of `(W + iT)(x + iy) = p + iq`.
///
/// The `2n x 2n` matrix `[[W, -T], [T, W]]` is never assembled.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    w: CsrMatrix,
    t: CsrMatrix,
    p: DenseVector,
    q: DenseVector,
}

impl BlockSystem {
    /// Validates shapes and symmetry. Positive definiteness of `W` is
    /// checked when it is factored.
    pub fn new(w: CsrMatrix, t: CsrMatrix, p: DenseVector, q: DenseVector) -> Result<Self> {
        for m in [&w, &t] {
            if !m.is_square() {
                return Err(Error::NotSquare { n_rows: m.n_rows(), n_cols: m.n_cols() });
            }
        }
        let n = w.n_rows();
        Error::check_len(n, t.n_rows())?;
        Error::check_len(n, p.len())?;
        Error::check_len(n, q.len())?;
        for m in [&w, &t] {
            let asymmetry = m.asymmetry();
            if asymmetry > SYMMETRY_TOL {
                return Err(Error::NotSymmetric { asymmetry });
            }
        }
        Ok(Self { w, t, p, q })
    }

    pub fn from_complex_rhs(w: CsrMatrix, t: CsrMatrix, b: ComplexVector) -> Result<Self> {
        Self::new(w, t, b.re, b.im)
    }

    pub fn dim(&self) -> usize {
        self.w.n_rows()
    }

    pub fn w(&self) -> &CsrMatrix {
        &self.w
    }

    pub fn t(&self) -> &CsrMatrix {
        &self.t
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn rhs(&self) -> ComplexVector {
        ComplexVector { re: self.p.clone(), im: self.q.clone() }
    }

    /// Replaces the right-hand side, keeping the matrices.
    pub fn with_rhs(&self, p: DenseVector, q: DenseVector) -> Result<Self> {
        Error::check_len(self.dim(), p.len())?;
        Error::check_len(self.dim(), q.len())?;
        Ok(Self { w: self.w.clone(), t: self.t.clone(), p, q })
    }

    pub fn factor_w(&self) -> Result<SpdFactor> {
        cholesky(&self.w)
    }

    /// `(W x - T y, T x + W y)`.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Result<(DenseVector, DenseVector)> {
        let n = self.dim();
        Error::check_len(n, x.len())?;
        Error::check_len(n, y.len())?;
        let mut top = vec![0.0; n];
        let mut bottom = vec![0.0; n];
        self.apply_into(x, y, &mut top, &mut bottom);
        Ok((top, bottom))
    }

    pub(crate) fn apply_into(&self, x: &[f64], y: &[f64], top: &mut [f64], bottom: &mut [f64]) {
        top.iter_mut().for_each(|v| *v = 0.0);
        bottom.iter_mut().for_each(|v| *v = 0.0);
        self.w.spmv_acc(1.0, x, top);
        self.t.spmv_acc(-1.0, y, top);
        self.t.spmv_acc(1.0, x, bottom);
        self.w.spmv_acc(1.0, y, bottom);
    }

    /// `‖b - A u‖₂ / ‖b‖₂` for `u = x + iy`, evaluated in real arithmetic.
    pub fn residual(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let rhs_norm = (dot(&self.p, &self.p) + dot(&self.q, &self.q)).sqrt();
        if rhs_norm == 0.0 {
            return Err(Error::ZeroRhs);
        }
        let (top, bottom) = self.apply(x, y)?;
        let r2: f64 = top.iter().zip(&self.p).chain(bottom.iter().zip(&self.q)).map(|(a, b)| (b - a) * (b - a)).sum();
        Ok(r2.sqrt() / rhs_norm)
    }
}

/// `(W x - T y, T x + W y)` for the block matrix of `sys`.
pub fn apply_block_a(sys: &BlockSystem, x: &[f64], y: &[f64]) -> Result<(DenseVector, DenseVector)> {
    sys.apply(x, y)
}

/// Relative residual of the complex system, computed from the block form.
pub fn block_residual(sys: &BlockSystem, x: &[f64], y: &[f64]) -> Result<f64> {
    sys.residual(x, y)
}
