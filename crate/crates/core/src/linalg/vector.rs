use crate::error::{Error, Result};

/// Dense real vectors are plain `Vec<f64>` / `&[f64]`.
pub type DenseVector = Vec<f64>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += a * x`
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scale(a: f64, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v *= a);
}

/// Complex vector carried as paired real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    pub re: DenseVector,
    pub im: DenseVector,
}

impl ComplexVector {
    pub fn new(re: DenseVector, im: DenseVector) -> Result<Self> {
        Error::check_len(re.len(), im.len())?;
        Ok(Self { re, im })
    }

    pub fn zeros(n: usize) -> Self {
        Self { re: vec![0.0; n], im: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn norm2(&self) -> f64 {
        (dot(&self.re, &self.re) + dot(&self.im, &self.im)).sqrt()
    }

    /// Multiplies every entry by the complex scalar `a + ib`.
    pub fn scaled(&self, a: f64, b: f64) -> Self {
        let re = self.re.iter().zip(&self.im).map(|(x, y)| a * x - b * y).collect();
        let im = self.re.iter().zip(&self.im).map(|(x, y)| b * x + a * y).collect();
        Self { re, im }
    }
}
