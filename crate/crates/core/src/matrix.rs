//! Dense complex matrices, row-major. The single carrier type for operators,
//! kernels and witnesses throughout the crate.
//!
//! Matrices are immutable after construction and validated to contain only
//! finite entries, so downstream numerics never see NaN/Inf.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(1.0, 0.0); rows * cols],
        }
    }

    /// The matrix unit E_{r,c}.
    pub fn matrix_unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.entries[r * cols + c] = Complex64::new(1.0, 0.0);
        m
    }

    /// Rank-one outer product b c^T (no conjugation on the right factor).
    pub fn outer(b: &[Complex64], c: &[Complex64]) -> Self {
        let mut entries = Vec::with_capacity(b.len() * c.len());
        for &x in b {
            for &y in c {
                entries.push(x * y);
            }
        }
        ComplexMatrix {
            rows: b.len(),
            cols: c.len(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).conj());
            }
        }
        ComplexMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::input(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| a * z).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Kronecker product; row index of the result is `i_self * other.rows + i_other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = vec![Complex64::new(0.0, 0.0); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        entries[(i * other.rows + p) * cols + (j * other.cols + q)] = a * other.get(p, q);
                    }
                }
            }
        }
        ComplexMatrix { rows, cols, entries }
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::input("trace requires a square matrix"));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Tr(self^H · other), the Frobenius inner product.
    pub fn tr_adjoint_product(&self, other: &Self) -> Result<Complex64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::input("tr_adjoint_product: shape mismatch"));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Max entrywise absolute difference; the residual measure used by the
/// identity checks.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::input("max_abs_diff: shape mismatch"));
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}
