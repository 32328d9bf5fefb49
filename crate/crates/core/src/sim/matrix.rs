use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

pub type C64 = Complex64;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

/// Carrier for gate and circuit unitaries.
pub type UnitaryMatrix = Matrix;

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Matrix { dim, data }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Matrix::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let dim = columns.len();
        Matrix::from_fn(dim, |r, c| columns[c][r])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let n = other.dim;
        Matrix::from_fn(self.dim * n, |r, c| self[(r / n, c / n)] * other[(r % n, c % n)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| self.data[r * self.dim..(r + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().matmul(self).max_abs_diff(&Matrix::identity(self.dim)) <= tol
    }

    fn norm_one(&self) -> f64 {
        (0..self.dim).map(|c| (0..self.dim).map(|r| self[(r, c)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring of a Taylor series.
    ///
    /// General-purpose and slow; the gate builders use closed forms and this
    /// serves as an independent cross-check.
    pub fn expm(&self) -> Matrix {
        let norm = self.norm_one();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let scaled = self.scale(C64::new(0.5f64.powi(squarings), 0.0));
        let mut result = Matrix::identity(self.dim);
        let mut term = Matrix::identity(self.dim);
        for k in 1..40 {
            term = term.matmul(&scaled).scale(C64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
            if term.norm_one() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}
