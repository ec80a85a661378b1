//! Small dense matrix type with the lower Cholesky factorisation and the
//! triangular solve used for whitening.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Lower-triangular Cholesky factor `D` with `A = D D'`.
///
/// Only the lower triangle of `A` is read. Zero prefixes of each row are
/// tracked so banded inputs multiply in time proportional to the band.
#[derive(Debug, Clone)]
pub struct Cholesky {
    factor: Matrix,
    row_start: Vec<usize>,
}

impl Cholesky {
    pub fn new(a: &Matrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut l = Matrix::zeros(n, n);
        let mut row_start = vec![0; n];
        for i in 0..n {
            let start = (0..i).find(|&k| a[(i, k)] != 0.0).unwrap_or(i);
            row_start[i] = start;
            for j in start..=i {
                let from = row_start[j].max(start);
                let mut s = a[(i, j)];
                for k in from..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite { index: i + 1 });
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Ok(Cholesky { factor: l, row_start })
    }

    pub fn dim(&self) -> usize {
        self.factor.rows
    }

    pub fn factor(&self) -> &Matrix {
        &self.factor
    }

    /// Solves `D w = s` by forward substitution.
    pub fn solve_lower(&self, s: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(s.len(), n);
        let mut w = vec![0.0; n];
        for i in 0..n {
            let row = self.factor.row(i);
            let mut acc = s[i];
            for k in self.row_start[i]..i {
                acc -= row[k] * w[k];
            }
            w[i] = acc / row[i];
        }
        w
    }

    /// Computes `D z` for lower-triangular `D`.
    pub fn mul_lower(&self, z: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.dim()) {
            let start = self.row_start[i];
            *o = crate::stats::dot(&self.factor.row(i)[start..=i], &z[start..=i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_reconstructs() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0, 0.4], vec![2.0, 5.0, 1.0], vec![0.4, 1.0, 3.0]]).unwrap();
        let ch = Cholesky::new(&a).unwrap();
        let d = ch.factor();
        let rebuilt = Matrix::from_fn(3, 3, |i, j| (0..3).map(|k| d[(i, k)] * d[(j, k)]).sum());
        assert!(rebuilt.max_abs_diff(&a) < 1e-12);
        let w = ch.solve_lower(&[1.0, 2.0, 3.0]);
        let mut back = vec![0.0; 3];
        ch.mul_lower(&w, &mut back);
        for (x, y) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_failing_minor() {
        let a = Matrix::from_rows(&[vec![1.0, 0.9, 0.9], vec![0.9, 1.0, -0.9], vec![0.9, -0.9, 1.0]]).unwrap();
        assert_eq!(Cholesky::new(&a).unwrap_err(), Error::NotPositiveDefinite { index: 3 });
    }

    #[test]
    fn banded_rows_skip_leading_zeros() {
        let a = Matrix::from_fn(5, 5, |i, j| match i.abs_diff(j) {
            0 => 1.0,
            1 => 0.3,
            _ => 0.0,
        });
        let ch = Cholesky::new(&a).unwrap();
        assert_eq!(ch.row_start, vec![0, 0, 1, 2, 3]);
        assert_eq!(ch.factor()[(4, 0)], 0.0);
    }

    #[test]
    fn not_square() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(Cholesky::new(&a), Err(Error::NotSquare { .. })));
    }
}
