//! Square matrices of arbitrary-precision nonnegative integers.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    size: usize,
    entries: Vec<BigUint>,
}

impl Matrix {
    pub fn zeros(size: usize) -> Self {
        Matrix { size, entries: vec![BigUint::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = BigUint::one();
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: Vec<Vec<BigUint>>) -> Self {
        let size = columns.len();
        let mut m = Self::zeros(size);
        for (c, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), size, "column length");
            for (r, x) in col.into_iter().enumerate() {
                m.entries[r * size + c] = x;
            }
        }
        m
    }

    pub fn from_rows_u64(rows: &[Vec<u64>]) -> Self {
        let size = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), size, "row length");
                r.iter().map(|&x| BigUint::from(x))
            })
            .collect();
        Matrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.size + col]
    }

    pub fn column(&self, col: usize) -> Vec<BigUint> {
        (0..self.size).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        (0..self.size).map(|c| (0..self.size).map(|r| self.get(r, c)).sum()).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|x| !x.is_zero())
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.size);
        (0..self.size)
            .map(|c| (0..self.size).map(|r| &v[r] * self.get(r, c)).sum())
            .collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigUint]> {
        self.entries.chunks(self.size.max(1))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.size, rhs.size, "matrix sizes");
        let n = self.size;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line = row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_small_matrices() {
        let m = Matrix::from_rows_u64(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(&m * &m, Matrix::from_rows_u64(&[vec![5, 4], vec![4, 5]]));
        assert_eq!(&m * &Matrix::identity(2), m);
        assert_eq!(m.column_sums(), vec![BigUint::from(3u32); 2]);
        let v = [BigUint::from(1u32), BigUint::from(1u32)];
        assert_eq!(m.left_mul(&v), vec![BigUint::from(3u32); 2]);
    }
}
