use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{fmt_scalar, Scalar};

/// Dense row-major matrix over a [`Scalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::domain("empty matrix"));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|v| T::from_int(*v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                data.push(acc);
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    /// `M v` for a column vector.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * v[k].clone()))
            .collect())
    }

    /// `v M` for a row vector.
    pub fn apply_left(&self, v: &[T]) -> Result<Vec<T>> {
        self.transpose().apply(v)
    }

    fn require_square(&self) -> Result<usize> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch { expected: self.rows, got: self.cols })
        }
    }

    /// Reduces `[self | aug]` to `[I | self^-1 aug]`, tracking the determinant.
    fn eliminate(&self, aug: Option<&Self>) -> Result<(T, Option<Self>)> {
        let n = self.require_square()?;
        let extra = aug.map_or(0, |a| a.cols);
        if let Some(a) = aug {
            if a.rows != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.rows });
            }
        }
        let w = n + extra;
        let mut m: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                if let Some(a) = aug {
                    r.extend(a.row(i));
                }
                r
            })
            .collect();
        let mut det = T::one();
        for c in 0..n {
            // largest pivot keeps floats stable and is harmless for exact types
            let p = (c..n)
                .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .expect("nonempty range");
            if m[p][c].is_negligible() {
                return Ok((T::zero(), None));
            }
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let pivot = m[c][c].clone();
            det = det * pivot.clone();
            for k in c..w {
                m[c][k] = m[c][k].clone() / pivot.clone();
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in c..w {
                        let sub = f.clone() * m[c][k].clone();
                        m[r][k] = m[r][k].clone() - sub;
                    }
                }
            }
        }
        let solved = aug.map(|_| Matrix { rows: n, cols: extra, data: m.into_iter().flat_map(|r| r.into_iter().skip(n)).collect() });
        Ok((det, solved))
    }

    pub fn det(&self) -> Result<T> {
        Ok(self.eliminate(None)?.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        self.eliminate(Some(&Self::identity(n)))?.1.ok_or(Error::Singular)
    }

    /// Solves `self x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let rhs = Matrix { rows: b.len(), cols: 1, data: b.to_vec() };
        Ok(self.eliminate(Some(&rhs))?.1.ok_or(Error::Singular)?.data)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_scalar).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
