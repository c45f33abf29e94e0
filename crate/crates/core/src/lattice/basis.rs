use std::fmt;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::scalar::{fmt_scalar, Rational, Scalar};

use super::matrix::{dot, Matrix};

/// Lattice basis; the basis vectors are the columns of the stored matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis<T> {
    m: Matrix<T>,
}

impl<T: Scalar> Basis<T> {
    /// Each inner vector is one basis vector.
    pub fn new(vectors: Vec<Vec<T>>) -> Result<Self> {
        let m = Matrix::from_rows(vectors)?.transpose();
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        if m.det()?.is_negligible() {
            return Err(Error::Singular);
        }
        Ok(Basis { m })
    }

    pub fn from_ints(vectors: &[Vec<i64>]) -> Result<Self> {
        Self::new(vectors.iter().map(|v| v.iter().map(|x| T::from_int(*x)).collect()).collect())
    }

    pub fn from_matrix(m: Matrix<T>) -> Result<Self> {
        Self::new((0..m.cols()).map(|j| m.col(j)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Basis { m: Matrix::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn vector(&self, i: usize) -> Vec<T> {
        self.m.col(i)
    }

    pub fn vectors(&self) -> Vec<Vec<T>> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    pub fn det(&self) -> T {
        self.m.det().expect("square by construction")
    }

    /// `sum g_i v_i`.
    pub fn combine(&self, coeffs: &[i64]) -> Result<Vec<T>> {
        self.m.apply(&coeffs.iter().map(|c| T::from_int(*c)).collect::<Vec<_>>())
    }

    /// Integer coordinates of `v`, if it is a lattice point.
    pub fn coordinates(&self, v: &[T]) -> Result<Option<Vec<i64>>> {
        let x = self.m.solve(v)?;
        Ok(x.iter().map(Scalar::to_int).collect())
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Both bases generate the same lattice.
    pub fn same_lattice(&self, other: &Self) -> Result<bool> {
        for v in other.vectors() {
            if !self.contains(&v)? {
                return Ok(false);
            }
        }
        for v in self.vectors() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(prod |v_i|) / |det B|`.
    pub fn defect(&self) -> f64 {
        // squared ratio is exact in T; only the final root is floating point
        let num = self.vectors().iter().fold(T::one(), |acc, v| acc * dot(v, v));
        let det = self.det();
        let ratio = num / (det.clone() * det);
        ratio.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    pub fn is_orthogonal(&self) -> bool {
        let vs = self.vectors();
        (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| dot(&vs[i], &vs[j]).is_negligible()))
    }

    pub fn max_norm_sq(&self) -> T {
        self.vectors()
            .iter()
            .map(|v| dot(v, v))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

impl<T: Scalar> fmt::Display for Basis<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.vectors() {
            let parts: Vec<String> = v.iter().map(fmt_scalar).collect();
            writeln!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Integer matrix with determinant `+-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMatrix {
    rows: Vec<Vec<i64>>,
}

impl UnimodularMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m: Matrix<Rational> = Matrix::from_int_rows(&rows)?;
        let det = m.det()?;
        if det != Rational::from_int(1) && det != Rational::from_int(-1) {
            return Err(Error::domain(format!("determinant {det} is not +-1")));
        }
        Ok(UnimodularMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMatrix { rows: (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_int_rows(&self.rows).expect("square nonempty")
    }

    /// Exact integer inverse.
    pub fn inverse(&self) -> Self {
        let inv = self.to_matrix::<Rational>().inverse().expect("unimodular");
        let rows = (0..inv.rows())
            .map(|i| inv.row(i).iter().map(|x| x.to_int().expect("integral inverse")).collect())
            .collect();
        UnimodularMatrix { rows }
    }
}

/// Product of `steps` random elementary operations: row additions with
/// multiplier in `[-3, 3]`, swaps, negations.
pub fn random_unimodular(n: usize, rng: &mut impl RngCore, steps: usize) -> UnimodularMatrix {
    let mut rows = UnimodularMatrix::identity(n).rows;
    for _ in 0..steps {
        match rng.gen_range(0..4) {
            0 | 1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let k = rng.gen_range(-3..=3i64);
                for c in 0..n {
                    rows[i][c] += k * rows[j][c];
                }
            }
            2 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                rows.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                rows[i].iter_mut().for_each(|x| *x = -*x);
            }
        }
    }
    UnimodularMatrix { rows }
}

/// Columns of `B U`.
pub fn transform_basis<T: Scalar>(b: &Basis<T>, u: &UnimodularMatrix) -> Result<Basis<T>> {
    if u.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: u.dim() });
    }
    Ok(Basis { m: b.m.mul(&u.to_matrix())? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xof::seeded_stream;

    #[test]
    fn defect_examples() {
        assert_eq!(Basis::<Rational>::identity(3).defect(), 1.0);
        assert!((Basis::<Rational>::from_ints(&[vec![2, 0], vec![0, 3]]).unwrap().defect() - 1.0).abs() < 1e-12);
        let d = Basis::<Rational>::from_ints(&[vec![1, 0], vec![1, 1]]).unwrap().defect();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        let d = Basis::<f64>::from_ints(&[vec![1, 0], vec![1, 1]]).unwrap().defect();
        assert!((d - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(Basis::<Rational>::from_ints(&[vec![1, 2], vec![2, 4]]), Err(Error::Singular));
    }

    #[test]
    fn unimodular_draws() {
        let mut rng = seeded_stream(1, "uni");
        assert_eq!(random_unimodular(3, &mut rng, 0), UnimodularMatrix::identity(3));
        for _ in 0..100 {
            let u = random_unimodular(3, &mut rng, 12);
            let det = u.to_matrix::<Rational>().det().unwrap();
            assert!(det == Rational::from_int(1) || det == Rational::from_int(-1));
            let prod = u.to_matrix::<Rational>().mul(&u.inverse().to_matrix()).unwrap();
            assert_eq!(prod, Matrix::identity(3));
        }
        assert!(UnimodularMatrix::new(vec![vec![2, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn identity_transform_is_noop() {
        let b = Basis::<Rational>::from_ints(&[vec![2, 1], vec![0, 3]]).unwrap();
        assert_eq!(transform_basis(&b, &UnimodularMatrix::identity(2)).unwrap(), b);
        assert!(transform_basis(&b, &UnimodularMatrix::identity(3)).is_err());
    }

    #[test]
    fn membership() {
        let b = Basis::<Rational>::from_ints(&[vec![2, 0], vec![1, 2]]).unwrap();
        let p = |v: &[i64]| v.iter().map(|x| Rational::from_int(*x)).collect::<Vec<_>>();
        assert_eq!(b.coordinates(&p(&[3, 2])).unwrap(), Some(vec![1, 1]));
        assert!(!b.contains(&p(&[1, 0])).unwrap());
    }
}
