//! GGH encryption in the row convention: `B^ = U B`, `c = m B^ + e`.

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

use super::basis::{Basis, UnimodularMatrix};
use super::search::babai_round;

/// Default upper bound on the defect of an acceptable private basis.
pub const DEFAULT_MAX_GOOD_DEFECT: f64 = 1.2;

#[derive(Debug, Clone, PartialEq)]
pub struct GghKeys {
    /// Rows are the good basis vectors.
    pub private: Vec<Vec<i64>>,
    /// `U * private`.
    pub public: Vec<Vec<i64>>,
    pub transform: UnimodularMatrix,
}

fn row_basis(rows: &[Vec<i64>]) -> Result<Basis<Rational>> {
    Basis::from_ints(rows)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let inner = b.len();
    a.iter()
        .map(|row| {
            if row.len() != inner {
                return Err(Error::DimensionMismatch { expected: inner, got: row.len() });
            }
            (0..b[0].len())
                .map(|j| {
                    (0..inner)
                        .try_fold(0i64, |acc, k| acc.checked_add(row[k].checked_mul(b[k][j])?))
                        .ok_or(Error::Overflow("ggh matrix product"))
                })
                .collect()
        })
        .collect()
}

fn row_times(v: &[i64], m: &[Vec<i64>]) -> Result<Vec<i64>> {
    Ok(mat_mul(&[v.to_vec()], m)?.remove(0))
}

pub fn ggh_keygen(good: &[Vec<i64>], transform: UnimodularMatrix) -> Result<GghKeys> {
    ggh_keygen_with(good, transform, DEFAULT_MAX_GOOD_DEFECT)
}

pub fn ggh_keygen_with(good: &[Vec<i64>], transform: UnimodularMatrix, max_defect: f64) -> Result<GghKeys> {
    let good_defect = row_basis(good)?.defect();
    if good_defect >= max_defect {
        return Err(Error::KeyGen(format!("private basis defect {good_defect:.4} is not below {max_defect}")));
    }
    if transform.dim() != good.len() {
        return Err(Error::DimensionMismatch { expected: good.len(), got: transform.dim() });
    }
    let public = mat_mul(transform.rows(), good)?;
    let public_defect = row_basis(&public)?.defect();
    if public_defect <= good_defect {
        return Err(Error::KeyGen(format!("public basis defect {public_defect:.4} does not exceed {good_defect:.4}")));
    }
    Ok(GghKeys { private: good.to_vec(), public, transform })
}

pub fn ggh_encrypt(m: &[i64], public: &[Vec<i64>], e: &[i64]) -> Result<Vec<i64>> {
    if e.len() != public.len() {
        return Err(Error::DimensionMismatch { expected: public.len(), got: e.len() });
    }
    let mb = row_times(m, public)?;
    mb.iter().zip(e).map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("ggh_encrypt"))).collect()
}

/// `round(c B^-1) U^-1`. A too-large error is not detected.
pub fn ggh_decrypt(c: &[i64], keys: &GghKeys) -> Result<Vec<i64>> {
    let target: Vec<Rational> = c.iter().map(|x| Rational::from_int(*x)).collect();
    let rounded = babai_round(&row_basis(&keys.private)?, &target)?;
    row_times(&rounded.coeffs, keys.transform.inverse().rows())
}
