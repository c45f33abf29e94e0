use std::fmt;

use crate::error::{Error, Result};

use super::poly::{render_coeffs, PolyZq};

/// Element of `R_q = Z_q[X]/(X^n + 1)`: exactly `n` coefficients in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    n: usize,
    q: u64,
    coeffs: Vec<u64>,
}

/// Maps `c` in `[0, q)` to the centered representative in `(-q/2, q/2]`.
pub fn center(c: u64, q: u64) -> i64 {
    if c > q / 2 {
        c as i64 - q as i64
    } else {
        c as i64
    }
}

fn check_params(n: usize, q: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("ring degree must be positive"));
    }
    if q < 2 || q > u32::MAX as u64 {
        return Err(Error::domain(format!("modulus {q} outside [2, 2^32)")));
    }
    Ok(())
}

impl RingElem {
    pub fn zero(n: usize, q: u64) -> Self {
        RingElem { n, q, coeffs: vec![0; n] }
    }

    pub fn one(n: usize, q: u64) -> Self {
        let mut r = Self::zero(n, q);
        r.coeffs[0] = 1;
        r
    }

    /// Coefficients ascending; shorter input is zero-padded, longer is folded
    /// negacyclically.
    pub fn new(n: usize, q: u64, coeffs: &[u64]) -> Result<Self> {
        check_params(n, q)?;
        Ok(reduce_negacyclic(&PolyZq::new(q, coeffs)?, n))
    }

    pub fn from_signed(n: usize, q: u64, coeffs: &[i64]) -> Result<Self> {
        check_params(n, q)?;
        Ok(reduce_negacyclic(&PolyZq::from_signed(q, coeffs)?, n))
    }

    pub(crate) fn from_raw(n: usize, q: u64, coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.len() == n && coeffs.iter().all(|c| *c < q));
        RingElem { n, q, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn centered(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| center(*c, self.q)).collect()
    }

    /// Largest centered coefficient magnitude.
    pub fn inf_norm(&self) -> u64 {
        self.centered().iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    pub fn to_poly(&self) -> PolyZq {
        PolyZq::trimmed(self.q, self.coeffs.clone())
    }

    fn same_params(&self, other: &Self) -> Result<()> {
        if self.n == other.n && self.q == other.q {
            Ok(())
        } else {
            Err(Error::ParamMismatch(format!(
                "ring (n={}, q={}) vs (n={}, q={})",
                self.n, self.q, other.n, other.q
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_params(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % self.q).collect();
        Ok(Self::from_raw(self.n, self.q, coeffs))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| (self.q - c) % self.q).collect();
        Self::from_raw(self.n, self.q, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Schoolbook negacyclic product: `x^(n+j)` folds to `-x^j`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_params(other)?;
        let (n, q) = (self.n, self.q);
        let mut pos = vec![0u64; n];
        let mut neg = vec![0u64; n];
        // raw products can be summed without reduction while n*(q-1)^2 fits
        let lazy = ((q - 1) as u128).pow(2) * (n as u128) < u64::MAX as u128;
        let b = &other.coeffs;
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            let split = n - i;
            if lazy {
                for (acc, bj) in pos[i..].iter_mut().zip(&b[..split]) {
                    *acc += a * bj;
                }
                for (acc, bj) in neg[..i].iter_mut().zip(&b[split..]) {
                    *acc += a * bj;
                }
            } else {
                for (acc, bj) in pos[i..].iter_mut().zip(&b[..split]) {
                    *acc += a * bj % q;
                }
                for (acc, bj) in neg[..i].iter_mut().zip(&b[split..]) {
                    *acc += a * bj % q;
                }
            }
        }
        let coeffs = pos.iter().zip(&neg).map(|(p, m)| (p % q + q - m % q) % q).collect();
        Ok(Self::from_raw(n, q, coeffs))
    }

    pub fn scale(&self, k: u64) -> Self {
        let q = self.q;
        let coeffs = self.coeffs.iter().map(|c| c * (k % q) % q).collect();
        Self::from_raw(self.n, q, coeffs)
    }

    /// Centered rendering, e.g. `5x^3-2x^2+2x-1`.
    pub fn display_centered(&self) -> String {
        render_coeffs(&self.centered())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly().to_string())
    }
}

/// Folds `x^(n+j) -> -x^j` until every degree is below `n`.
pub fn reduce_negacyclic(p: &PolyZq, n: usize) -> RingElem {
    let q = p.q();
    let mut out = vec![0u64; n];
    for (i, c) in p.coeffs().iter().enumerate() {
        let (block, slot) = (i / n, i % n);
        out[slot] = if block % 2 == 0 { (out[slot] + c) % q } else { (out[slot] + q - c) % q };
    }
    RingElem::from_raw(n, q, out)
}

/// Element of `R_q^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingVec {
    n: usize,
    q: u64,
    entries: Vec<RingElem>,
}

impl RingVec {
    pub fn new(entries: Vec<RingElem>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::domain("empty ring vector"));
        };
        let (n, q) = (first.n, first.q);
        for e in &entries {
            first.same_params(e)?;
        }
        Ok(RingVec { n, q, entries })
    }

    pub fn zero(k: usize, n: usize, q: u64) -> Self {
        RingVec { n, q, entries: vec![RingElem::zero(n, q); k] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &RingElem {
        &self.entries[i]
    }

    pub fn inf_norm(&self) -> u64 {
        self.entries.iter().map(RingElem::inf_norm).max().unwrap_or(0)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        if self.n != other.n || self.q != other.q {
            return Err(Error::ParamMismatch(format!("vector over (n={}, q={}) vs (n={}, q={})", self.n, self.q, other.n, other.q)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(RingVec { n: self.n, q: self.q, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(RingVec { n: self.n, q: self.q, entries })
    }

    /// Multiplies every entry by the ring element `c`.
    pub fn mul_elem(&self, c: &RingElem) -> Result<Self> {
        let entries = self.entries.iter().map(|a| a.mul(c)).collect::<Result<_>>()?;
        Ok(RingVec { n: self.n, q: self.q, entries })
    }

    /// `sum_i u_i * v_i`.
    pub fn dot(&self, other: &Self) -> Result<RingElem> {
        self.same_shape(other)?;
        let mut acc = RingElem::zero(self.n, self.q);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = acc.add(&a.mul(b)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RingVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Row-major matrix over `R_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMat {
    rows: usize,
    cols: usize,
    n: usize,
    q: u64,
    entries: Vec<RingElem>,
}

impl RingMat {
    pub fn from_rows(rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::domain("empty ring matrix"));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            entries.extend(row);
        }
        let first = entries[0].clone();
        for e in &entries {
            first.same_params(e)?;
        }
        Ok(RingMat { rows: r, cols: c, n: first.n, q: first.q, entries })
    }

    pub fn identity(k: usize, n: usize, q: u64) -> Self {
        let mut entries = vec![RingElem::zero(n, q); k * k];
        for i in 0..k {
            entries[i * k + i] = RingElem::one(n, q);
        }
        RingMat { rows: k, cols: k, n, q, entries }
    }

    /// Builds a matrix entry by entry in row-major order.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElem) -> Result<Self> {
        Self::from_rows((0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        RingMat { rows: self.cols, cols: self.rows, n: self.n, q: self.q, entries }
    }

    fn row(&self, i: usize) -> RingVec {
        RingVec { n: self.n, q: self.q, entries: self.entries[i * self.cols..(i + 1) * self.cols].to_vec() }
    }

    pub fn matvec(&self, v: &RingVec) -> Result<RingVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let entries = (0..self.rows).map(|i| self.row(i).dot(v)).collect::<Result<_>>()?;
        Ok(RingVec { n: self.n, q: self.q, entries })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let ot = other.transpose();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..other.cols {
                entries.push(row.dot(&ot.row(j))?);
            }
        }
        Ok(RingMat { rows: self.rows, cols: other.cols, n: self.n, q: self.q, entries })
    }
}

impl fmt::Display for RingMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}
