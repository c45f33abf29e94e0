//! Learning-with-errors instances over `Z_q` and their lattice embedding.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::modnum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LweInstance {
    pub q: u64,
    /// `n x n`, entries in `[0, q)`.
    pub a: Vec<Vec<u64>>,
    pub s: Vec<u64>,
    /// Centered error entries.
    pub e: Vec<i64>,
    pub t: Vec<u64>,
    pub error_bound: u64,
}

impl LweInstance {
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `t = A s + e (mod q)`.
    pub fn from_parts(q: u64, a: Vec<Vec<u64>>, s: Vec<u64>, e: Vec<i64>) -> Result<Self> {
        if !modnum::is_prime(q as i128) {
            return Err(Error::domain(format!("LWE modulus {q} is not prime")));
        }
        let n = s.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) || e.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.len() });
        }
        let a: Vec<Vec<u64>> = a.into_iter().map(|r| r.into_iter().map(|x| x % q).collect()).collect();
        let s: Vec<u64> = s.into_iter().map(|x| x % q).collect();
        let t = mat_vec(&a, &s, q)
            .iter()
            .zip(&e)
            .map(|(x, err)| (*x as i128 + *err as i128).rem_euclid(q as i128) as u64)
            .collect();
        let error_bound = e.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        Ok(LweInstance { q, a, s, e, t, error_bound })
    }

    pub fn holds(&self) -> bool {
        let lhs = mat_vec(&self.a, &self.s, self.q);
        lhs.iter()
            .zip(&self.e)
            .zip(&self.t)
            .all(|((x, e), t)| (*x as i128 + *e as i128).rem_euclid(self.q as i128) as u64 == *t)
            && self.e.iter().all(|x| x.unsigned_abs() <= self.error_bound)
    }
}

fn mat_vec(a: &[Vec<u64>], s: &[u64], q: u64) -> Vec<u64> {
    a.iter()
        .map(|row| (row.iter().zip(s).map(|(x, y)| *x as u128 * *y as u128).sum::<u128>() % q as u128) as u64)
        .collect()
}

/// Uniform `A` and `s`, errors uniform in `[-error_bound, error_bound]`.
pub fn lwe_generate(n: usize, q: u64, error_bound: u64, rng: &mut impl RngCore) -> Result<LweInstance> {
    let a = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
    let s = (0..n).map(|_| rng.gen_range(0..q)).collect();
    let b = error_bound as i64;
    let e = (0..n).map(|_| rng.gen_range(-b..=b)).collect();
    let mut inst = LweInstance::from_parts(q, a, s, e)?;
    inst.error_bound = error_bound;
    Ok(inst)
}

/// `(A | E_n | -t)` with the witness `(s, e, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LweEmbedding {
    pub matrix: Vec<Vec<i64>>,
    pub witness: Vec<i64>,
    pub q: u64,
}

impl LweEmbedding {
    /// `matrix * witness == 0 (mod q)`.
    pub fn witness_holds(&self) -> bool {
        self.matrix.iter().all(|row| {
            let acc: i128 = row.iter().zip(&self.witness).map(|(a, w)| *a as i128 * *w as i128).sum();
            acc.rem_euclid(self.q as i128) == 0
        })
    }
}

pub fn lwe_embed(inst: &LweInstance) -> LweEmbedding {
    let n = inst.n();
    let matrix = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = inst.a[i].iter().map(|x| *x as i64).collect();
            row.extend((0..n).map(|j| (i == j) as i64));
            row.push(-(inst.t[i] as i64));
            row
        })
        .collect();
    let mut witness: Vec<i64> = inst.s.iter().map(|x| *x as i64).collect();
    witness.extend(&inst.e);
    witness.push(1);
    LweEmbedding { matrix, witness, q: inst.q }
}

/// Solves `A s = t (mod q)` by elimination over the field `Z_q`.
pub fn gauss_solve(a: &[Vec<u64>], t: &[u64], q: u64) -> Result<Vec<u64>> {
    let n = t.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    if !modnum::is_prime(q as i128) {
        return Err(Error::domain(format!("{q} is not prime")));
    }
    let qq = q as u128;
    let mut m: Vec<Vec<u64>> = a.iter().zip(t).map(|(r, ti)| r.iter().chain([ti]).map(|x| x % q).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r][c] != 0).ok_or(Error::Singular)?;
        m.swap(p, c);
        let inv = modnum::mod_inverse(m[c][c] as i128, q as i128)?.into_value() as u128;
        for k in c..=n {
            m[c][k] = (m[c][k] as u128 * inv % qq) as u64;
        }
        for r in 0..n {
            if r != c && m[r][c] != 0 {
                let f = m[r][c] as u128;
                for k in c..=n {
                    let sub = (f * m[c][k] as u128 % qq) as u64;
                    m[r][k] = (m[r][k] + q - sub) % q;
                }
            }
        }
    }
    Ok(m.iter().map(|r| r[n]).collect())
}
