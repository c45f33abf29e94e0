use std::fmt;

use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::modnum;

/// Polynomial with coefficients in an exact ring (`i64`, `BigInt`,
/// `BigRational`), ascending degree, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// `x^k`.
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Poly::new((0..len).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Poly::new((0..len).map(|i| get(&self.coeffs, i) - get(&other.coeffs, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    /// Long division. Every step's leading quotient term must be exact in
    /// `T`; for integer coefficients that holds whenever the divisor is monic.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let (Some(dd), Some(lead)) = (divisor.degree(), divisor.leading()) else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].clone();
            if !c.is_zero() {
                let factor = c.clone() / lead.clone();
                if factor.clone() * lead.clone() != c {
                    return Err(Error::domain("leading coefficient of the divisor does not divide the dividend"));
                }
                let shift = top - dd;
                for (k, dc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] = rem[shift + k].clone() - factor.clone() * dc.clone();
                }
                quot[shift] = factor;
            }
            rem.pop();
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }
}

fn write_terms<I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (usize, bool, String)>,
{
    let mut first = true;
    for (deg, negative, mag) in terms {
        if negative {
            f.write_str("-")?;
        } else if !first {
            f.write_str("+")?;
        }
        first = false;
        let show_mag = deg == 0 || mag != "1";
        if show_mag {
            f.write_str(&mag)?;
        }
        match deg {
            0 => {}
            1 => f.write_str("x")?,
            d => write!(f, "x^{d}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<T: Num + Clone + Signed + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d, c.is_negative(), c.abs().to_string()));
        write_terms(f, terms)
    }
}

/// Renders ascending integer coefficients in descending-degree notation,
/// e.g. `[3, 6, 6, 3]` as `3x^3+6x^2+6x+3`.
pub fn render_coeffs(coeffs: &[i64]) -> String {
    struct R<'a>(&'a [i64]);
    impl fmt::Display for R<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let terms = self
                .0
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| **c != 0)
                .map(|(d, c)| (d, *c < 0, c.unsigned_abs().to_string()));
            write_terms(f, terms)
        }
    }
    R(coeffs).to_string()
}

/// Polynomial over `Z_q`, coefficients in `[0, q)`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyZq {
    q: u64,
    coeffs: Vec<u64>,
}

impl PolyZq {
    pub fn new(q: u64, coeffs: &[u64]) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain(format!("modulus {q} < 2")));
        }
        Ok(Self::trimmed(q, coeffs.iter().map(|c| c % q).collect()))
    }

    /// Reduces signed coefficients into `[0, q)`.
    pub fn from_signed(q: u64, coeffs: &[i64]) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain(format!("modulus {q} < 2")));
        }
        Ok(Self::trimmed(q, coeffs.iter().map(|c| c.rem_euclid(q as i64) as u64).collect()))
    }

    pub(crate) fn trimmed(q: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyZq { q, coeffs }
    }

    pub fn zero(q: u64) -> Self {
        PolyZq { q, coeffs: Vec::new() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::ParamMismatch(format!("moduli {} and {}", self.q, other.q)))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Ok(Self::trimmed(self.q, (0..len).map(|i| (get(&self.coeffs, i) + get(&other.coeffs, i)) % self.q).collect()))
    }

    pub fn neg(&self) -> Self {
        Self::trimmed(self.q, self.coeffs.iter().map(|c| (self.q - c) % self.q).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Schoolbook convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.q));
        }
        let q = self.q as u128;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + *a as u128 * *b as u128) % q;
            }
        }
        Ok(Self::trimmed(self.q, out.into_iter().map(|c| c as u64).collect()))
    }

    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_modulus(divisor)?;
        let Some(dd) = divisor.degree() else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let q = self.q;
        let lead_inv = modnum::mod_inverse(divisor.coeffs[dd] as i128, q as i128)
            .map_err(|_| Error::domain("leading coefficient of the divisor is a zero divisor mod q"))?
            .into_value() as u64;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top];
            if c != 0 {
                let factor = (c as u128 * lead_inv as u128 % q as u128) as u64;
                let shift = top - dd;
                for (k, dc) in divisor.coeffs.iter().enumerate() {
                    let sub = (factor as u128 * *dc as u128 % q as u128) as u64;
                    rem[shift + k] = (rem[shift + k] + q - sub) % q;
                }
                quot[shift] = factor;
            }
            rem.pop();
        }
        Ok((Self::trimmed(q, quot), Self::trimmed(q, rem)))
    }

    /// `x^n + 1` over `Z_q`.
    pub fn negacyclic_modulus(n: usize, q: u64) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = 1 % q;
        coeffs[n] = 1;
        Self::trimmed(q, coeffs)
    }
}

impl fmt::Display for PolyZq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signed: Vec<i64> = self.coeffs.iter().map(|c| *c as i64).collect();
        f.write_str(&render_coeffs(&signed))
    }
}
