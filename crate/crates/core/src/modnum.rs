//! Exact integer number theory.
//!
//! Everything here is generic over [`Int`], which covers the fixed-width
//! signed integers and `BigInt`. Fixed-width callers get overflow reported
//! as [`Error::Overflow`] instead of wrapping.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Integer types usable by the number-theory routines.
pub trait Int:
    Integer + Signed + Clone + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive + ToPrimitive + Debug + Display
{
}

impl<T> Int for T where
    T: Integer + Signed + Clone + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive + ToPrimitive + Debug + Display
{
}

/// A value reduced modulo `modulus`, always in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue<T> {
    value: T,
    modulus: T,
}

impl<T: Int> Residue<T> {
    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn modulus(&self) -> &T {
        &self.modulus
    }

    pub fn into_value(self) -> T {
        self.value
    }
}

impl<T: Display> Display for Residue<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// `a·x + b·y = g` with `g = gcd(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutCertificate<T> {
    pub g: T,
    pub x: T,
    pub y: T,
    pub a: T,
    pub b: T,
}

impl<T: Int> BezoutCertificate<T> {
    /// Checks the identity and that `g` divides both inputs.
    pub fn holds(&self) -> bool {
        let lhs = self.a.clone() * self.x.clone() + self.b.clone() * self.y.clone();
        lhs == self.g && divides_raw(&self.g, &self.a) && divides_raw(&self.g, &self.b)
    }

    /// Whether an arbitrary coefficient pair satisfies this certificate's identity.
    pub fn accepts(&self, x: T, y: T) -> bool {
        self.a.clone() * x + self.b.clone() * y == self.g
    }
}

/// Prime-power decomposition with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<T> {
    factors: Vec<(T, u32)>,
}

impl<T: Int> Factorization<T> {
    pub fn factors(&self) -> &[(T, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &T> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> Result<T> {
        let mut acc = T::one();
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.checked_mul(p).ok_or(Error::Overflow("Factorization::product"))?;
            }
        }
        Ok(acc)
    }
}

impl<T: Display> Display for Factorization<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

fn require_positive<T: Int>(n: &T, what: &str) -> Result<()> {
    if n.is_positive() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be positive, got {n}")))
    }
}

fn divides_raw<T: Int>(n: &T, m: &T) -> bool {
    if n.is_zero() {
        m.is_zero()
    } else {
        m.mod_floor(n).is_zero()
    }
}

/// `a − ⌊a/n⌋·n`, defined for negative `a`.
pub fn mod_reduce<T: Int>(a: T, n: T) -> Result<Residue<T>> {
    require_positive(&n, "modulus")?;
    Ok(Residue { value: a.mod_floor(&n), modulus: n })
}

pub fn congruent<T: Int>(a: T, b: T, n: T) -> Result<bool> {
    Ok(mod_reduce(a, n.clone())? == mod_reduce(b, n)?)
}

/// `n | m`. A non-positive `n` never divides anything.
pub fn divides<T: Int>(n: T, m: T) -> bool {
    n.is_positive() && divides_raw(&n, &m)
}

/// Greatest common divisor by the Euclidean remainder chain.
pub fn gcd<T: Int>(a: T, b: T) -> Result<T> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("gcd(0, 0) is undefined"));
    }
    let (mut r0, mut r1) = (a.abs(), b.abs());
    while !r1.is_zero() {
        let r2 = r0.mod_floor(&r1);
        r0 = r1;
        r1 = r2;
    }
    Ok(r0)
}

/// Extended Euclid. Any valid coefficient pair is acceptable; `(a, 0)`
/// yields `(a, 1, 0)`.
pub fn bezout<T: Int>(a: T, b: T) -> Result<BezoutCertificate<T>> {
    if a.is_negative() || b.is_negative() {
        return Err(Error::domain("bezout expects nonnegative inputs"));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("bezout(0, 0) is undefined"));
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_x, mut x) = (T::one(), T::zero());
    let (mut old_y, mut y) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let step = |prev: T, cur: &T| -> Result<T> {
            let prod = q.checked_mul(cur).ok_or(Error::Overflow("bezout"))?;
            prev.checked_sub(&prod).ok_or(Error::Overflow("bezout"))
        };
        let nr = step(old_r, &r)?;
        old_r = std::mem::replace(&mut r, nr);
        let nx = step(old_x, &x)?;
        old_x = std::mem::replace(&mut x, nx);
        let ny = step(old_y, &y)?;
        old_y = std::mem::replace(&mut y, ny);
    }
    Ok(BezoutCertificate { g: old_r, x: old_x, y: old_y, a, b })
}

/// The inverse of `a` modulo `m`, in `[1, m)` (or 0 when `m = 1`).
pub fn mod_inverse<T: Int>(a: T, m: T) -> Result<Residue<T>> {
    require_positive(&m, "modulus")?;
    let reduced = a.mod_floor(&m);
    let cert = bezout(reduced.clone(), m.clone())?;
    if !cert.g.is_one() {
        return Err(Error::NotInvertible { value: a.to_string(), modulus: m.to_string() });
    }
    mod_reduce(cert.x, m)
}

fn mul_mod<T: Int>(a: &T, b: &T, n: &T) -> Result<T> {
    Ok(a.checked_mul(b).ok_or(Error::Overflow("modular multiplication"))?.mod_floor(n))
}

/// `a^x mod n` by square-and-multiply, reducing after every product.
pub fn mod_pow<T: Int>(a: T, x: T, n: T) -> Result<Residue<T>> {
    require_positive(&n, "modulus")?;
    if x.is_negative() {
        return Err(Error::domain("negative exponent"));
    }
    let two = T::one() + T::one();
    let mut base = a.mod_floor(&n);
    let mut exp = x;
    let mut acc = T::one().mod_floor(&n);
    while !exp.is_zero() {
        if exp.is_odd() {
            acc = mul_mod(&acc, &base, &n)?;
        }
        exp = exp.div_floor(&two);
        if !exp.is_zero() {
            base = mul_mod(&base, &base, &n)?;
        }
    }
    Ok(Residue { value: acc, modulus: n })
}

/// Smallest `p ≥ 1` with `a^p ≡ 1 (mod n)`, by repeated multiplication.
pub fn period<T: Int>(a: T, n: T) -> Result<T> {
    require_positive(&n, "modulus")?;
    let not_periodic = || Error::NotPeriodic { base: a.to_string(), modulus: n.to_string() };
    if !gcd(a.clone(), n.clone())?.is_one() {
        return Err(not_periodic());
    }
    let one = T::one().mod_floor(&n);
    let base = a.mod_floor(&n);
    let mut acc = base.clone();
    let mut p = T::one();
    while acc != one {
        acc = mul_mod(&acc, &base, &n)?;
        p = p + T::one();
        if p > n {
            return Err(not_periodic());
        }
    }
    Ok(p)
}

/// Smallest `y ≥ 0` with `a^y ≡ x (mod n)`; `log_a 1 = 0`.
pub fn discrete_log<T: Int>(a: T, x: T, n: T) -> Result<T> {
    require_positive(&n, "modulus")?;
    let target = x.mod_floor(&n);
    let base = a.mod_floor(&n);
    let mut acc = T::one().mod_floor(&n);
    let mut y = T::zero();
    // The sequence a^0, a^1, ... is eventually periodic with pre-period plus
    // period at most n, so n steps cover every reachable value.
    while y < n {
        if acc == target {
            return Ok(y);
        }
        acc = mul_mod(&acc, &base, &n)?;
        y = y + T::one();
    }
    Err(Error::NoLogarithm)
}

/// Deterministic trial division up to `√n`.
pub fn is_prime<T: Int>(n: T) -> bool {
    let two = T::one() + T::one();
    if n < two {
        return false;
    }
    let mut d = two;
    loop {
        match d.checked_mul(&d) {
            Some(sq) if sq <= n => {}
            _ => return true,
        }
        if n.mod_floor(&d).is_zero() {
            return false;
        }
        d = d + T::one();
    }
}

/// Prime factorization by trial division.
pub fn factorize<T: Int>(n: T) -> Result<Factorization<T>> {
    let two = T::one() + T::one();
    if n < two {
        return Err(Error::domain(format!("cannot factor {n} (< 2)")));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = two;
    loop {
        match d.checked_mul(&d) {
            Some(sq) if sq <= rest => {}
            _ => break,
        }
        let mut e = 0u32;
        while rest.mod_floor(&d).is_zero() {
            rest = rest.div_floor(&d);
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d = d + T::one();
    }
    if rest > T::one() {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

/// Euler's totient from the factorization.
pub fn totient<T: Int>(n: T) -> Result<T> {
    if n.is_one() {
        return Ok(T::one());
    }
    let f = factorize(n.clone())?;
    let mut phi = n;
    for (p, _) in f.factors() {
        phi = phi.div_floor(p) * (p.clone() - T::one());
    }
    Ok(phi)
}
