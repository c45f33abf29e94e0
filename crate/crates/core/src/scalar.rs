//! Scalar abstraction for the lattice linear algebra.
//!
//! Correctness paths run on [`Rational`] (exact); [`f64`] is accepted for
//! quick numerical experiments where tolerances are acceptable.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Exact types treat only zero as zero; floats use an absolute tolerance.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// Nearest integer, half-integers toward +∞.
    fn round_half_up(&self) -> Self;

    fn is_negligible(&self) -> bool;

    fn is_integral(&self) -> bool {
        (self.clone() - self.round_half_up()).is_negligible()
    }

    /// The integer value if `self` is integral and fits.
    fn to_int(&self) -> Option<i64> {
        if self.is_integral() {
            self.round_half_up().to_f64().map(|f| f as i64)
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn round_half_up(&self) -> Self {
        (self + 0.5).floor()
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-9
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn round_half_up(&self) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (self + half).floor()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_int(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer_big().to_i64()
        } else {
            None
        }
    }
}

trait ToIntegerBig {
    fn to_integer_big(&self) -> BigInt;
}

impl ToIntegerBig for BigRational {
    fn to_integer_big(&self) -> BigInt {
        self.numer() / self.denom()
    }
}

/// Display helper that prints integral values without a denominator.
pub fn fmt_scalar<T: Scalar>(v: &T) -> String {
    match v.to_int() {
        Some(i) => i.to_string(),
        None => format!("{v}"),
    }
}
