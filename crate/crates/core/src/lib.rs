pub mod agility;
pub mod dilithium;
pub mod ecc;
pub mod error;
pub mod kyber;
pub mod lattice;
pub mod modnum;
pub mod polyring;
pub mod rsa;
pub mod scalar;
pub mod shor;
pub mod xof;

pub use error::{Error, Result};

/// Lattice basis with exact rational arithmetic.
pub type RationalBasis = lattice::Basis<scalar::Rational>;
/// Lattice basis over `f64`, for quick exploration.
pub type FloatBasis = lattice::Basis<f64>;
pub type RationalMatrix = lattice::Matrix<scalar::Rational>;
pub type FloatMatrix = lattice::Matrix<f64>;
/// Integer polynomials, as used for the long-division examples.
pub type IntPoly = polyring::Poly<i64>;
