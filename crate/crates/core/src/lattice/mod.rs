//! Integer lattices: bases, unimodular transforms, the orthogonality defect,
//! brute-force SVP/CVP/SIVP, Babai rounding, GGH and LWE.
//!
//! Bases are generic over [`Scalar`](crate::scalar::Scalar); use
//! [`Rational`](crate::scalar::Rational) wherever a decision depends on the result.

mod basis;
mod ggh;
mod lwe;
mod matrix;
mod search;

pub use basis::{random_unimodular, transform_basis, Basis, UnimodularMatrix};
pub use ggh::{ggh_decrypt, ggh_encrypt, ggh_keygen, ggh_keygen_with, GghKeys, DEFAULT_MAX_GOOD_DEFECT};
pub use lwe::{gauss_solve, lwe_embed, lwe_generate, LweEmbedding, LweInstance};
pub use matrix::Matrix;
pub use search::{babai_round, cvp_bruteforce, sivp_bruteforce, svp_bruteforce, LatticePoint, MAX_ENUM_DIM, MAX_SIVP_DIM};
