//! Polynomials over `Z_q`, the negacyclic ring `Z_q[X]/(X^n + 1)` and
//! vectors and matrices over it.

mod codec;
mod poly;
mod ring;

pub use codec::{
    bits_to_poly, bits_to_string, coeff_bits, half_q, pack_elem, pack_vec, packed_len, parse_bits, poly_to_bits,
    round_coeffs, scale_half_q, unpack_elem, unpack_vec,
};
pub use poly::{render_coeffs, Poly, PolyZq};
pub use ring::{center, reduce_negacyclic, RingElem, RingMat, RingVec};

/// Lists every element of `Z_q[X]/(X^n + 1)`. Only sensible for tiny `q^n`.
pub fn enumerate_ring(n: usize, q: u64) -> crate::Result<Vec<RingElem>> {
    let total = (q as u128).checked_pow(n as u32).filter(|t| *t <= 1 << 20);
    let Some(total) = total else {
        return Err(crate::Error::Unsupported(format!("ring of size {q}^{n} is too large to enumerate")));
    };
    (0..total as u64)
        .map(|mut idx| {
            let coeffs: Vec<u64> = (0..n)
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    c
                })
                .collect();
            RingElem::new(n, q, &coeffs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ring_cardinality_is_q_to_the_n() {
        let all = enumerate_ring(2, 3).unwrap();
        assert_eq!(all.len(), 9);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 9);
        // closure under multiplication
        for a in &all {
            for b in &all {
                assert!(all.contains(&a.mul(b).unwrap()));
            }
        }
        assert_eq!(enumerate_ring(3, 2).unwrap().len(), 8);
    }
}
