use crate::error::{Error, Result};

use super::ring::{RingElem, RingVec};

/// Parses a bit string such as `"1001"`.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Encoding(format!("`{other}` is not a bit"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

/// Bit string as written, leftmost bit to the highest degree: `1001` is `x^3 + 1`.
pub fn bits_to_poly(bits: &[u8], n: usize, q: u64) -> Result<RingElem> {
    if bits.len() > n {
        return Err(Error::MessageTooLong { bits: bits.len(), capacity: n });
    }
    if let Some(b) = bits.iter().find(|b| **b > 1) {
        return Err(Error::Encoding(format!("{b} is not a bit")));
    }
    let coeffs: Vec<u64> = bits.iter().rev().map(|b| *b as u64).collect();
    RingElem::new(n, q, &coeffs)
}

/// Inverse of [`bits_to_poly`]; always returns `n` bits.
pub fn poly_to_bits(p: &RingElem) -> Result<Vec<u8>> {
    p.coeffs()
        .iter()
        .rev()
        .map(|c| match c {
            0 | 1 => Ok(*c as u8),
            other => Err(Error::Decoding(format!("coefficient {other} is not binary"))),
        })
        .collect()
}

/// `q/2` rounded half up: 4 for `q = 7`, 1665 for `q = 3329`.
pub fn half_q(q: u64) -> u64 {
    q.div_ceil(2)
}

pub fn scale_half_q(p: &RingElem) -> Result<RingElem> {
    if let Some(c) = p.coeffs().iter().find(|c| **c > 1) {
        return Err(Error::Encoding(format!("coefficient {c} is not binary")));
    }
    Ok(p.scale(half_q(p.q())))
}

fn circular_distance(a: u64, b: u64, q: u64) -> u64 {
    let d = a.abs_diff(b);
    d.min(q - d)
}

/// Rounds each coefficient to 1 when it lies at least as close to `half_q`
/// as to 0, otherwise to 0.
pub fn round_coeffs(p: &RingElem) -> RingElem {
    let q = p.q();
    let h = half_q(q);
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| (circular_distance(*c, h, q) <= circular_distance(*c, 0, q)) as u64)
        .collect();
    RingElem::from_raw(p.n(), q, coeffs)
}

/// Bits per packed coefficient: `ceil(log2 q)`.
pub fn coeff_bits(q: u64) -> u32 {
    64 - (q - 1).leading_zeros()
}

/// Bytes taken by one packed ring element.
pub fn packed_len(n: usize, q: u64) -> usize {
    (n * coeff_bits(q) as usize).div_ceil(8)
}

/// Little-endian bit packing, ascending degree, fixed width per coefficient.
pub fn pack_elem(p: &RingElem, out: &mut Vec<u8>) {
    let w = coeff_bits(p.q());
    let start = out.len();
    out.resize(start + packed_len(p.n(), p.q()), 0);
    let mut pos = 0usize;
    for c in p.coeffs() {
        for b in 0..w {
            if (c >> b) & 1 == 1 {
                out[start + pos / 8] |= 1 << (pos % 8);
            }
            pos += 1;
        }
    }
}

pub fn unpack_elem(bytes: &[u8], n: usize, q: u64) -> Result<RingElem> {
    let w = coeff_bits(q);
    if bytes.len() != packed_len(n, q) {
        return Err(Error::Decoding(format!("expected {} bytes, got {}", packed_len(n, q), bytes.len())));
    }
    let mut coeffs = Vec::with_capacity(n);
    let mut pos = 0usize;
    for _ in 0..n {
        let mut c = 0u64;
        for b in 0..w {
            if (bytes[pos / 8] >> (pos % 8)) & 1 == 1 {
                c |= 1 << b;
            }
            pos += 1;
        }
        if c >= q {
            return Err(Error::Decoding(format!("coefficient {c} not below {q}")));
        }
        coeffs.push(c);
    }
    if !pos.is_multiple_of(8) && bytes[pos / 8] >> (pos % 8) != 0 {
        return Err(Error::Decoding("nonzero padding bits".into()));
    }
    Ok(RingElem::from_raw(n, q, coeffs))
}

pub fn pack_vec(v: &RingVec, out: &mut Vec<u8>) {
    for e in v.entries() {
        pack_elem(e, out);
    }
}

pub fn unpack_vec(bytes: &[u8], k: usize, n: usize, q: u64) -> Result<RingVec> {
    let len = packed_len(n, q);
    if bytes.len() != k * len {
        return Err(Error::Decoding(format!("expected {} bytes, got {}", k * len, bytes.len())));
    }
    RingVec::new(bytes.chunks(len).map(|c| unpack_elem(c, n, q)).collect::<Result<_>>()?)
}
