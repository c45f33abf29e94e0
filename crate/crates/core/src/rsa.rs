//! Textbook RSA with the two-digit letter code and decimal block splitting.
//!
//! Naming follows the workbench convention: `d` is the public exponent and
//! `g` the private one.

use std::fmt;

use crate::error::{Error, Result};
use crate::modnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RsaPublicKey {
    pub d: u64,
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RsaPrivateKey {
    pub g: u64,
    pub n: u64,
}

impl RsaPublicKey {
    pub fn new(d: u64, n: u64) -> Result<Self> {
        if 1 < d && d < n {
            Ok(RsaPublicKey { d, n })
        } else {
            Err(Error::KeyGen(format!("public exponent {d} outside (1, {n})")))
        }
    }
}

impl RsaPrivateKey {
    pub fn new(g: u64, n: u64) -> Result<Self> {
        if 1 < g && g < n {
            Ok(RsaPrivateKey { g, n })
        } else {
            Err(Error::KeyGen(format!("private exponent {g} outside (1, {n})")))
        }
    }
}

/// Intermediate keygen values. Only produced by [`rsa_keygen_traced`];
/// regular keys never carry the factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeygenTrace {
    pub p: u64,
    pub q: u64,
    pub phi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMessage {
    pub blocks: Vec<u64>,
    /// Decimal digits per block; always even.
    pub block_width: usize,
}

impl fmt::Display for BlockMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.block_width;
        let parts: Vec<String> = self.blocks.iter().map(|b| format!("{b:0w$}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn rsa_keygen(p: u64, q: u64, g: u64) -> Result<(RsaPublicKey, RsaPrivateKey)> {
    rsa_keygen_traced(p, q, g).map(|(public, private, _)| (public, private))
}

pub fn rsa_keygen_traced(p: u64, q: u64, g: u64) -> Result<(RsaPublicKey, RsaPrivateKey, KeygenTrace)> {
    for f in [p, q] {
        if !modnum::is_prime(f as i128) {
            return Err(Error::KeyGen(format!("{f} is not prime")));
        }
    }
    if p == q {
        return Err(Error::KeyGen("p and q must differ".into()));
    }
    let n = p.checked_mul(q).ok_or(Error::Overflow("rsa modulus"))?;
    let phi = (p - 1) * (q - 1);
    let d = match modnum::mod_inverse(g as i128, phi as i128) {
        Ok(r) => r.into_value() as u64,
        Err(_) => {
            let common = modnum::gcd(g as i128, phi as i128)?;
            return Err(Error::KeyGen(format!("gcd({phi}, {g}) = {common}, exponent not coprime to phi(n)")));
        }
    };
    let public = RsaPublicKey::new(d, n)?;
    let private = RsaPrivateKey::new(g, n)?;
    Ok((public, private, KeygenTrace { p, q, phi }))
}

fn letter_code(c: char) -> Result<u8> {
    match c.to_ascii_uppercase() {
        ' ' => Ok(0),
        u @ 'A'..='Z' => Ok(u as u8 - b'A' + 1),
        other => Err(Error::Encoding(format!("unsupported character {other:?}"))),
    }
}

/// Widest even digit count whose all-"26" block stays below `n`.
pub fn block_width(n: u64) -> Result<usize> {
    let mut width = 0;
    let mut max_block: u128 = 0;
    loop {
        let next = max_block * 100 + 26;
        if next >= n as u128 {
            break;
        }
        max_block = next;
        width += 2;
    }
    if width == 0 {
        Err(Error::Encoding(format!("modulus {n} too small for a single letter")))
    } else {
        Ok(width)
    }
}

pub fn encode_text(text: &str, n: u64) -> Result<BlockMessage> {
    let width = block_width(n)?;
    let mut digits = String::with_capacity(text.len() * 2);
    for c in text.chars() {
        digits.push_str(&format!("{:02}", letter_code(c)?));
    }
    while !digits.len().is_multiple_of(width) {
        digits.push_str("00");
    }
    let blocks = digits
        .as_bytes()
        .chunks(width)
        .map(|chunk| std::str::from_utf8(chunk).expect("ascii digits").parse::<u64>().expect("decimal block"))
        .collect();
    Ok(BlockMessage { blocks, block_width: width })
}

/// Inverse of [`encode_text`]; trailing blanks (padding) are stripped.
pub fn decode_text(msg: &BlockMessage) -> Result<String> {
    let w = msg.block_width;
    let mut out = String::new();
    for &b in &msg.blocks {
        let digits = format!("{b:0w$}");
        if digits.len() != w {
            return Err(Error::Decoding(format!("block {b} wider than {w} digits")));
        }
        for pair in digits.as_bytes().chunks(2) {
            let code: u8 = std::str::from_utf8(pair).expect("ascii").parse().expect("digits");
            match code {
                0 => out.push(' '),
                1..=26 => out.push((b'A' + code - 1) as char),
                _ => return Err(Error::Decoding(format!("letter code {code:02} out of range"))),
            }
        }
    }
    Ok(out.trim_end_matches(' ').to_string())
}

fn apply_exponent(msg: &BlockMessage, exp: u64, n: u64) -> Result<BlockMessage> {
    let blocks = msg
        .blocks
        .iter()
        .map(|&b| {
            if b >= n {
                return Err(Error::BlockTooLarge { block: b, modulus: n });
            }
            Ok(modnum::mod_pow(b as i128, exp as i128, n as i128)?.into_value() as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockMessage { blocks, block_width: msg.block_width })
}

pub fn rsa_encrypt(msg: &BlockMessage, key: &RsaPublicKey) -> Result<BlockMessage> {
    apply_exponent(msg, key.d, key.n)
}

pub fn rsa_decrypt(ct: &BlockMessage, key: &RsaPrivateKey) -> Result<BlockMessage> {
    apply_exponent(ct, key.g, key.n)
}

/// Unpadded signature: `digest^g mod n`.
pub fn rsa_sign(digest: u64, key: &RsaPrivateKey) -> Result<u64> {
    if digest >= key.n {
        return Err(Error::BlockTooLarge { block: digest, modulus: key.n });
    }
    Ok(modnum::mod_pow(digest as i128, key.g as i128, key.n as i128)?.into_value() as u64)
}

pub fn rsa_verify(digest: u64, sig: u64, key: &RsaPublicKey) -> bool {
    if digest >= key.n || sig >= key.n {
        return false;
    }
    modnum::mod_pow(sig as i128, key.d as i128, key.n as i128).map(|r| r.into_value() as u64 == digest).unwrap_or(false)
}
