//! Module-LWE public-key encryption and a KEM wrapper on top of it.

use std::fmt;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::polyring::{
    bits_to_poly, pack_elem, pack_vec, packed_len, poly_to_bits, round_coeffs, scale_half_q, unpack_elem,
    unpack_vec, RingElem, RingMat, RingVec,
};
use crate::xof::{Shake256, Xof};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KyberParams {
    pub name: &'static str,
    pub n: usize,
    pub q: u64,
    pub k: usize,
    pub eta: u32,
}

pub const TOY: KyberParams = KyberParams { name: "toy", n: 4, q: 7, k: 2, eta: 1 };
pub const KYBER512: KyberParams = KyberParams { name: "512", n: 256, q: 3329, k: 2, eta: 2 };
pub const KYBER768: KyberParams = KyberParams { name: "768", n: 256, q: 3329, k: 3, eta: 2 };
pub const KYBER1024: KyberParams = KyberParams { name: "1024", n: 256, q: 3329, k: 4, eta: 2 };

pub const PRESETS: [KyberParams; 4] = [TOY, KYBER512, KYBER768, KYBER1024];

impl KyberParams {
    pub fn by_name(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|p| p.name == name)
            .copied()
            .ok_or_else(|| Error::UnknownScheme(format!("kyber-{name}")))
    }

    /// Rank `k * n` of the underlying lattice.
    pub fn lattice_rank(&self) -> usize {
        self.k * self.n
    }

    pub fn ciphertext_len(&self) -> usize {
        (self.k + 1) * packed_len(self.n, self.q)
    }

    pub fn public_key_len(&self) -> usize {
        (self.k + 1) * self.k * packed_len(self.n, self.q)
    }

    fn check_elem(&self, e: &RingElem) -> Result<()> {
        if e.n() == self.n && e.q() == self.q {
            Ok(())
        } else {
            Err(Error::ParamMismatch(format!("element over (n={}, q={}) for kyber-{}", e.n(), e.q(), self.name)))
        }
    }

    fn check_vec(&self, v: &RingVec) -> Result<()> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: v.len() });
        }
        v.entries().iter().try_for_each(|e| self.check_elem(e))
    }
}

impl fmt::Display for KyberParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kyber-{} (n={}, q={}, k={}, eta={})", self.name, self.n, self.q, self.k, self.eta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyberPublicKey {
    pub params: KyberParams,
    pub a: RingMat,
    pub t: RingVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyberPrivateKey {
    pub params: KyberParams,
    pub s: RingVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyberCiphertext {
    pub u: RingVec,
    pub v: RingElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptionRandomness {
    pub r: RingVec,
    pub e1: RingVec,
    pub e2: RingElem,
}

/// Key pair together with the error vector used to build it, for
/// diagnostics that need the full noise decomposition.
#[derive(Debug, Clone)]
pub struct KeygenTranscript {
    pub public: KyberPublicKey,
    pub private: KyberPrivateKey,
    pub e: RingVec,
}

/// Centered binomial sample with parameter `eta`.
pub fn sample_cbd(eta: u32, rng: &mut impl RngCore) -> i64 {
    let mut acc = 0i64;
    for _ in 0..eta {
        acc += rng.gen_range(0..2i64);
        acc -= rng.gen_range(0..2i64);
    }
    acc
}

pub fn sample_error(params: &KyberParams, rng: &mut impl RngCore) -> RingElem {
    let coeffs: Vec<i64> = (0..params.n).map(|_| sample_cbd(params.eta, rng)).collect();
    RingElem::from_signed(params.n, params.q, &coeffs).expect("preset parameters are valid")
}

pub fn sample_error_vec(params: &KyberParams, rng: &mut impl RngCore) -> RingVec {
    RingVec::new((0..params.k).map(|_| sample_error(params, rng)).collect()).expect("k >= 1")
}

pub fn sample_uniform(n: usize, q: u64, rng: &mut impl RngCore) -> RingElem {
    let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
    RingElem::new(n, q, &coeffs).expect("valid ring parameters")
}

impl EncryptionRandomness {
    pub fn sample(params: &KyberParams, rng: &mut impl RngCore) -> Self {
        EncryptionRandomness {
            r: sample_error_vec(params, rng),
            e1: sample_error_vec(params, rng),
            e2: sample_error(params, rng),
        }
    }

    pub fn zero(params: &KyberParams) -> Self {
        EncryptionRandomness {
            r: RingVec::zero(params.k, params.n, params.q),
            e1: RingVec::zero(params.k, params.n, params.q),
            e2: RingElem::zero(params.n, params.q),
        }
    }
}

/// `t = A s + e` from explicit inputs.
pub fn keygen_from(params: &KyberParams, s: RingVec, a: RingMat, e: &RingVec) -> Result<(KyberPublicKey, KyberPrivateKey)> {
    params.check_vec(&s)?;
    params.check_vec(e)?;
    if a.rows() != params.k || a.cols() != params.k {
        return Err(Error::DimensionMismatch { expected: params.k, got: a.rows().max(a.cols()) });
    }
    let t = a.matvec(&s)?.add(e)?;
    Ok((KyberPublicKey { params: *params, a, t }, KyberPrivateKey { params: *params, s }))
}

pub fn keygen_transcript(params: &KyberParams, rng: &mut impl RngCore) -> KeygenTranscript {
    let a = RingMat::from_fn(params.k, params.k, |_, _| sample_uniform(params.n, params.q, rng)).expect("k >= 1");
    let s = sample_error_vec(params, rng);
    let e = sample_error_vec(params, rng);
    let (public, private) = keygen_from(params, s, a, &e).expect("shapes agree by construction");
    KeygenTranscript { public, private, e }
}

pub fn keygen(params: &KyberParams, rng: &mut impl RngCore) -> (KyberPublicKey, KyberPrivateKey) {
    let t = keygen_transcript(params, rng);
    (t.public, t.private)
}

/// `u = A^T r + e1`, `v = t . r + e2 + round(q/2) * P(m)`.
pub fn encrypt(public: &KyberPublicKey, message: &[u8], rand: &EncryptionRandomness) -> Result<KyberCiphertext> {
    let p = &public.params;
    if message.len() > p.n {
        return Err(Error::MessageTooLong { bits: message.len(), capacity: p.n });
    }
    p.check_vec(&rand.r)?;
    p.check_vec(&rand.e1)?;
    p.check_elem(&rand.e2)?;
    let bound = p.eta as u64;
    if rand.r.inf_norm() > bound || rand.e1.inf_norm() > bound || rand.e2.inf_norm() > bound {
        return Err(Error::domain(format!("encryption randomness exceeds eta = {}", p.eta)));
    }
    let scaled = scale_half_q(&bits_to_poly(message, p.n, p.q)?)?;
    let u = public.a.transpose().matvec(&rand.r)?.add(&rand.e1)?;
    let v = public.t.dot(&rand.r)?.add(&rand.e2)?.add(&scaled)?;
    Ok(KyberCiphertext { u, v })
}

/// `m^ = v - s . u`, before rounding.
pub fn decrypt_raw(private: &KyberPrivateKey, ct: &KyberCiphertext) -> Result<RingElem> {
    private.params.check_vec(&ct.u)?;
    private.params.check_elem(&ct.v)?;
    ct.v.sub(&private.s.dot(&ct.u)?)
}

/// Returns `n` bits, highest degree first.
pub fn decrypt(private: &KyberPrivateKey, ct: &KyberCiphertext) -> Result<Vec<u8>> {
    poly_to_bits(&round_coeffs(&decrypt_raw(private, ct)?))
}

/// `e . r + e2 - s . e1`.
pub fn noise_term(private: &KyberPrivateKey, e: &RingVec, rand: &EncryptionRandomness) -> Result<RingElem> {
    e.dot(&rand.r)?.add(&rand.e2)?.sub(&private.s.dot(&rand.e1)?)
}

impl KyberPublicKey {
    /// Rows of `A`, then `t`, each packed.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.params.public_key_len());
        for i in 0..self.a.rows() {
            for j in 0..self.a.cols() {
                pack_elem(self.a.get(i, j), &mut out);
            }
        }
        pack_vec(&self.t, &mut out);
        out
    }

    pub fn from_bytes(params: &KyberParams, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != params.public_key_len() {
            return Err(Error::Decoding(format!("public key of {} bytes, expected {}", bytes.len(), params.public_key_len())));
        }
        let (k, n, q) = (params.k, params.n, params.q);
        let row_len = k * packed_len(n, q);
        let rows = (0..k)
            .map(|i| unpack_vec(&bytes[i * row_len..(i + 1) * row_len], k, n, q).map(|v| v.entries().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(KyberPublicKey {
            params: *params,
            a: RingMat::from_rows(rows)?,
            t: unpack_vec(&bytes[k * row_len..], k, n, q)?,
        })
    }
}

impl KyberCiphertext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        pack_vec(&self.u, &mut out);
        pack_elem(&self.v, &mut out);
        out
    }

    pub fn from_bytes(params: &KyberParams, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != params.ciphertext_len() {
            return Err(Error::Decoding(format!("ciphertext of {} bytes, expected {}", bytes.len(), params.ciphertext_len())));
        }
        let split = params.k * packed_len(params.n, params.q);
        Ok(KyberCiphertext {
            u: unpack_vec(&bytes[..split], params.k, params.n, params.q)?,
            v: unpack_elem(&bytes[split..], params.n, params.q)?,
        })
    }
}

pub type SharedSecret = [u8; 32];

/// Minimum message capacity for the KEM.
pub const KEM_MIN_BITS: usize = 32;

fn derive_shared(secret_bits: &[u8], ct: &KyberCiphertext) -> SharedSecret {
    let packed: Vec<u8> = secret_bits.chunks(8).map(|c| c.iter().fold(0u8, |acc, b| acc << 1 | b)).collect();
    Shake256.derive32(&[b"qsafe-kem-v1", &packed, &ct.to_bytes()])
}

pub fn kem_encapsulate(public: &KyberPublicKey, rng: &mut impl RngCore) -> Result<(SharedSecret, KyberCiphertext)> {
    let p = &public.params;
    if p.n < KEM_MIN_BITS {
        return Err(Error::Unsupported(format!("KEM needs n >= {KEM_MIN_BITS}, {p} has {}", p.n)));
    }
    let secret: Vec<u8> = (0..p.n).map(|_| rng.gen_range(0..2u8)).collect();
    let rand = EncryptionRandomness::sample(p, rng);
    let ct = encrypt(public, &secret, &rand)?;
    Ok((derive_shared(&secret, &ct), ct))
}

/// A tampered ciphertext yields an unrelated secret rather than an error.
pub fn kem_decapsulate(private: &KyberPrivateKey, ct: &KyberCiphertext) -> Result<SharedSecret> {
    if private.params.n < KEM_MIN_BITS {
        return Err(Error::Unsupported(format!("KEM needs n >= {KEM_MIN_BITS}")));
    }
    let bits = decrypt(private, ct)?;
    Ok(derive_shared(&bits, ct))
}

/// The hand-computed toy walkthrough: inputs plus the values as they were
/// published. Coefficients are signed and ascending.
pub mod worked {
    use super::*;

    pub const MESSAGE: &str = "1001";
    pub const S: [[i64; 4]; 2] = [[1, 1, 0, 1], [2, 1, 0, 0]];
    pub const A: [[[i64; 4]; 2]; 2] = [[[4, 5, 0, 4], [0, 0, 5, 3]], [[0, 3, 0, 5], [6, 0, 6, 0]]];
    pub const E: [[i64; 4]; 2] = [[0, 0, 1, 0], [0, 1, 0, 0]];
    pub const R: [[i64; 4]; 2] = [[0, 0, 1, 0], [1, 0, 0, 0]];
    pub const E1: [[i64; 4]; 2] = [[1, 1, 0, 0], [1, 0, 0, 0]];
    pub const E2: [i64; 4] = [0, 1, 0, 1];

    pub const PUBLISHED_T: [[i64; 4]; 2] = [[-1, 2, -2, 5], [4, 3, -4, 4]];
    pub const PUBLISHED_U: [[i64; 4]; 2] = [[1, 0, 4, 3], [-5, -3, 6, 0]];
    /// Disagrees with a recomputation from the inputs above.
    pub const PUBLISHED_V: [i64; 4] = [-2, -1, 2, 3];
    /// Decryption of the published `v`, reduced mod 7.
    pub const PUBLISHED_M_HAT: [i64; 4] = [3, 6, 6, 3];

    pub fn elem(c: &[i64]) -> RingElem {
        RingElem::from_signed(TOY.n, TOY.q, c).expect("toy coefficients")
    }

    pub fn vector(v: &[[i64; 4]; 2]) -> RingVec {
        RingVec::new(v.iter().map(|c| elem(c)).collect()).expect("toy vector")
    }

    pub fn matrix() -> RingMat {
        RingMat::from_rows(A.iter().map(|row| row.iter().map(|c| elem(c)).collect()).collect()).expect("toy matrix")
    }

    pub fn randomness() -> EncryptionRandomness {
        EncryptionRandomness { r: vector(&R), e1: vector(&E1), e2: elem(&E2) }
    }

    pub fn keys() -> (KyberPublicKey, KyberPrivateKey) {
        keygen_from(&TOY, vector(&S), matrix(), &vector(&E)).expect("toy keys")
    }

    /// The published ciphertext `(u, v)`.
    pub fn published_ciphertext() -> KyberCiphertext {
        KyberCiphertext { u: vector(&PUBLISHED_U), v: elem(&PUBLISHED_V) }
    }
}
