//! Extendable-output hashing and deterministic randomness streams.
//!
//! Every hash-shaped need of the workbench (KEM secret derivation, the
//! challenge hash of the signature scheme, channel key schedule, CLI seed
//! splitting) goes through the [`Xof`] trait so the instantiation can be
//! swapped. [`Shake256`] is the default.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha3::digest::{ExtendableOutput, Update, XofReader};

/// An extendable-output function over a sequence of input parts.
///
/// Parts are fed in order with no separator; callers that need
/// injectivity over variable-length parts must length-prefix them.
pub trait Xof: Send + Sync {
    fn fill(&self, parts: &[&[u8]], out: &mut [u8]);

    fn derive(&self, parts: &[&[u8]], len: usize) -> Vec<u8> {
        let mut out = vec![0u8; len];
        self.fill(parts, &mut out);
        out
    }

    fn derive32(&self, parts: &[&[u8]]) -> [u8; 32] {
        let mut out = [0u8; 32];
        self.fill(parts, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Shake256;

impl Xof for Shake256 {
    fn fill(&self, parts: &[&[u8]], out: &mut [u8]) {
        let mut h = sha3::Shake256::default();
        for p in parts {
            h.update(p);
        }
        h.finalize_xof().read(out);
    }
}

/// Streaming reader over SHAKE-256 output, for consumers that pull an
/// unknown number of bytes (rejection sampling).
pub struct XofStream(Box<dyn XofReader>);

impl XofStream {
    pub fn shake256(parts: &[&[u8]]) -> Self {
        let mut h = sha3::Shake256::default();
        for p in parts {
            h.update(p);
        }
        XofStream(Box::new(h.finalize_xof()))
    }

    pub fn next_byte(&mut self) -> u8 {
        let mut b = [0u8; 1];
        self.0.read(&mut b);
        b[0]
    }

    pub fn read(&mut self, out: &mut [u8]) {
        self.0.read(out);
    }
}

/// Length-prefixes `part` (u32 big-endian) onto `buf`.
pub fn push_prefixed(buf: &mut Vec<u8>, part: &[u8]) {
    buf.extend_from_slice(&(part.len() as u32).to_be_bytes());
    buf.extend_from_slice(part);
}

/// Derives an independent ChaCha20 stream from a global seed and a label.
///
/// Adding a new label never perturbs the streams of existing labels.
pub fn seeded_stream(seed: u64, label: &str) -> ChaCha20Rng {
    let key = Shake256.derive32(&[b"qsafe-seed-v1", &seed.to_be_bytes(), label.as_bytes()]);
    ChaCha20Rng::from_seed(key)
}
