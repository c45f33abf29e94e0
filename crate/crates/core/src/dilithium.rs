//! Simplified module-lattice signatures: `w = rho(A r1)`, `c = Psi(mu || w)`,
//! `r2 = r1 + c s`, verified by recomputing `rho(A r2 - t c)`.

use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::kyber::{sample_cbd, sample_uniform};
use crate::polyring::{pack_vec, packed_len, round_coeffs, unpack_vec, RingElem, RingMat, RingVec};
use crate::xof::{push_prefixed, XofStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DilithiumParams {
    pub name: &'static str,
    pub n: usize,
    pub q: u64,
    /// rows of `A`, length of `t`
    pub m: usize,
    /// columns of `A`, length of `s`
    pub k: usize,
    /// nonzero coefficients of a challenge
    pub h: usize,
    pub eta: u32,
}

/// `2^23 - 2^13 + 1`.
pub const Q: u64 = 8_380_417;

pub const TOY: DilithiumParams = DilithiumParams { name: "toy", n: 8, q: 257, m: 2, k: 2, h: 2, eta: 1 };
pub const LEVEL2: DilithiumParams = DilithiumParams { name: "2", n: 256, q: Q, m: 4, k: 4, h: 60, eta: 2 };
pub const LEVEL3: DilithiumParams = DilithiumParams { name: "3", n: 256, q: Q, m: 6, k: 5, h: 60, eta: 2 };
pub const LEVEL5: DilithiumParams = DilithiumParams { name: "5", n: 256, q: Q, m: 8, k: 7, h: 60, eta: 2 };

pub const PRESETS: [DilithiumParams; 4] = [TOY, LEVEL2, LEVEL3, LEVEL5];

/// Signing attempts before giving up.
pub const MAX_SIGN_ATTEMPTS: usize = 1000;

impl DilithiumParams {
    pub fn by_name(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|p| p.name == name)
            .copied()
            .ok_or_else(|| Error::UnknownScheme(format!("dilithium-{name}")))
    }

    fn fits_vec(&self, v: &RingVec, len: usize) -> bool {
        v.len() == len && v.n() == self.n && v.q() == self.q
    }
}

impl fmt::Display for DilithiumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dilithium-{} (n={}, q={}, m={}, k={}, h={}, eta={})", self.name, self.n, self.q, self.m, self.k, self.h, self.eta)
    }
}

/// Ring element with exactly `h` coefficients in `{-1, +1}` and the rest 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChallengePoly(RingElem);

impl ChallengePoly {
    pub fn new(elem: RingElem, h: usize) -> Result<Self> {
        let c = elem.centered();
        if c.iter().any(|x| x.abs() > 1) || c.iter().filter(|x| **x != 0).count() != h {
            return Err(Error::domain(format!("challenge must have exactly {h} coefficients in {{-1, +1}}")));
        }
        Ok(ChallengePoly(elem))
    }

    /// `(position, sign)` pairs.
    pub fn from_positions(n: usize, q: u64, h: usize, entries: &[(usize, i8)]) -> Result<Self> {
        let mut coeffs = vec![0i64; n];
        for &(pos, sign) in entries {
            if pos >= n || coeffs[pos] != 0 || !(sign == 1 || sign == -1) {
                return Err(Error::domain(format!("bad challenge entry ({pos}, {sign})")));
            }
            coeffs[pos] = sign as i64;
        }
        Self::new(RingElem::from_signed(n, q, &coeffs)?, h)
    }

    pub fn positions(&self) -> Vec<(usize, i8)> {
        self.0.centered().iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c as i8)).collect()
    }

    pub fn elem(&self) -> &RingElem {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilithiumPublicKey {
    pub params: DilithiumParams,
    pub a: RingMat,
    pub t: RingVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilithiumPrivateKey {
    pub params: DilithiumParams,
    pub s: RingVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilithiumSignature {
    pub r2: RingVec,
    pub c: ChallengePoly,
}

fn small_vec(params: &DilithiumParams, len: usize, rng: &mut impl RngCore) -> RingVec {
    let entries = (0..len)
        .map(|_| {
            let c: Vec<i64> = (0..params.n).map(|_| sample_cbd(params.eta, rng)).collect();
            RingElem::from_signed(params.n, params.q, &c).expect("preset parameters are valid")
        })
        .collect();
    RingVec::new(entries).expect("nonempty")
}

/// `t = A s + e` with `A` of shape `m x k`.
pub fn keygen_from(
    params: &DilithiumParams,
    s: RingVec,
    a: RingMat,
    e: &RingVec,
) -> Result<(DilithiumPublicKey, DilithiumPrivateKey)> {
    if a.rows() != params.m || a.cols() != params.k || a.n() != params.n || a.q() != params.q {
        return Err(Error::ParamMismatch(format!("matrix does not fit {params}")));
    }
    if !params.fits_vec(&s, params.k) || !params.fits_vec(e, params.m) {
        return Err(Error::ParamMismatch(format!("s or e does not fit {params}")));
    }
    let t = a.matvec(&s)?.add(e)?;
    Ok((DilithiumPublicKey { params: *params, a, t }, DilithiumPrivateKey { params: *params, s }))
}

pub fn keygen(params: &DilithiumParams, rng: &mut impl RngCore) -> (DilithiumPublicKey, DilithiumPrivateKey) {
    let a = RingMat::from_fn(params.m, params.k, |_, _| sample_uniform(params.n, params.q, rng)).expect("nonempty");
    let s = small_vec(params, params.k, rng);
    let e = small_vec(params, params.m, rng);
    keygen_from(params, s, a, &e).expect("shapes agree by construction")
}

/// Canonical fixed-width encoding of a vector over `R_q`.
pub fn encode_w(w: &RingVec) -> Vec<u8> {
    let mut out = Vec::new();
    pack_vec(w, &mut out);
    out
}

pub fn decode_w(bytes: &[u8], len: usize, n: usize, q: u64) -> Result<RingVec> {
    unpack_vec(bytes, len, n, q)
}

/// Length of [`encode_w`] output for a vector of `len` entries.
pub fn encoded_w_len(params: &DilithiumParams, len: usize) -> usize {
    len * packed_len(params.n, params.q)
}

/// Hashes bytes into the challenge set: a SHAKE-256 stream supplies sign bits,
/// then drives an inside-out shuffle that places `h` nonzeros.
pub fn hash_to_ball(bytes: &[u8], params: &DilithiumParams) -> ChallengePoly {
    let (n, h) = (params.n, params.h);
    assert!(h <= n && n <= 1 << 16, "unsupported challenge shape");
    let mut stream = XofStream::shake256(&[b"qsafe-ball-v1", bytes]);
    let mut sign_bytes = vec![0u8; h.div_ceil(8)];
    stream.read(&mut sign_bytes);
    let wide = n > 256;
    // uniform index in 0..=bound by rejection
    let mut next_index = |bound: usize| {
        let range: usize = if wide { 1 << 16 } else { 1 << 8 };
        let limit = range - range % (bound + 1);
        loop {
            let x = if wide {
                let mut b = [0u8; 2];
                stream.read(&mut b);
                u16::from_le_bytes(b) as usize
            } else {
                stream.next_byte() as usize
            };
            if x < limit {
                return x % (bound + 1);
            }
        }
    };
    let mut c = vec![0i64; n];
    for (t, i) in (n - h..n).enumerate() {
        let j = next_index(i);
        c[i] = c[j];
        c[j] = if (sign_bytes[t / 8] >> (t % 8)) & 1 == 1 { -1 } else { 1 };
    }
    ChallengePoly(RingElem::from_signed(n, params.q, &c).expect("valid ring parameters"))
}

fn challenge_input(message: &[u8], w: &RingVec) -> Vec<u8> {
    let mut buf = Vec::new();
    push_prefixed(&mut buf, message);
    buf.extend_from_slice(&encode_w(w));
    buf
}

fn rho_vec(v: &RingVec) -> RingVec {
    RingVec::new(v.entries().iter().map(round_coeffs).collect()).expect("nonempty")
}

/// Signature plus the number of attempts the retry loop needed.
pub fn sign_counted(
    private: &DilithiumPrivateKey,
    public: &DilithiumPublicKey,
    message: &[u8],
    rng: &mut impl RngCore,
) -> Result<(DilithiumSignature, usize)> {
    let p = &private.params;
    if public.params != *p {
        return Err(Error::ParamMismatch(format!("{} key with {} key", p, public.params)));
    }
    for attempt in 1..=MAX_SIGN_ATTEMPTS {
        let r1 = small_vec(p, p.k, rng);
        let w = rho_vec(&public.a.matvec(&r1)?);
        let c = hash_to_ball(&challenge_input(message, &w), p);
        let r2 = r1.add(&private.s.mul_elem(c.elem())?)?;
        let sig = DilithiumSignature { r2, c };
        if verify(public, message, &sig) {
            return Ok((sig, attempt));
        }
    }
    Err(Error::SigningFailed(MAX_SIGN_ATTEMPTS))
}

pub fn sign(
    private: &DilithiumPrivateKey,
    public: &DilithiumPublicKey,
    message: &[u8],
    rng: &mut impl RngCore,
) -> Result<DilithiumSignature> {
    sign_counted(private, public, message, rng).map(|(s, _)| s)
}

impl DilithiumSignature {
    /// Packed `r2`, then `(position u16 BE, sign byte)` per challenge nonzero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = encode_w(&self.r2);
        for (pos, sign) in self.c.positions() {
            out.extend_from_slice(&(pos as u16).to_be_bytes());
            out.push(sign as u8);
        }
        out
    }

    pub fn from_bytes(params: &DilithiumParams, bytes: &[u8]) -> Result<Self> {
        let split = encoded_w_len(params, params.k);
        if bytes.len() != split + 3 * params.h {
            return Err(Error::Decoding(format!("signature of {} bytes, expected {}", bytes.len(), split + 3 * params.h)));
        }
        let r2 = decode_w(&bytes[..split], params.k, params.n, params.q)?;
        let entries: Vec<(usize, i8)> = bytes[split..]
            .chunks(3)
            .map(|c| (u16::from_be_bytes([c[0], c[1]]) as usize, c[2] as i8))
            .collect();
        let c = ChallengePoly::from_positions(params.n, params.q, params.h, &entries)
            .map_err(|e| Error::Decoding(e.to_string()))?;
        Ok(DilithiumSignature { r2, c })
    }
}

/// `A r2 - t c`, the value whose rounding verification compares.
pub fn verification_point(public: &DilithiumPublicKey, sig: &DilithiumSignature) -> Result<RingVec> {
    public.a.matvec(&sig.r2)?.sub(&public.t.mul_elem(sig.c.elem())?)
}

pub fn verify(public: &DilithiumPublicKey, message: &[u8], sig: &DilithiumSignature) -> bool {
    let p = &public.params;
    if !p.fits_vec(&sig.r2, p.k) || sig.c.elem().n() != p.n || sig.c.elem().q() != p.q {
        return false;
    }
    let Ok(point) = verification_point(public, sig) else {
        return false;
    };
    hash_to_ball(&challenge_input(message, &rho_vec(&point)), p) == sig.c
}
