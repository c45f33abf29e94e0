//! Crypto-agility: a registry of exchangeable signers and KEMs, hybrid
//! classical/post-quantum signatures, and Mosca's migration inequality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::RngCore;

use crate::dilithium::{self, DilithiumParams, DilithiumPrivateKey, DilithiumPublicKey, DilithiumSignature};
use crate::ecc::{self, CurvePoint, EcdsaDomain, EcdsaSignature};
use crate::error::{Error, Result};
use crate::kyber::{self, KyberCiphertext, KyberParams, KyberPrivateKey, KyberPublicKey, SharedSecret};
use crate::rsa::{self, RsaPrivateKey, RsaPublicKey};
use crate::xof::{push_prefixed, Shake256, Xof};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Classical,
    PostQuantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Signer,
    Kem,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Signer => "signer",
            SchemeKind::Kem => "kem",
        })
    }
}

pub trait Signer: Send + Sync {
    fn sign(&self, msg: &[u8], rng: &mut dyn RngCore) -> Result<Vec<u8>>;
    /// Malformed signatures verify as false.
    fn verify(&self, msg: &[u8], sig: &[u8]) -> bool;
}

pub trait Kem: Send + Sync {
    /// Returns the shared secret and the ciphertext bytes.
    fn encapsulate(&self, rng: &mut dyn RngCore) -> Result<(SharedSecret, Vec<u8>)>;
    fn decapsulate(&self, ct: &[u8]) -> Result<SharedSecret>;
}

#[derive(Clone)]
pub enum Capability {
    Signer(Arc<dyn Signer>),
    Kem(Arc<dyn Kem>),
}

#[derive(Clone)]
pub struct SchemeDescriptor {
    pub id: String,
    pub family: Family,
    pub capability: Capability,
}

impl SchemeDescriptor {
    pub fn signer(id: impl Into<String>, family: Family, s: impl Signer + 'static) -> Self {
        SchemeDescriptor { id: id.into(), family, capability: Capability::Signer(Arc::new(s)) }
    }

    pub fn kem(id: impl Into<String>, family: Family, k: impl Kem + 'static) -> Self {
        SchemeDescriptor { id: id.into(), family, capability: Capability::Kem(Arc::new(k)) }
    }

    pub fn kind(&self) -> SchemeKind {
        match self.capability {
            Capability::Signer(_) => SchemeKind::Signer,
            Capability::Kem(_) => SchemeKind::Kem,
        }
    }
}

impl fmt::Debug for SchemeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchemeDescriptor")
            .field("id", &self.id)
            .field("family", &self.family)
            .field("kind", &self.kind())
            .finish()
    }
}

/// Scheme plugins keyed by id. Readers share, writers serialize.
#[derive(Default)]
pub struct Registry {
    schemes: RwLock<BTreeMap<String, SchemeDescriptor>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&self, desc: SchemeDescriptor) -> Result<()> {
        let mut map = self.schemes.write().expect("registry lock poisoned");
        if map.contains_key(&desc.id) {
            return Err(Error::DuplicateScheme(desc.id));
        }
        map.insert(desc.id.clone(), desc);
        Ok(())
    }

    pub fn unregister(&self, id: &str) -> Result<SchemeDescriptor> {
        let mut map = self.schemes.write().expect("registry lock poisoned");
        map.remove(id).ok_or_else(|| Error::UnknownScheme(id.to_string()))
    }

    pub fn lookup(&self, id: &str) -> Result<SchemeDescriptor> {
        let map = self.schemes.read().expect("registry lock poisoned");
        map.get(id).cloned().ok_or_else(|| Error::UnknownScheme(id.to_string()))
    }

    pub fn ids(&self) -> Vec<String> {
        self.schemes.read().expect("registry lock poisoned").keys().cloned().collect()
    }

    pub fn signer(&self, id: &str) -> Result<(Family, Arc<dyn Signer>)> {
        let d = self.lookup(id)?;
        match d.capability {
            Capability::Signer(s) => Ok((d.family, s)),
            Capability::Kem(_) => Err(Error::KindMismatch { id: id.to_string(), expected: "signer".into() }),
        }
    }

    pub fn kem(&self, id: &str) -> Result<(Family, Arc<dyn Kem>)> {
        let d = self.lookup(id)?;
        match d.capability {
            Capability::Kem(k) => Ok((d.family, k)),
            Capability::Signer(_) => Err(Error::KindMismatch { id: id.to_string(), expected: "kem".into() }),
        }
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.ids()).finish()
    }
}

// ---------------------------------------------------------------------------
// hybrid signatures

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HybridMode {
    CthenQ,
    QthenC,
    Parallel,
}

impl HybridMode {
    pub const ALL: [HybridMode; 3] = [HybridMode::CthenQ, HybridMode::QthenC, HybridMode::Parallel];

    fn tag(self) -> u8 {
        match self {
            HybridMode::CthenQ => 1,
            HybridMode::QthenC => 2,
            HybridMode::Parallel => 3,
        }
    }

    fn from_tag(t: u8) -> Option<Self> {
        HybridMode::ALL.into_iter().find(|m| m.tag() == t)
    }

    /// Family expected for each part, in order.
    fn families(self) -> [Family; 2] {
        match self {
            HybridMode::QthenC => [Family::PostQuantum, Family::Classical],
            _ => [Family::Classical, Family::PostQuantum],
        }
    }
}

impl fmt::Display for HybridMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HybridMode::CthenQ => "c-then-q",
            HybridMode::QthenC => "q-then-c",
            HybridMode::Parallel => "parallel",
        })
    }
}

impl std::str::FromStr for HybridMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HybridMode::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::Unsupported(format!("hybrid mode `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridSignature {
    pub mode: HybridMode,
    pub parts: [(String, Vec<u8>); 2],
}

impl HybridSignature {
    /// Mode tag, then each part as length-prefixed id and signature.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.mode.tag()];
        for (id, sig) in &self.parts {
            push_prefixed(&mut out, id.as_bytes());
            push_prefixed(&mut out, sig);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |what: &str| Error::Decoding(format!("hybrid signature: {what}"));
        let (&tag, mut rest) = bytes.split_first().ok_or_else(|| bad("empty"))?;
        let mode = HybridMode::from_tag(tag).ok_or_else(|| bad("unknown mode"))?;
        let mut take = || -> Result<Vec<u8>> {
            if rest.len() < 4 {
                return Err(bad("truncated"));
            }
            let len = u32::from_be_bytes(rest[..4].try_into().unwrap()) as usize;
            if rest.len() - 4 < len {
                return Err(bad("truncated"));
            }
            let part = rest[4..4 + len].to_vec();
            rest = &rest[4 + len..];
            Ok(part)
        };
        let id0 = String::from_utf8(take()?).map_err(|_| bad("id is not utf-8"))?;
        let sig0 = take()?;
        let id1 = String::from_utf8(take()?).map_err(|_| bad("id is not utf-8"))?;
        let sig1 = take()?;
        if !rest.is_empty() {
            return Err(bad("trailing bytes"));
        }
        Ok(HybridSignature { mode, parts: [(id0, sig0), (id1, sig1)] })
    }
}

/// `lp(msg) || lp(first)`: the input of the second signer in chained modes.
fn chained_input(msg: &[u8], first: &[u8]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(msg.len() + first.len() + 8);
    push_prefixed(&mut buf, msg);
    push_prefixed(&mut buf, first);
    buf
}

fn expect_family(id: &str, got: Family, want: Family) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::ParamMismatch(format!("scheme `{id}` is {got:?}, expected {want:?}")))
    }
}

pub fn hybrid_sign(
    msg: &[u8],
    classical: &str,
    pq: &str,
    mode: HybridMode,
    registry: &Registry,
    rng: &mut dyn RngCore,
) -> Result<HybridSignature> {
    let (cf, c) = registry.signer(classical)?;
    let (qf, q) = registry.signer(pq)?;
    expect_family(classical, cf, Family::Classical)?;
    expect_family(pq, qf, Family::PostQuantum)?;
    let (first, second) = match mode {
        HybridMode::QthenC => ((pq, &q), (classical, &c)),
        _ => ((classical, &c), (pq, &q)),
    };
    let sig1 = first.1.sign(msg, rng)?;
    let sig2 = match mode {
        HybridMode::Parallel => second.1.sign(msg, rng)?,
        _ => second.1.sign(&chained_input(msg, &sig1), rng)?,
    };
    Ok(HybridSignature { mode, parts: [(first.0.to_string(), sig1), (second.0.to_string(), sig2)] })
}

pub fn hybrid_verify(msg: &[u8], hsig: &HybridSignature, registry: &Registry) -> bool {
    let fams = hsig.mode.families();
    let mut signers = Vec::with_capacity(2);
    for ((id, _), want) in hsig.parts.iter().zip(fams) {
        match registry.signer(id) {
            Ok((fam, s)) if fam == want => signers.push(s),
            _ => return false,
        }
    }
    let (sig1, sig2) = (&hsig.parts[0].1, &hsig.parts[1].1);
    if !signers[0].verify(msg, sig1) {
        return false;
    }
    match hsig.mode {
        HybridMode::Parallel => signers[1].verify(msg, sig2),
        _ => signers[1].verify(&chained_input(msg, sig1), sig2),
    }
}

// ---------------------------------------------------------------------------
// adapters

/// 64-bit message digest shared by the classical adapters.
pub fn digest64(msg: &[u8]) -> u64 {
    u64::from_be_bytes(Shake256.derive(&[b"qsafe-digest-v1", msg], 8).try_into().unwrap())
}

fn read_u64s<const N: usize>(sig: &[u8]) -> Option<[u64; N]> {
    if sig.len() != 8 * N {
        return None;
    }
    let mut out = [0u64; N];
    for (o, c) in out.iter_mut().zip(sig.chunks(8)) {
        *o = u64::from_be_bytes(c.try_into().unwrap());
    }
    Some(out)
}

/// Textbook RSA over the reduced digest.
pub struct RsaSigner {
    pub public: RsaPublicKey,
    private: RsaPrivateKey,
}

impl RsaSigner {
    pub fn new(public: RsaPublicKey, private: RsaPrivateKey) -> Result<Self> {
        if public.n != private.n {
            return Err(Error::ParamMismatch("RSA key halves have different moduli".into()));
        }
        Ok(RsaSigner { public, private })
    }

    pub fn from_primes(p: u64, q: u64, g: u64) -> Result<Self> {
        let (public, private) = rsa::rsa_keygen(p, q, g)?;
        Self::new(public, private)
    }
}

impl Signer for RsaSigner {
    fn sign(&self, msg: &[u8], _rng: &mut dyn RngCore) -> Result<Vec<u8>> {
        let sig = rsa::rsa_sign(digest64(msg) % self.private.n, &self.private)?;
        Ok(sig.to_be_bytes().to_vec())
    }

    fn verify(&self, msg: &[u8], sig: &[u8]) -> bool {
        read_u64s::<1>(sig).is_some_and(|[s]| rsa::rsa_verify(digest64(msg) % self.public.n, s, &self.public))
    }
}

/// ECDSA on a named curve; signature bytes are `r || s` big-endian.
pub struct EcdsaSigner {
    pub domain: EcdsaDomain,
    pub public: CurvePoint,
    private: u64,
}

impl EcdsaSigner {
    pub fn new(domain: EcdsaDomain, private: u64) -> Result<Self> {
        if private.is_multiple_of(domain.order) {
            return Err(Error::KeyGen("ECDSA private key must be nonzero mod the order".into()));
        }
        let public = ecc::point_pow(&domain.generator, private, &domain.curve)?;
        Ok(EcdsaSigner { domain, public, private })
    }

    pub fn generate(domain: EcdsaDomain, rng: &mut dyn RngCore) -> Result<Self> {
        use rand::Rng;
        let d = rng.gen_range(1..domain.order);
        Self::new(domain, d)
    }
}

impl Signer for EcdsaSigner {
    fn sign(&self, msg: &[u8], mut rng: &mut dyn RngCore) -> Result<Vec<u8>> {
        let sig = ecc::ecdsa_sign(digest64(msg), self.private, &self.domain, &mut rng)?;
        let mut out = sig.r.to_be_bytes().to_vec();
        out.extend_from_slice(&sig.s.to_be_bytes());
        Ok(out)
    }

    fn verify(&self, msg: &[u8], sig: &[u8]) -> bool {
        read_u64s::<2>(sig)
            .is_some_and(|[r, s]| ecc::ecdsa_verify(digest64(msg), &EcdsaSignature { r, s }, &self.public, &self.domain))
    }
}

pub struct DilithiumSigner {
    pub public: DilithiumPublicKey,
    private: DilithiumPrivateKey,
}

impl DilithiumSigner {
    pub fn new(public: DilithiumPublicKey, private: DilithiumPrivateKey) -> Self {
        DilithiumSigner { public, private }
    }

    pub fn generate(params: &DilithiumParams, mut rng: &mut dyn RngCore) -> Self {
        let (public, private) = dilithium::keygen(params, &mut rng);
        DilithiumSigner { public, private }
    }
}

impl Signer for DilithiumSigner {
    fn sign(&self, msg: &[u8], mut rng: &mut dyn RngCore) -> Result<Vec<u8>> {
        Ok(dilithium::sign(&self.private, &self.public, msg, &mut rng)?.to_bytes())
    }

    fn verify(&self, msg: &[u8], sig: &[u8]) -> bool {
        DilithiumSignature::from_bytes(&self.public.params, sig)
            .is_ok_and(|s| dilithium::verify(&self.public, msg, &s))
    }
}

pub struct KyberKem {
    pub public: KyberPublicKey,
    private: KyberPrivateKey,
}

impl KyberKem {
    pub fn new(public: KyberPublicKey, private: KyberPrivateKey) -> Self {
        KyberKem { public, private }
    }

    pub fn generate(params: &KyberParams, mut rng: &mut dyn RngCore) -> Self {
        let (public, private) = kyber::keygen(params, &mut rng);
        KyberKem { public, private }
    }
}

impl Kem for KyberKem {
    fn encapsulate(&self, mut rng: &mut dyn RngCore) -> Result<(SharedSecret, Vec<u8>)> {
        let (ss, ct) = kyber::kem_encapsulate(&self.public, &mut rng)?;
        Ok((ss, ct.to_bytes()))
    }

    fn decapsulate(&self, ct: &[u8]) -> Result<SharedSecret> {
        let ct = KyberCiphertext::from_bytes(&self.public.params, ct)?;
        kyber::kem_decapsulate(&self.private, &ct)
    }
}

/// Registry preloaded with `rsa`, `ecdsa`, `dilithium` and `kyber`.
///
/// RSA uses the 47·59 textbook key, ECDSA the `p10007` curve, Dilithium
/// level 2 and Kyber-512. Fresh keys are drawn from `rng`.
pub fn default_registry(rng: &mut dyn RngCore) -> Result<Registry> {
    let reg = Registry::new();
    reg.register(SchemeDescriptor::signer("rsa", Family::Classical, RsaSigner::from_primes(47, 59, 157)?))?;
    let dom = EcdsaDomain::from(ecc::preset("p10007")?);
    reg.register(SchemeDescriptor::signer("ecdsa", Family::Classical, EcdsaSigner::generate(dom, rng)?))?;
    reg.register(SchemeDescriptor::signer(
        "dilithium",
        Family::PostQuantum,
        DilithiumSigner::generate(&dilithium::LEVEL2, rng),
    ))?;
    reg.register(SchemeDescriptor::kem("kyber", Family::PostQuantum, KyberKem::generate(&kyber::KYBER512, rng)))?;
    Ok(reg)
}

// ---------------------------------------------------------------------------
// Mosca

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoscaInput {
    pub t_migrate: f64,
    pub t_confi: f64,
    pub t_crqc: f64,
}

impl MoscaInput {
    pub fn new(t_migrate: f64, t_confi: f64, t_crqc: f64) -> Result<Self> {
        for (name, v) in [("migrate", t_migrate), ("confi", t_confi), ("crqc", t_crqc)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(format!("t_{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(MoscaInput { t_migrate, t_confi, t_crqc })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoscaVerdict {
    /// `t_crqc - (t_migrate + t_confi)`
    pub slack: f64,
    pub at_risk: bool,
    /// Confidentiality alone outlives the quantum horizon.
    pub in_trouble: bool,
}

pub fn mosca_evaluate(inp: &MoscaInput) -> MoscaVerdict {
    let slack = inp.t_crqc - (inp.t_migrate + inp.t_confi);
    MoscaVerdict { slack, at_risk: slack < 0.0, in_trouble: inp.t_confi > inp.t_crqc }
}

impl fmt::Display for MoscaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slack {} ", self.slack)?;
        f.write_str(if self.at_risk { "AT_RISK" } else { "SAFE" })?;
        if self.in_trouble {
            f.write_str(" IN_TROUBLE")?;
        }
        Ok(())
    }
}
