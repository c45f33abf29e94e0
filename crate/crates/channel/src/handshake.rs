use std::io::{Read, Write};

use qsafe_core::ecc::{self, CurvePoint, CurvePreset};
use qsafe_core::kyber::{self, KyberCiphertext, KyberParams, KyberPrivateKey, KyberPublicKey, SharedSecret};
use qsafe_core::xof::{Shake256, Xof};
use rand::{Rng, RngCore};

use crate::error::{ChannelError, Result};
use crate::frame::{read_frame, write_frame, Frame, FrameType};
use crate::session::{Role, Session};

/// Curve used for the classical half of hybrid handshakes.
pub const EC_CURVE: &str = "p10007";
const POINT_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HandshakeMode {
    KemOnly = 1,
    Hybrid = 2,
}

impl HandshakeMode {
    fn from_byte(b: u8) -> Option<Self> {
        match b {
            1 => Some(HandshakeMode::KemOnly),
            2 => Some(HandshakeMode::Hybrid),
            _ => None,
        }
    }
}

fn curve() -> CurvePreset {
    ecc::preset(EC_CURVE).expect("built-in curve")
}

fn encode_point(p: &CurvePoint) -> Result<[u8; POINT_LEN]> {
    let CurvePoint::Affine { x, y } = *p else {
        return Err(ChannelError::Malformed("point at infinity".into()));
    };
    let mut out = [0u8; POINT_LEN];
    out[..8].copy_from_slice(&x.to_be_bytes());
    out[8..].copy_from_slice(&y.to_be_bytes());
    Ok(out)
}

fn decode_point(b: &[u8]) -> Result<CurvePoint> {
    let x = u64::from_be_bytes(b[..8].try_into().unwrap());
    let y = u64::from_be_bytes(b[8..16].try_into().unwrap());
    let p = CurvePoint::affine(x, y);
    if x >= curve().curve.p() || y >= curve().curve.p() || !ecc::on_curve(&p, &curve().curve) {
        return Err(ChannelError::Malformed("EC point not on curve".into()));
    }
    Ok(p)
}

fn ecdh_x(private: u64, peer: &CurvePoint) -> Result<u64> {
    ecc::ecdh_shared(private, peer, &curve().curve)?
        .x()
        .ok_or_else(|| ChannelError::Malformed("ECDH produced the point at infinity".into()))
}

pub fn transcript_hash(frames: &[u8]) -> [u8; 32] {
    Shake256.derive32(&[b"qsafe-transcript-v1", frames])
}

/// `XOF(kem_secret [|| ecdh_x] || transcript_hash)`
pub fn derive_key(kem: &SharedSecret, ecdh: Option<u64>, th: &[u8; 32]) -> [u8; 32] {
    let x = ecdh.map(u64::to_be_bytes);
    let x: &[u8] = match &x {
        Some(b) => b,
        None => &[],
    };
    Shake256.derive32(&[b"qsafe-channel-v1", kem, x, th])
}

/// Long-term server material. The EC key is present in hybrid mode only.
#[derive(Debug, Clone)]
pub struct ServerKeys {
    pub kyber_public: KyberPublicKey,
    kyber_private: KyberPrivateKey,
    ec_private: Option<u64>,
}

impl ServerKeys {
    pub fn generate(params: &KyberParams, with_ec: bool, rng: &mut impl RngCore) -> Self {
        let (kyber_public, kyber_private) = kyber::keygen(params, rng);
        let ec_private = with_ec.then(|| rng.gen_range(1..curve().order));
        ServerKeys { kyber_public, kyber_private, ec_private }
    }

    pub fn params(&self) -> &KyberParams {
        &self.kyber_public.params
    }
}

/// The decoded HELLO payload: `mode || params name`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientHello {
    pub mode: HandshakeMode,
    pub params: String,
}

impl ClientHello {
    fn to_frame(&self) -> Frame {
        let mut p = vec![self.mode as u8];
        p.extend_from_slice(self.params.as_bytes());
        Frame { kind: FrameType::Hello, payload: p }
    }

    fn parse(f: &Frame) -> Result<Self> {
        expect(f, FrameType::Hello)?;
        let (&m, name) = f.payload.split_first().ok_or_else(|| ChannelError::Malformed("empty HELLO".into()))?;
        let mode = HandshakeMode::from_byte(m).ok_or_else(|| ChannelError::Malformed("unknown handshake mode".into()))?;
        let params = String::from_utf8(name.to_vec()).map_err(|_| ChannelError::Malformed("params id".into()))?;
        Ok(ClientHello { mode, params })
    }
}

fn expect(f: &Frame, want: FrameType) -> Result<()> {
    match f.kind {
        k if k == want => Ok(()),
        FrameType::Alert => Err(ChannelError::Alert(String::from_utf8_lossy(&f.payload).into_owned())),
        k => Err(ChannelError::Unexpected { got: k.to_string(), want: want.to_string() }),
    }
}

/// Client after sending HELLO.
#[derive(Debug, Clone)]
pub struct ClientPending {
    params: KyberParams,
    mode: HandshakeMode,
    transcript: Vec<u8>,
}

impl ClientPending {
    pub fn start(params: &KyberParams, mode: HandshakeMode) -> (Self, Frame) {
        let hello = ClientHello { mode, params: params.name.to_string() }.to_frame();
        (ClientPending { params: *params, mode, transcript: hello.to_bytes() }, hello)
    }

    /// Consumes PUBKEY, encapsulates, and returns the session plus the ENCAP frame.
    pub fn on_pubkey(mut self, f: &Frame, rng: &mut impl RngCore) -> Result<(Session, Frame)> {
        expect(f, FrameType::PubKey)?;
        let pk_len = self.params.public_key_len();
        let want = pk_len + if self.mode == HandshakeMode::Hybrid { POINT_LEN } else { 0 };
        if f.payload.len() != want {
            return Err(ChannelError::Malformed(format!("PUBKEY of {} bytes, expected {want}", f.payload.len())));
        }
        let pk = KyberPublicKey::from_bytes(&self.params, &f.payload[..pk_len])?;
        self.transcript.extend_from_slice(&f.to_bytes());

        let (ss, ct) = kyber::kem_encapsulate(&pk, rng)?;
        let mut payload = ct.to_bytes();
        let ecdh = match self.mode {
            HandshakeMode::KemOnly => None,
            HandshakeMode::Hybrid => {
                let server_pt = decode_point(&f.payload[pk_len..])?;
                let c = curve();
                let d = rng.gen_range(1..c.order);
                payload.extend_from_slice(&encode_point(&ecc::ecdh_public(&c.generator, d, &c.curve)?)?);
                Some(ecdh_x(d, &server_pt)?)
            }
        };
        let encap = Frame::new(FrameType::Encap, payload)?;
        self.transcript.extend_from_slice(&encap.to_bytes());
        let key = derive_key(&ss, ecdh, &transcript_hash(&self.transcript));
        Ok((Session::established(Role::Client, key), encap))
    }
}

/// Server after answering HELLO.
#[derive(Debug, Clone)]
pub struct ServerPending<'k> {
    keys: &'k ServerKeys,
    mode: HandshakeMode,
    transcript: Vec<u8>,
}

impl<'k> ServerPending<'k> {
    pub fn on_hello(keys: &'k ServerKeys, mode: HandshakeMode, f: &Frame) -> Result<(Self, Frame)> {
        let hello = ClientHello::parse(f)?;
        if hello.params != keys.params().name {
            return Err(ChannelError::ParamsMismatch(format!("client wants {}, server has {}", hello.params, keys.params().name)));
        }
        if hello.mode != mode {
            return Err(ChannelError::ParamsMismatch(format!("client wants {:?}, server runs {mode:?}", hello.mode)));
        }
        let mut payload = keys.kyber_public.to_bytes();
        if mode == HandshakeMode::Hybrid {
            let d = keys.ec_private.ok_or_else(|| ChannelError::ParamsMismatch("server has no EC key".into()))?;
            let c = curve();
            payload.extend_from_slice(&encode_point(&ecc::ecdh_public(&c.generator, d, &c.curve)?)?);
        }
        let pubkey = Frame::new(FrameType::PubKey, payload)?;
        let mut transcript = f.to_bytes();
        transcript.extend_from_slice(&pubkey.to_bytes());
        Ok((ServerPending { keys, mode, transcript }, pubkey))
    }

    pub fn on_encap(mut self, f: &Frame) -> Result<Session> {
        expect(f, FrameType::Encap)?;
        let params = self.keys.params();
        let ct_len = params.ciphertext_len();
        let want = ct_len + if self.mode == HandshakeMode::Hybrid { POINT_LEN } else { 0 };
        if f.payload.len() != want {
            return Err(ChannelError::Malformed(format!("ENCAP of {} bytes, expected {want}", f.payload.len())));
        }
        let ct = KyberCiphertext::from_bytes(params, &f.payload[..ct_len])?;
        let ss = kyber::kem_decapsulate(&self.keys.kyber_private, &ct)?;
        let ecdh = match (self.mode, self.keys.ec_private) {
            (HandshakeMode::Hybrid, Some(d)) => Some(ecdh_x(d, &decode_point(&f.payload[ct_len..])?)?),
            _ => None,
        };
        self.transcript.extend_from_slice(&f.to_bytes());
        let key = derive_key(&ss, ecdh, &transcript_hash(&self.transcript));
        Ok(Session::established(Role::Server, key))
    }
}

/// Sends ALERT for local failures; peer alerts and EOF are passed through.
fn alert_on_err<T>(stream: &mut impl Write, r: Result<T>) -> Result<T> {
    if let Err(e) = &r {
        if !matches!(e, ChannelError::Alert(_) | ChannelError::Eof | ChannelError::Io(_)) {
            let _ = write_frame(stream, &Frame::alert(&e.to_string()));
        }
    }
    r
}

pub fn handshake_client<S: Read + Write>(
    stream: &mut S,
    params: &KyberParams,
    mode: HandshakeMode,
    rng: &mut impl RngCore,
) -> Result<Session> {
    let (pending, hello) = ClientPending::start(params, mode);
    write_frame(stream, &hello)?;
    let pubkey = read_frame(stream);
    let r = pubkey.and_then(|f| pending.on_pubkey(&f, rng));
    let (session, encap) = alert_on_err(stream, r)?;
    write_frame(stream, &encap)?;
    Ok(session)
}

pub fn handshake_server<S: Read + Write>(stream: &mut S, keys: &ServerKeys, mode: HandshakeMode) -> Result<Session> {
    let r = read_frame(stream).and_then(|f| ServerPending::on_hello(keys, mode, &f));
    let (pending, pubkey) = alert_on_err(stream, r)?;
    write_frame(stream, &pubkey)?;
    let r = read_frame(stream).and_then(|f| pending.on_encap(&f));
    alert_on_err(stream, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsafe_core::kyber::KYBER512;
    use qsafe_core::xof::seeded_stream;

    fn run(mode: HandshakeMode, seed: u64) -> (Session, Session) {
        let mut rng = seeded_stream(seed, "hs-unit");
        let keys = ServerKeys::generate(&KYBER512, true, &mut rng);
        let (cp, hello) = ClientPending::start(&KYBER512, mode);
        let (sp, pubkey) = ServerPending::on_hello(&keys, mode, &hello).unwrap();
        let (client, encap) = cp.on_pubkey(&pubkey, &mut rng).unwrap();
        (client, sp.on_encap(&encap).unwrap())
    }

    #[test]
    fn keys_agree() {
        for mode in [HandshakeMode::KemOnly, HandshakeMode::Hybrid] {
            let (c, s) = run(mode, 1);
            assert_eq!(c.shared_key(), s.shared_key());
        }
    }

    #[test]
    fn hybrid_mixes_ecdh() {
        assert_ne!(run(HandshakeMode::KemOnly, 2).0.shared_key(), run(HandshakeMode::Hybrid, 2).0.shared_key());
        assert_ne!(derive_key(&[0; 32], None, &[0; 32]), derive_key(&[0; 32], Some(0), &[0; 32]));
    }

    #[test]
    fn mismatches_abort() {
        let mut rng = seeded_stream(3, "hs-unit");
        let keys = ServerKeys::generate(&KYBER512, false, &mut rng);
        let (_, hello) = ClientPending::start(&kyber::KYBER768, HandshakeMode::KemOnly);
        assert!(matches!(ServerPending::on_hello(&keys, HandshakeMode::KemOnly, &hello), Err(ChannelError::ParamsMismatch(_))));
        let (_, hello) = ClientPending::start(&KYBER512, HandshakeMode::Hybrid);
        assert!(ServerPending::on_hello(&keys, HandshakeMode::Hybrid, &hello).is_err());
        assert!(ServerPending::on_hello(&keys, HandshakeMode::KemOnly, &hello).is_err());
    }

    #[test]
    fn point_codec() {
        let c = curve();
        let bytes = encode_point(&c.generator).unwrap();
        assert_eq!(decode_point(&bytes).unwrap(), c.generator);
        let mut bad = bytes;
        bad[15] ^= 1;
        assert!(decode_point(&bad).is_err());
        assert!(encode_point(&CurvePoint::Infinity).is_err());
    }
}
