//! A toy KEM-secured transport: length-prefixed frames, a Kyber handshake
//! (optionally mixed with ECDH) and an XOF-based record layer.
//!
//! **Not for production.** The server key is not authenticated and the
//! record cipher is a teaching stand-in, not an AEAD.

mod error;
mod frame;
mod handshake;
pub mod pipe;
mod session;

pub use error::{ChannelError, Result};
pub use frame::{read_frame, write_frame, Frame, FrameType, HEADER_LEN, MAX_PAYLOAD};
pub use handshake::{
    derive_key, handshake_client, handshake_server, transcript_hash, ClientHello, ClientPending, HandshakeMode,
    ServerKeys, ServerPending, EC_CURVE,
};
pub use session::{Phase, Role, Session, TAG_LEN};
