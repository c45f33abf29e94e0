use std::io::{Read, Write};

use qsafe_core::xof::{Shake256, Xof};

use crate::error::{ChannelError, Result};
use crate::frame::{read_frame, write_frame, Frame, FrameType};

pub const TAG_LEN: usize = 16;
const CTR_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Client,
    Server,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Init,
    Awaiting,
    Established,
    Failed,
}

/// Record-layer state after a completed handshake.
#[derive(Debug, Clone)]
pub struct Session {
    pub role: Role,
    pub phase: Phase,
    key: [u8; 32],
    send_ctr: u64,
    /// smallest counter `open` will still accept
    recv_next: u64,
}

impl Session {
    pub fn established(role: Role, key: [u8; 32]) -> Self {
        Session { role, phase: Phase::Established, key, send_ctr: 0, recv_next: 0 }
    }

    pub fn shared_key(&self) -> &[u8; 32] {
        &self.key
    }

    pub fn send_counter(&self) -> u64 {
        self.send_ctr
    }

    fn keystream(&self, ctr: u64, len: usize) -> Vec<u8> {
        Shake256.derive(&[&self.key, &ctr.to_be_bytes()], len)
    }

    fn tag(&self, ctr: u64, ct: &[u8]) -> [u8; TAG_LEN] {
        let mut t = [0u8; TAG_LEN];
        Shake256.fill(&[&self.key, &ctr.to_be_bytes(), ct], &mut t);
        t
    }

    /// DATA payload is `counter (8 bytes BE) || ciphertext || tag`.
    pub fn seal(&mut self, plaintext: &[u8]) -> Result<Frame> {
        if self.phase != Phase::Established {
            return Err(ChannelError::NotEstablished);
        }
        let ctr = self.send_ctr;
        self.send_ctr += 1;
        let mut payload = ctr.to_be_bytes().to_vec();
        payload.extend(plaintext.iter().zip(self.keystream(ctr, plaintext.len())).map(|(p, k)| p ^ k));
        let tag = self.tag(ctr, &payload[CTR_LEN..]);
        payload.extend_from_slice(&tag);
        Frame::new(FrameType::Data, payload)
    }

    /// The tag is checked before the counter, so a forged frame reports
    /// `AuthFailure` even when its counter is stale.
    pub fn open(&mut self, frame: &Frame) -> Result<Vec<u8>> {
        if self.phase != Phase::Established {
            return Err(ChannelError::NotEstablished);
        }
        match frame.kind {
            FrameType::Data => {}
            FrameType::Alert => return Err(ChannelError::Alert(String::from_utf8_lossy(&frame.payload).into_owned())),
            other => return Err(ChannelError::Unexpected { got: other.to_string(), want: "DATA".into() }),
        }
        let p = &frame.payload;
        if p.len() < CTR_LEN + TAG_LEN {
            return Err(ChannelError::AuthFailure);
        }
        let ctr = u64::from_be_bytes(p[..CTR_LEN].try_into().unwrap());
        let (ct, tag) = p[CTR_LEN..].split_at(p.len() - CTR_LEN - TAG_LEN);
        if self.tag(ctr, ct) != tag {
            return Err(ChannelError::AuthFailure);
        }
        if ctr < self.recv_next {
            return Err(ChannelError::ReplayError { got: ctr, expected: self.recv_next });
        }
        self.recv_next = ctr + 1;
        Ok(ct.iter().zip(self.keystream(ctr, ct.len())).map(|(c, k)| c ^ k).collect())
    }

    pub fn send(&mut self, w: &mut impl Write, plaintext: &[u8]) -> Result<()> {
        let f = self.seal(plaintext)?;
        write_frame(w, &f)
    }

    /// Reads one DATA frame. Authentication and replay failures answer with
    /// ALERT and fail the session.
    pub fn recv<S: Read + Write>(&mut self, stream: &mut S) -> Result<Vec<u8>> {
        let frame = match read_frame(stream) {
            Ok(f) => f,
            Err(e) => {
                self.phase = Phase::Failed;
                return Err(e);
            }
        };
        self.open(&frame).inspect_err(|e| {
            if matches!(e, ChannelError::AuthFailure | ChannelError::ReplayError { .. } | ChannelError::Unexpected { .. }) {
                let _ = write_frame(stream, &Frame::alert(&e.to_string()));
            }
            self.phase = Phase::Failed;
        })
    }
}
