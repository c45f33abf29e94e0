use std::fmt;
use std::io::{ErrorKind, Read, Write};

use crate::error::{ChannelError, Result};

pub const HEADER_LEN: usize = 5;
pub const MAX_PAYLOAD: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum FrameType {
    Hello = 1,
    PubKey = 2,
    Encap = 3,
    Data = 4,
    Alert = 5,
}

impl FrameType {
    pub fn from_byte(b: u8) -> Option<Self> {
        Some(match b {
            1 => FrameType::Hello,
            2 => FrameType::PubKey,
            3 => FrameType::Encap,
            4 => FrameType::Data,
            5 => FrameType::Alert,
            _ => return None,
        })
    }
}

impl fmt::Display for FrameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameType::Hello => "HELLO",
            FrameType::PubKey => "PUBKEY",
            FrameType::Encap => "ENCAP",
            FrameType::Data => "DATA",
            FrameType::Alert => "ALERT",
        })
    }
}

/// `type (1 byte) || length (4 bytes BE) || payload`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub kind: FrameType,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(kind: FrameType, payload: Vec<u8>) -> Result<Self> {
        if payload.len() > MAX_PAYLOAD {
            return Err(ChannelError::Malformed(format!("payload of {} bytes exceeds {MAX_PAYLOAD}", payload.len())));
        }
        Ok(Frame { kind, payload })
    }

    pub fn alert(reason: &str) -> Self {
        let mut msg = reason.as_bytes().to_vec();
        msg.truncate(256);
        Frame { kind: FrameType::Alert, payload: msg }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.push(self.kind as u8);
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Parses exactly one frame occupying all of `bytes`.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let (kind, len) = parse_header(bytes.get(..HEADER_LEN).ok_or_else(|| malformed("short header"))?)?;
        if bytes.len() - HEADER_LEN != len {
            return Err(malformed("length field disagrees with frame size"));
        }
        Ok(Frame { kind, payload: bytes[HEADER_LEN..].to_vec() })
    }
}

fn malformed(msg: &str) -> ChannelError {
    ChannelError::Malformed(msg.to_string())
}

fn parse_header(h: &[u8]) -> Result<(FrameType, usize)> {
    let kind = FrameType::from_byte(h[0]).ok_or_else(|| malformed("unknown frame type"))?;
    let len = u32::from_be_bytes([h[1], h[2], h[3], h[4]]) as usize;
    if len > MAX_PAYLOAD {
        return Err(malformed("length exceeds maximum"));
    }
    Ok((kind, len))
}

pub fn write_frame(w: &mut impl Write, frame: &Frame) -> Result<()> {
    w.write_all(&frame.to_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn read_frame(r: &mut impl Read) -> Result<Frame> {
    let mut header = [0u8; HEADER_LEN];
    read_exact(r, &mut header)?;
    let (kind, len) = parse_header(&header)?;
    let mut payload = vec![0u8; len];
    read_exact(r, &mut payload)?;
    Ok(Frame { kind, payload })
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        ErrorKind::UnexpectedEof => ChannelError::Eof,
        _ => ChannelError::Io(e),
    })
}
