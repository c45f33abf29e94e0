//! In-memory duplex byte streams for tests and loopback demos.
//!
//! Each direction is an mpsc channel of byte chunks. A [`Tap`] records
//! every byte written in one direction and a [`Mutation`] flips bits at a
//! fixed offset of that direction's byte stream.

use std::io::{self, Read, Write};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex};

pub type Tap = Arc<Mutex<Vec<u8>>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mutation {
    pub offset: usize,
    pub mask: u8,
}

#[derive(Default)]
pub struct Direction {
    pub tap: Option<Tap>,
    pub mutation: Option<Mutation>,
}

pub struct PipeEnd {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
    pending: Vec<u8>,
    pos: usize,
    written: usize,
    out: Direction,
}

impl Read for PipeEnd {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        if self.pos == self.pending.len() {
            match self.rx.recv() {
                Ok(chunk) => {
                    self.pending = chunk;
                    self.pos = 0;
                }
                Err(_) => return Ok(0),
            }
        }
        let n = buf.len().min(self.pending.len() - self.pos);
        buf[..n].copy_from_slice(&self.pending[self.pos..self.pos + n]);
        self.pos += n;
        Ok(n)
    }
}

impl Write for PipeEnd {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let mut chunk = buf.to_vec();
        if let Some(m) = self.out.mutation {
            if (self.written..self.written + chunk.len()).contains(&m.offset) {
                chunk[m.offset - self.written] ^= m.mask;
            }
        }
        self.written += chunk.len();
        if let Some(tap) = &self.out.tap {
            tap.lock().expect("tap poisoned").extend_from_slice(&chunk);
        }
        self.tx.send(chunk).map_err(|_| io::Error::new(io::ErrorKind::BrokenPipe, "peer hung up"))?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

/// `a_to_b` configures bytes written by the first end.
pub fn pipe_pair_with(a_to_b: Direction, b_to_a: Direction) -> (PipeEnd, PipeEnd) {
    let (tx_ab, rx_ab) = channel();
    let (tx_ba, rx_ba) = channel();
    let end = |tx, rx, out| PipeEnd { tx, rx, pending: Vec::new(), pos: 0, written: 0, out };
    (end(tx_ab, rx_ba, a_to_b), end(tx_ba, rx_ab, b_to_a))
}

pub fn pipe_pair() -> (PipeEnd, PipeEnd) {
    pipe_pair_with(Direction::default(), Direction::default())
}
