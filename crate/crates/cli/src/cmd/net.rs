
use std::net::{TcpListener, TcpStream};
use std::sync::mpsc;
use std::sync::Arc;
use std::thread;

use clap::Args;
use qsafe_channel::{handshake_client, handshake_server, ChannelError, HandshakeMode, ServerKeys};
use qsafe_core::kyber::KyberParams;

use crate::{CliError, CliResult, Ctx};

const CHUNK: usize = 16 * 1024;

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Port to listen on; 0 picks a free one and reports it
    #[arg(long)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: String,
    #[arg(long, default_value = "512")]
    pub params: String,
    /// Mix an ECDH share into the session key
    #[arg(long)]
    pub hybrid: bool,
    /// Exit after the first connection closes
    #[arg(long)]
    pub once: bool,
}

#[derive(Debug, Args)]
pub struct ConnectArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long)]
    pub port: u16,
    #[arg(long, default_value = "512")]
    pub params: String,
    #[arg(long)]
    pub hybrid: bool,
}

fn mode(hybrid: bool) -> HandshakeMode {
    if hybrid {
        HandshakeMode::Hybrid
    } else {
        HandshakeMode::KemOnly
    }
}

/// Runs one server session, handing each plaintext to `sink`.
fn session(mut stream: TcpStream, keys: &ServerKeys, mode: HandshakeMode, mut sink: impl FnMut(Vec<u8>)) -> Result<(), ChannelError> {
    let mut s = handshake_server(&mut stream, keys, mode)?;
    loop {
        match s.recv(&mut stream) {
            Ok(data) => sink(data),
            Err(ChannelError::Eof) => return Ok(()),
            Err(e) => return Err(e),
        }
    }
}

pub fn serve(a: ServeArgs, ctx: &mut Ctx) -> CliResult {
    let params = KyberParams::by_name(&a.params)?;
    let keys = Arc::new(ServerKeys::generate(&params, a.hybrid, &mut ctx.rng("serve")));
    let listener = TcpListener::bind((a.bind.as_str(), a.port))?;
    writeln!(ctx.err, "listening on {} ({params}, {:?}); the server key is NOT authenticated", listener.local_addr()?, mode(a.hybrid))?;
    ctx.err.flush()?;

    if a.once {
        let (stream, peer) = listener.accept()?;
        writeln!(ctx.err, "connection from {peer}")?;
        let out = &mut *ctx.out;
        let r = session(stream, &keys, mode(a.hybrid), |d| {
            let _ = out.write_all(&d);
            let _ = out.flush();
        });
        return r.map_err(CliError::from);
    }

    let (tx, rx) = mpsc::channel::<Vec<u8>>();
    let m = mode(a.hybrid);
    thread::spawn(move || {
        for stream in listener.incoming().flatten() {
            let (keys, tx) = (Arc::clone(&keys), tx.clone());
            thread::spawn(move || {
                let _ = session(stream, &keys, m, |d| {
                    let _ = tx.send(d);
                });
            });
        }
    });
    for data in rx {
        ctx.out.write_all(&data)?;
        ctx.out.flush()?;
    }
    Ok(())
}

pub fn connect(a: ConnectArgs, ctx: &mut Ctx) -> CliResult {
    let params = KyberParams::by_name(&a.params)?;
    let mut stream = TcpStream::connect((a.host.as_str(), a.port))?;
    let mut s = handshake_client(&mut stream, &params, mode(a.hybrid), &mut ctx.rng("connect"))?;
    if ctx.trace {
        writeln!(ctx.err, "session key {}", hex::encode(s.shared_key()))?;
    }
    let mut buf = vec![0u8; CHUNK];
    loop {
        let n = ctx.input.read(&mut buf)?;
        if n == 0 {
            break;
        }
        s.send(&mut stream, &buf[..n])?;
    }
    stream.shutdown(std::net::Shutdown::Write)?;
    Ok(())
}
