//! `qsafe` command-line front end.
//!
//! Exit codes: 0 success, 1 domain or data error, 2 usage error.

use std::io::{self, Read, Write};

use clap::{Parser, Subcommand};
use rand_chacha::ChaCha20Rng;

mod cmd;
pub mod keyfile;

pub use keyfile::{parse_keyfile, write_keyfile, KeyFileError, KeyMaterial};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    /// stdout closed early, e.g. piped into `head`
    #[error("broken pipe")]
    BrokenPipe,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
            CliError::BrokenPipe => 0,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(qsafe_core::Error, qsafe_channel::ChannelError, KeyFileError);

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::BrokenPipe => CliError::BrokenPipe,
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qsafe", version, about = "Desk-scale classical and post-quantum cryptography workbench")]
pub struct Cli {
    /// Seed for every random choice; runs with the same seed are byte-identical
    #[arg(long, global = true, env = "QSAFE_SEED")]
    pub seed: Option<u64>,

    /// Print intermediate values
    #[arg(long, global = true)]
    pub trace: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Modular arithmetic, gcd, inverses, periods and discrete logarithms
    #[command(subcommand)]
    Numtheory(cmd::numtheory::NumCmd),
    /// Textbook RSA with letter encoding
    #[command(subcommand)]
    Rsa(cmd::classic::RsaCmd),
    /// Elliptic curves over small prime fields, ECDH and ECDSA
    #[command(subcommand)]
    Ecc(cmd::classic::EccCmd),
    /// Classical simulation of Shor's period finding
    #[command(subcommand)]
    Shor(cmd::shor::ShorCmd),
    /// Lattice bases, SVP/CVP brute force, GGH and LWE
    #[command(subcommand)]
    Lattice(cmd::lattice::LatticeCmd),
    /// Module-LWE encryption and KEM
    #[command(subcommand)]
    Kyber(cmd::kyber::KyberCmd),
    /// Module-lattice signatures
    #[command(subcommand)]
    Dilithium(cmd::dilithium::DilithiumCmd),
    /// Hybrid classical + post-quantum signature
    Hybrid(cmd::agility::HybridArgs),
    /// Evaluate Mosca's inequality
    Mosca(cmd::agility::MoscaArgs),
    /// Accept KEM-secured connections and print received data
    Serve(cmd::net::ServeArgs),
    /// Connect to a server and send standard input through the channel
    Connect(cmd::net::ConnectArgs),
}

/// Shared state handed to every subcommand.
pub struct Ctx<'a> {
    pub seed: u64,
    pub trace: bool,
    pub input: &'a mut dyn Read,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Ctx<'_> {
    /// Independent stream per module so one module's draws never shift another's.
    pub fn rng(&self, label: &str) -> ChaCha20Rng {
        qsafe_core::xof::seeded_stream(self.seed, label)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, input: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => {
            let s = rand::random();
            let _ = writeln!(err, "seed: {s}");
            s
        }
    };
    let mut ctx = Ctx { seed, trace: cli.trace, input, out, err };
    match cmd::dispatch(cli.command, &mut ctx) {
        Ok(()) => 0,
        Err(CliError::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}
