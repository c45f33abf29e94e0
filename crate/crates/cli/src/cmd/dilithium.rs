use std::path::PathBuf;

use clap::Subcommand;
use qsafe_core::dilithium::{self, DilithiumParams};

use super::{read_file, write_file};
use crate::keyfile::{parse_keyfile, write_keyfile, KeyMaterial};
use crate::{say, CliError, CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum DilithiumCmd {
    /// Key generation, signing, verification and a tamper check
    Demo {
        #[arg(long, default_value = "toy")]
        params: String,
        #[arg(long, default_value = "ITS ALL GREEK TO ME")]
        message: String,
    },
    /// Write a key pair to text files
    Keygen {
        #[arg(long, default_value = "2")]
        params: String,
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        private: PathBuf,
    },
    /// Sign MESSAGE; signing also needs the public key to check its own output
    Sign {
        #[arg(long)]
        private: PathBuf,
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a signature file; exits 1 when invalid
    Verify {
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        message: String,
        #[arg(long)]
        signature: PathBuf,
    },
}

fn load(path: &PathBuf) -> CliResult<KeyMaterial> {
    parse_keyfile(&read_file(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn load_public(path: &PathBuf) -> CliResult<dilithium::DilithiumPublicKey> {
    match load(path)? {
        KeyMaterial::DilithiumPublic(pk) => Ok(pk),
        other => Err(CliError::Domain(format!("{}: expected dilithium-public, found {}", path.display(), other.scheme()))),
    }
}

pub fn run(c: DilithiumCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        DilithiumCmd::Demo { params, message } => demo(ctx, &DilithiumParams::by_name(&params)?, message.as_bytes()),
        DilithiumCmd::Keygen { params, public, private } => {
            let p = DilithiumParams::by_name(&params)?;
            let (pk, sk) = dilithium::keygen(&p, &mut ctx.rng("dilithium"));
            write_file(&public, &write_keyfile(&KeyMaterial::DilithiumPublic(pk)))?;
            write_file(&private, &write_keyfile(&KeyMaterial::DilithiumPrivate(sk)))?;
            say!(ctx, "wrote {p} key pair");
            Ok(())
        }
        DilithiumCmd::Sign { private, public, message, out } => {
            let sk = match load(&private)? {
                KeyMaterial::DilithiumPrivate(sk) => sk,
                other => {
                    return Err(CliError::Domain(format!("{}: expected dilithium-private, found {}", private.display(), other.scheme())))
                }
            };
            let pk = load_public(&public)?;
            let (sig, attempts) = dilithium::sign_counted(&sk, &pk, message.as_bytes(), &mut ctx.rng("dilithium"))?;
            write_file(&out, &write_keyfile(&KeyMaterial::DilithiumSignature(pk.params, sig)))?;
            if ctx.trace {
                say!(ctx, "signed after {attempts} attempt(s)");
            }
            Ok(())
        }
        DilithiumCmd::Verify { public, message, signature } => {
            let pk = load_public(&public)?;
            let sig = match load(&signature)? {
                KeyMaterial::DilithiumSignature(_, sig) => sig,
                other => {
                    return Err(CliError::Domain(format!("{}: expected dilithium-signature, found {}", signature.display(), other.scheme())))
                }
            };
            if dilithium::verify(&pk, message.as_bytes(), &sig) {
                say!(ctx, "valid");
                Ok(())
            } else {
                say!(ctx, "invalid");
                Err(CliError::Domain("signature does not verify".into()))
            }
        }
    }
}

fn demo(ctx: &mut Ctx, p: &DilithiumParams, msg: &[u8]) -> CliResult {
    let mut rng = ctx.rng("dilithium");
    let (pk, sk) = dilithium::keygen(p, &mut rng);
    say!(ctx, "{p}");
    if ctx.trace {
        say!(ctx, "s = {}", sk.s);
        say!(ctx, "t = {}", pk.t);
    }
    let (sig, attempts) = dilithium::sign_counted(&sk, &pk, msg, &mut rng)?;
    let positions: Vec<String> = sig.c.positions().iter().map(|(i, s)| format!("{}x^{i}", if *s < 0 { "-" } else { "+" })).collect();
    say!(ctx, "challenge c = {}", positions.join(" "));
    say!(ctx, "|r2|_inf = {}, signing attempts = {attempts}", sig.r2.inf_norm());
    say!(ctx, "signature {} bytes", sig.to_bytes().len());
    say!(ctx, "verify: {}", dilithium::verify(&pk, msg, &sig));
    let mut tampered = msg.to_vec();
    if let Some(b) = tampered.first_mut() {
        *b ^= 1;
    } else {
        tampered.push(1);
    }
    say!(ctx, "verify tampered message: {}", dilithium::verify(&pk, &tampered, &sig));
    Ok(())
}
