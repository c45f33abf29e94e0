use std::path::PathBuf;

use clap::Subcommand;
use qsafe_core::kyber::{self, worked, EncryptionRandomness, KyberParams};
use qsafe_core::polyring::{bits_to_poly, bits_to_string, parse_bits, render_coeffs, scale_half_q, RingElem, RingVec};
use rand::Rng;

use super::{read_file, write_file};
use crate::keyfile::{parse_keyfile, write_keyfile, KeyMaterial};
use crate::{say, CliError, CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum KyberCmd {
    /// Key generation, encryption and decryption; `toy` replays the hand-computed example
    Demo {
        #[arg(long, default_value = "toy")]
        params: String,
    },
    /// Write a key pair to text files
    Keygen {
        #[arg(long, default_value = "512")]
        params: String,
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        private: PathBuf,
    },
    /// Encrypt a bit string such as 1001 under a public key file
    Encrypt {
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file and print the bits
    Decrypt {
        #[arg(long)]
        private: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
    },
    /// Encapsulate against a public key file and print the shared secret
    Encaps {
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decapsulate a ciphertext file and print the shared secret
    Decaps {
        #[arg(long)]
        private: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
    },
}

fn load(path: &PathBuf) -> CliResult<KeyMaterial> {
    parse_keyfile(&read_file(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn wrong_kind(path: &PathBuf, want: &str, got: &KeyMaterial) -> CliError {
    CliError::Domain(format!("{}: expected {want}, found {}", path.display(), got.scheme()))
}

pub fn run(c: KyberCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        KyberCmd::Demo { params } => {
            let p = KyberParams::by_name(&params)?;
            if p == kyber::TOY {
                toy_demo(ctx)
            } else {
                random_demo(ctx, &p)
            }
        }
        KyberCmd::Keygen { params, public, private } => {
            let p = KyberParams::by_name(&params)?;
            let (pk, sk) = kyber::keygen(&p, &mut ctx.rng("kyber"));
            write_file(&public, &write_keyfile(&KeyMaterial::KyberPublic(pk)))?;
            write_file(&private, &write_keyfile(&KeyMaterial::KyberPrivate(sk)))?;
            say!(ctx, "wrote {} key pair", p);
            Ok(())
        }
        KyberCmd::Encrypt { public, message, out } => {
            let pk = match load(&public)? {
                KeyMaterial::KyberPublic(pk) => pk,
                other => return Err(wrong_kind(&public, "kyber-public", &other)),
            };
            let bits = parse_bits(&message)?;
            let rand = EncryptionRandomness::sample(&pk.params, &mut ctx.rng("kyber"));
            let ct = kyber::encrypt(&pk, &bits, &rand)?;
            write_file(&out, &write_keyfile(&KeyMaterial::KyberCiphertext(pk.params, ct)))?;
            Ok(())
        }
        KyberCmd::Decrypt { private, ciphertext } => {
            let sk = match load(&private)? {
                KeyMaterial::KyberPrivate(sk) => sk,
                other => return Err(wrong_kind(&private, "kyber-private", &other)),
            };
            let ct = match load(&ciphertext)? {
                KeyMaterial::KyberCiphertext(_, ct) => ct,
                other => return Err(wrong_kind(&ciphertext, "kyber-ciphertext", &other)),
            };
            if ctx.trace {
                say!(ctx, "m_hat = {}", kyber::decrypt_raw(&sk, &ct)?);
            }
            say!(ctx, "{}", bits_to_string(&kyber::decrypt(&sk, &ct)?));
            Ok(())
        }
        KyberCmd::Encaps { public, out } => {
            let pk = match load(&public)? {
                KeyMaterial::KyberPublic(pk) => pk,
                other => return Err(wrong_kind(&public, "kyber-public", &other)),
            };
            let (ss, ct) = kyber::kem_encapsulate(&pk, &mut ctx.rng("kyber"))?;
            write_file(&out, &write_keyfile(&KeyMaterial::KyberCiphertext(pk.params, ct)))?;
            say!(ctx, "{}", hex::encode(ss));
            Ok(())
        }
        KyberCmd::Decaps { private, ciphertext } => {
            let sk = match load(&private)? {
                KeyMaterial::KyberPrivate(sk) => sk,
                other => return Err(wrong_kind(&private, "kyber-private", &other)),
            };
            let ct = match load(&ciphertext)? {
                KeyMaterial::KyberCiphertext(_, ct) => ct,
                other => return Err(wrong_kind(&ciphertext, "kyber-ciphertext", &other)),
            };
            say!(ctx, "{}", hex::encode(kyber::kem_decapsulate(&sk, &ct)?));
            Ok(())
        }
    }
}

fn signed(e: &RingElem) -> String {
    e.display_centered()
}

fn signed_vec(v: &RingVec) -> String {
    let parts: Vec<String> = v.entries().iter().map(signed).collect();
    format!("({})", parts.join(", "))
}

/// One row of the published/recomputed comparison.
fn compare(ctx: &mut Ctx, label: &str, published: &[i64], computed: &RingElem) -> CliResult {
    let verdict = if worked::elem(published) == *computed { "same mod 7" } else { "DIFFERS" };
    say!(ctx, "  {label:<8} {:<22} {:<22} {verdict}", render_coeffs(published), computed.to_string());
    Ok(())
}

fn toy_demo(ctx: &mut Ctx) -> CliResult {
    let p = kyber::TOY;
    let (pk, sk) = worked::keys();
    let rand = worked::randomness();
    let e = worked::vector(&worked::E);
    let bits = parse_bits(worked::MESSAGE)?;
    say!(ctx, "{p}");
    say!(ctx, "s = {}", signed_vec(&sk.s));
    say!(ctx, "A = {}", pk.a);
    say!(ctx, "e = {}", signed_vec(&e));
    say!(ctx, "t = As + e = {}", pk.t);

    let scaled = scale_half_q(&bits_to_poly(&bits, p.n, p.q)?)?;
    let ct = kyber::encrypt(&pk, &bits, &rand)?;
    let m_hat = kyber::decrypt_raw(&sk, &ct)?;
    let decrypted = kyber::decrypt(&sk, &ct)?;
    say!(ctx, "m = {} -> {scaled}", worked::MESSAGE);
    say!(ctx, "r = {}, e1 = {}, e2 = {}", signed_vec(&rand.r), signed_vec(&rand.e1), signed(&rand.e2));
    say!(ctx, "u = {}", ct.u);
    say!(ctx, "v = {}", ct.v);
    say!(ctx, "m_hat = v - s.u = {m_hat}");
    say!(ctx, "decrypted = {}", bits_to_string(&decrypted));

    if ctx.trace {
        let published_m = kyber::decrypt(&sk, &worked::published_ciphertext())?;
        say!(ctx, "");
        say!(ctx, "  {:<8} {:<22} {:<22}", "value", "published", "recomputed");
        for i in 0..2 {
            compare(ctx, &format!("t[{i}]"), &worked::PUBLISHED_T[i], pk.t.get(i))?;
        }
        for i in 0..2 {
            compare(ctx, &format!("u[{i}]"), &worked::PUBLISHED_U[i], ct.u.get(i))?;
        }
        compare(ctx, "v", &worked::PUBLISHED_V, &ct.v)?;
        compare(ctx, "m_hat", &worked::PUBLISHED_M_HAT, &m_hat)?;
        say!(
            ctx,
            "  {:<8} {:<22} {:<22} {}",
            "bits",
            bits_to_string(&published_m),
            bits_to_string(&decrypted),
            if published_m == decrypted { "same" } else { "DIFFERS" }
        );
        let noise = kyber::noise_term(&sk, &e, &rand)?;
        say!(ctx, "noise e.r + e2 - s.e1 = {}, |noise|_inf = {}, q/4 = {:.2}", signed(&noise), noise.inf_norm(), p.q as f64 / 4.0);
        say!(ctx, "m_hat = scaled m + noise: {}", scaled.add(&noise)? == m_hat);
    }
    Ok(())
}

fn random_demo(ctx: &mut Ctx, p: &KyberParams) -> CliResult {
    let mut rng = ctx.rng("kyber");
    let t = kyber::keygen_transcript(p, &mut rng);
    let bits: Vec<u8> = (0..p.n).map(|_| rng.gen_range(0..2)).collect();
    let rand = EncryptionRandomness::sample(p, &mut rng);
    let ct = kyber::encrypt(&t.public, &bits, &rand)?;
    let back = kyber::decrypt(&t.private, &ct)?;
    say!(ctx, "{p}");
    say!(ctx, "public key {} bytes, ciphertext {} bytes", t.public.to_bytes().len(), ct.to_bytes().len());
    let shown = |b: &[u8]| bits_to_string(&b[..b.len().min(64)]);
    say!(ctx, "message   {}...", shown(&bits));
    say!(ctx, "decrypted {}...", shown(&back));
    if ctx.trace {
        let noise = kyber::noise_term(&t.private, &t.e, &rand)?;
        say!(ctx, "|noise|_inf = {} (q/4 = {:.2})", noise.inf_norm(), p.q as f64 / 4.0);
    }
    say!(ctx, "round trip: {}", if back == bits { "ok" } else { "FAILED" });
    Ok(())
}
