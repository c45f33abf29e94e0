
use clap::Subcommand;
use qsafe_core::ecc::{self, EcdsaDomain};
use qsafe_core::rsa::{self, BlockMessage, RsaPrivateKey, RsaPublicKey};
use rand::Rng;

use crate::{say, CliError, CliResult, Ctx};

pub const DEMO_TEXT: &str = "ITS ALL GREEK TO ME";

#[derive(Debug, Subcommand)]
pub enum RsaCmd {
    /// Key generation, encoding, encryption and decryption of the classic example
    Demo,
    /// Derive the key pair from primes P, Q and private exponent G
    Keygen {
        #[arg(long, default_value_t = 47)]
        p: u64,
        #[arg(long, default_value_t = 59)]
        q: u64,
        #[arg(long, default_value_t = 157)]
        g: u64,
    },
    /// Encode TEXT as letter blocks and encrypt with the public key (D, N)
    Encrypt {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        text: String,
    },
    /// Decrypt space-separated BLOCKS with the private key (G, N) and decode
    Decrypt {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        n: u64,
        blocks: Vec<String>,
    },
}

fn parse_blocks(blocks: &[String]) -> CliResult<BlockMessage> {
    let width = blocks.first().map(String::len).ok_or_else(|| CliError::Usage("no blocks given".into()))?;
    let parsed = blocks
        .iter()
        .map(|b| b.parse::<u64>().map_err(|_| CliError::Domain(format!("`{b}` is not a decimal block"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(BlockMessage { blocks: parsed, block_width: width })
}

pub fn run_rsa(c: RsaCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        RsaCmd::Demo => rsa_demo(ctx),
        RsaCmd::Keygen { p, q, g } => {
            let (pk, sk, t) = rsa::rsa_keygen_traced(p, q, g)?;
            say!(ctx, "n = {}, phi(n) = {}", pk.n, t.phi);
            say!(ctx, "public key (d, n) = ({}, {})", pk.d, pk.n);
            say!(ctx, "private key (g, n) = ({}, {})", sk.g, sk.n);
            Ok(())
        }
        RsaCmd::Encrypt { d, n, text } => {
            let m = rsa::encode_text(&text, n)?;
            say!(ctx, "{}", rsa::rsa_encrypt(&m, &RsaPublicKey::new(d, n)?)?);
            Ok(())
        }
        RsaCmd::Decrypt { g, n, blocks } => {
            let ct = parse_blocks(&blocks)?;
            let m = rsa::rsa_decrypt(&ct, &RsaPrivateKey::new(g, n)?)?;
            if ctx.trace {
                say!(ctx, "blocks: {m}");
            }
            say!(ctx, "{}", rsa::decode_text(&m)?);
            Ok(())
        }
    }
}

fn rsa_demo(ctx: &mut Ctx) -> CliResult {
    let (pk, sk, t) = rsa::rsa_keygen_traced(47, 59, 157)?;
    say!(ctx, "p = {}, q = {}, n = {}, phi(n) = {}", t.p, t.q, pk.n, t.phi);
    say!(ctx, "private key (g, n) = ({}, {})", sk.g, sk.n);
    say!(ctx, "public key (d, n) = ({}, {})", pk.d, pk.n);
    say!(ctx, "message: {DEMO_TEXT}");
    let m = rsa::encode_text(DEMO_TEXT, pk.n)?;
    let c = rsa::rsa_encrypt(&m, &pk)?;
    let back = rsa::rsa_decrypt(&c, &sk)?;
    say!(ctx, "encoded:   {m}");
    say!(ctx, "encrypted: {c}");
    let w = m.block_width;
    for (i, ((mi, ci), bi)) in m.blocks.iter().zip(&c.blocks).zip(&back.blocks).enumerate() {
        say!(ctx, "block {:>2}: {mi:0w$} -> {ci:0w$} -> {bi:0w$}", i + 1);
    }
    say!(ctx, "decrypted: {}", rsa::decode_text(&back)?);
    Ok(())
}

#[derive(Debug, Subcommand)]
pub enum EccCmd {
    /// ECDH agreement and an ECDSA signature on a named curve
    Demo {
        #[arg(long, default_value = "f97")]
        curve: String,
    },
    /// Curve parameters, generator and group size
    Info {
        #[arg(long, default_value = "f97")]
        curve: String,
    },
    /// Compute K*G, then recover K by brute force
    Dlog {
        #[arg(long, default_value = "f97")]
        curve: String,
        #[arg(long)]
        k: u64,
    },
}

pub fn run_ecc(c: EccCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        EccCmd::Demo { curve } => ecc_demo(ctx, &curve),
        EccCmd::Info { curve } => {
            let p = ecc::preset(&curve)?;
            say!(ctx, "{}: {}", p.name, p.curve);
            say!(ctx, "generator {} of order {}", p.generator, p.order);
            say!(ctx, "points on curve (including N): {}", ecc::enumerate_points(&p.curve).len());
            Ok(())
        }
        EccCmd::Dlog { curve, k } => {
            let p = ecc::preset(&curve)?;
            let pt = ecc::point_pow(&p.generator, k, &p.curve)?;
            let found = ecc::ec_dlog_bruteforce(&p.generator, &pt, &p.curve)?;
            say!(ctx, "{k} * {} = {pt}", p.generator);
            say!(ctx, "brute-force log = {found}");
            Ok(())
        }
    }
}

fn ecc_demo(ctx: &mut Ctx, curve: &str) -> CliResult {
    let p = ecc::preset(curve)?;
    let mut rng = ctx.rng("ecc");
    say!(ctx, "{}: {}, generator {} of order {}", p.name, p.curve, p.generator, p.order);
    let (a, b) = (rng.gen_range(1..p.order), rng.gen_range(1..p.order));
    let (pa, pb) = (ecc::ecdh_public(&p.generator, a, &p.curve)?, ecc::ecdh_public(&p.generator, b, &p.curve)?);
    let (sa, sb) = (ecc::ecdh_shared(a, &pb, &p.curve)?, ecc::ecdh_shared(b, &pa, &p.curve)?);
    say!(ctx, "alice: private {a}, public {pa}");
    say!(ctx, "bob:   private {b}, public {pb}");
    say!(ctx, "shared: {sa} / {sb} (agree: {})", sa == sb);

    let dom = EcdsaDomain::from(p);
    let digest = rng.gen_range(1..p.order);
    let sig = ecc::ecdsa_sign(digest, a, &dom, &mut rng)?;
    say!(ctx, "ecdsa: digest {digest}, signature (r, s) = ({}, {})", sig.r, sig.s);
    say!(ctx, "verify: {}", ecc::ecdsa_verify(digest, &sig, &pa, &dom));
    say!(ctx, "verify other digest: {}", ecc::ecdsa_verify((digest + 1) % p.order, &sig, &pa, &dom));
    Ok(())
}
