
use clap::Args;
use qsafe_core::agility::{self, HybridMode, MoscaInput};

use crate::{say, CliError, CliResult, Ctx};

#[derive(Debug, Args)]
pub struct HybridArgs {
    /// c-then-q, q-then-c or parallel
    #[arg(long, default_value = "c-then-q", value_parser = parse_mode)]
    pub mode: HybridMode,
    #[arg(long, default_value = "ecdsa", value_parser = ["ecdsa", "rsa"])]
    pub classical: String,
    #[arg(long, default_value = "dilithium", value_parser = ["dilithium"])]
    pub pq: String,
    #[arg(long, default_value = "ITS ALL GREEK TO ME")]
    pub message: String,
}

fn parse_mode(s: &str) -> Result<HybridMode, String> {
    s.parse().map_err(|e: qsafe_core::Error| e.to_string())
}

pub fn hybrid(a: HybridArgs, ctx: &mut Ctx) -> CliResult {
    let mut rng = ctx.rng("hybrid");
    let reg = agility::default_registry(&mut rng)?;
    let msg = a.message.as_bytes();
    let h = agility::hybrid_sign(msg, &a.classical, &a.pq, a.mode, &reg, &mut rng)?;
    say!(ctx, "mode {}", h.mode);
    for (i, (id, sig)) in h.parts.iter().enumerate() {
        let shown = if sig.len() > 32 && !ctx.trace {
            format!("{}... ({} bytes)", hex::encode(&sig[..32]), sig.len())
        } else {
            hex::encode(sig)
        };
        say!(ctx, "part {} {id}: {shown}", i + 1);
    }
    let ok = agility::hybrid_verify(msg, &h, &reg);
    say!(ctx, "verify: {ok}");
    let mut tampered = h.clone();
    tampered.parts[0].1[0] ^= 1;
    say!(ctx, "verify with corrupted first part: {}", agility::hybrid_verify(msg, &tampered, &reg));
    if ok {
        Ok(())
    } else {
        Err(CliError::Domain("hybrid signature did not verify".into()))
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MoscaArgs {
    /// Years needed to migrate
    #[arg(long)]
    pub migrate: f64,
    /// Years the data must stay confidential
    #[arg(long)]
    pub confi: f64,
    /// Years until a cryptographically relevant quantum computer
    #[arg(long)]
    pub crqc: f64,
}

pub fn mosca(a: MoscaArgs, ctx: &mut Ctx) -> CliResult {
    let inp = MoscaInput::new(a.migrate, a.confi, a.crqc)?;
    let v = agility::mosca_evaluate(&inp);
    say!(ctx, "migrate {} + confi {} vs crqc {}: {v}", a.migrate, a.confi, a.crqc);
    Ok(())
}
