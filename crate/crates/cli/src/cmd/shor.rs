
use clap::Subcommand;
use qsafe_core::shor;

use crate::{say, CliError, CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum ShorCmd {
    /// Distribution for (7, 15) and a factorization of 15
    Demo,
    /// Find a proper divisor of N
    Factor {
        n: u64,
        #[arg(long, default_value_t = shor::DEFAULT_MAX_ROUNDS)]
        max_rounds: usize,
    },
    /// Measurement distribution of the period-finding register for base A mod N
    Distribution {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        n: u64,
        /// Omit outcomes with probability below this
        #[arg(long, default_value_t = 1e-3)]
        min_prob: f64,
    },
}

pub fn run(c: ShorCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        ShorCmd::Demo => {
            distribution(ctx, 7, 15, 1e-9)?;
            factor(ctx, 15, shor::DEFAULT_MAX_ROUNDS)
        }
        ShorCmd::Factor { n, max_rounds } => factor(ctx, n, max_rounds),
        ShorCmd::Distribution { a, n, min_prob } => distribution(ctx, a, n, min_prob),
    }
}

fn distribution(ctx: &mut Ctx, a: u64, n: u64, min_prob: f64) -> CliResult {
    let d = shor::simulate_quantum_part(a, n)?;
    say!(ctx, "a = {a}, n = {n}, register N = {}, total mass {:.12}", d.register(), d.total());
    for y in d.support(min_prob) {
        let cf = shor::continued_fraction(y, d.register())?;
        say!(ctx, "y = {y:>8}  p = {:.6}  cf {cf}", d.probs()[y as usize]);
    }
    Ok(())
}

fn factor(ctx: &mut Ctx, n: u64, rounds: usize) -> CliResult {
    let mut rng = ctx.rng("shor");
    match shor::shor_factor(n, &mut rng, rounds) {
        Ok((d, trace)) => {
            if ctx.trace {
                for a in &trace.attempts {
                    say!(ctx, "  {a}");
                }
            }
            say!(ctx, "{n} = {d} * {} after {} round(s)", n / d, trace.attempts.len().max(1));
            Ok(())
        }
        Err(f) => {
            if ctx.trace {
                for a in &f.trace.attempts {
                    say!(ctx, "  {a}");
                }
            }
            Err(CliError::Domain(f.error.to_string()))
        }
    }
}
