
use clap::Subcommand;
use qsafe_core::modnum;

use crate::{say, CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum NumCmd {
    /// Reproduce the worked number-theory examples
    Demo,
    /// gcd with a Bézout certificate
    Gcd { a: i128, b: i128 },
    /// Inverse of A modulo M
    Inverse { a: i128, m: i128 },
    /// A^X mod N by square-and-multiply
    Pow { a: i128, x: i128, n: i128 },
    /// Least non-negative residue of A modulo N
    Reduce {
        #[arg(allow_hyphen_values = true)]
        a: i128,
        n: i128,
    },
    /// Multiplicative order of A modulo N
    Period { a: i128, n: i128 },
    /// Smallest Y with A^Y = X (mod N)
    Dlog { a: i128, x: i128, n: i128 },
    /// Prime factorization by trial division
    Factor { n: i128 },
}

pub fn run(c: NumCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        NumCmd::Demo => demo(ctx),
        NumCmd::Gcd { a, b } => gcd(ctx, a, b),
        NumCmd::Inverse { a, m } => {
            say!(ctx, "{}", modnum::mod_inverse(a, m)?);
            Ok(())
        }
        NumCmd::Pow { a, x, n } => {
            say!(ctx, "{}", modnum::mod_pow(a, x, n)?);
            Ok(())
        }
        NumCmd::Reduce { a, n } => {
            say!(ctx, "{}", modnum::mod_reduce(a, n)?);
            Ok(())
        }
        NumCmd::Period { a, n } => {
            say!(ctx, "period({a}, {n}) = {}", modnum::period(a, n)?);
            Ok(())
        }
        NumCmd::Dlog { a, x, n } => {
            say!(ctx, "log_{a} {x} = {} (mod {n})", modnum::discrete_log(a, x, n)?);
            Ok(())
        }
        NumCmd::Factor { n } => {
            say!(ctx, "{n} = {}", modnum::factorize(n)?);
            Ok(())
        }
    }
}

fn gcd(ctx: &mut Ctx, a: i128, b: i128) -> CliResult {
    let c = modnum::bezout(a, b)?;
    say!(ctx, "gcd({a}, {b}) = {}", c.g);
    say!(ctx, "bezout: {a}*({}) + {b}*({}) = {}", c.x, c.y, c.g);
    Ok(())
}

fn demo(ctx: &mut Ctx) -> CliResult {
    gcd(ctx, 63, 17)?;
    let cert = modnum::bezout(63i128, 17)?;
    say!(ctx, "certificate accepts (-7, 26): {}", cert.accepts(-7, 26));
    say!(ctx, "157^-1 = {}", modnum::mod_inverse(157i128, 2668)?);
    let sum = modnum::mod_reduce(39i128 * 99 + 95 * 64, 19)?;
    let reduced_first = modnum::mod_reduce(
        modnum::mod_reduce(39i128, 19)?.into_value() * modnum::mod_reduce(99i128, 19)?.into_value()
            + modnum::mod_reduce(95i128, 19)?.into_value() * modnum::mod_reduce(64i128, 19)?.into_value(),
        19,
    )?;
    say!(ctx, "39*99 + 95*64 = {sum}, reducing first: {reduced_first}");
    say!(ctx, "127^4 = {}", modnum::mod_pow(127i128, 4, 5)?);
    say!(ctx, "129537 = {}", modnum::mod_reduce(129537i128, 9)?);
    say!(ctx, "period(2, 5) = {}", modnum::period(2i128, 5)?);
    say!(ctx, "log_2 5 = {} (mod 11)", modnum::discrete_log(2i128, 5, 11)?);
    Ok(())
}
