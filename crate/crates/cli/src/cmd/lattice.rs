
use clap::Subcommand;
use qsafe_core::lattice::{self, Basis, DEFAULT_MAX_GOOD_DEFECT};
use qsafe_core::scalar::{fmt_scalar, Rational, Scalar};
use qsafe_core::RationalBasis;
use rand::Rng;

use crate::{say, CliError, CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Defect, SVP, CVP and Babai rounding on a small basis, then GGH and LWE
    Demo,
    /// Orthogonality defect and determinant
    Defect {
        /// Basis vectors, e.g. "2,1;-1,3"
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
    },
    /// Shortest nonzero vector by exhaustive search
    Svp {
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// Closest lattice vector to TARGET by exhaustive search
    Cvp {
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// Random GGH key pair and one round trip
    Ggh {
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Random LWE instance and Gaussian elimination on it
    Lwe {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 97)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        bound: u64,
    },
}

fn parse_ints(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("`{t}` is not an integer"))))
        .collect()
}

fn parse_basis(s: &str) -> CliResult<RationalBasis> {
    let vs = s.split(';').map(parse_ints).collect::<CliResult<Vec<_>>>()?;
    Ok(Basis::from_ints(&vs)?)
}

fn show<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_scalar).collect();
    format!("({})", parts.join(", "))
}

pub fn run(c: LatticeCmd, ctx: &mut Ctx) -> CliResult {
    match c {
        LatticeCmd::Demo => demo(ctx),
        LatticeCmd::Defect { basis } => {
            let b = parse_basis(&basis)?;
            say!(ctx, "det = {}, defect = {:.6}", fmt_scalar(&b.det()), b.defect());
            Ok(())
        }
        LatticeCmd::Svp { basis, bound } => {
            let p = lattice::svp_bruteforce(&parse_basis(&basis)?, bound)?;
            say!(ctx, "shortest {} = {:?} . B, norm^2 = {}", show(&p.vector), p.coeffs, fmt_scalar(&p.norm_sq));
            Ok(())
        }
        LatticeCmd::Cvp { basis, target, bound } => cvp(ctx, &parse_basis(&basis)?, &parse_ints(&target)?, bound),
        LatticeCmd::Ggh { dim } => ggh(ctx, dim),
        LatticeCmd::Lwe { n, q, bound } => lwe(ctx, n, q, bound),
    }
}

fn cvp(ctx: &mut Ctx, b: &RationalBasis, target: &[i64], bound: i64) -> CliResult {
    let t: Vec<Rational> = target.iter().map(|&x| Rational::from_int(x)).collect();
    let p = lattice::cvp_bruteforce(b, &t, bound)?;
    say!(ctx, "closest to {} is {} = {:?} . B, dist^2 = {}", show(&t), show(&p.vector), p.coeffs, fmt_scalar(&p.norm_sq));
    let r = lattice::babai_round(b, &t)?;
    say!(ctx, "babai rounding gives {}, dist^2 = {}", show(&r.vector), fmt_scalar(&r.norm_sq));
    Ok(())
}

fn demo(ctx: &mut Ctx) -> CliResult {
    let good = parse_basis("2,0;1,2")?;
    let bad = parse_basis("2,0;15,2")?;
    for (name, b) in [("B", &good), ("C", &bad)] {
        let vs: Vec<String> = b.vectors().iter().map(|v| show(v)).collect();
        say!(ctx, "{name} = {{{}}}: det {}, defect {:.6}", vs.join(", "), fmt_scalar(&b.det()), b.defect());
    }
    say!(ctx, "same lattice: {}", good.same_lattice(&bad)?);
    let p = lattice::svp_bruteforce(&good, 8)?;
    say!(ctx, "svp: {}, norm^2 {}", show(&p.vector), fmt_scalar(&p.norm_sq));
    cvp(ctx, &good, &[3, 5], 8)?;
    let t: Vec<Rational> = [3, 5].iter().map(|&x| Rational::from_int(x)).collect();
    let r = lattice::babai_round(&bad, &t)?;
    say!(ctx, "babai with the bad basis gives {}, dist^2 = {}", show(&r.vector), fmt_scalar(&r.norm_sq));
    ggh(ctx, 2)?;
    lwe(ctx, 4, 97, 1)
}

fn ggh(ctx: &mut Ctx, dim: usize) -> CliResult {
    if !(1..=lattice::MAX_ENUM_DIM).contains(&dim) {
        return Err(CliError::Usage(format!("dimension must be 1..={}", lattice::MAX_ENUM_DIM)));
    }
    let mut rng = ctx.rng("ggh");
    let keys = loop {
        let vs: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { rng.gen_range(6..=9) } else { rng.gen_range(-1..=1) }).collect())
            .collect();
        if Basis::<Rational>::from_ints(&vs).map_or(true, |b| b.defect() >= DEFAULT_MAX_GOOD_DEFECT) {
            continue;
        }
        if let Ok(k) = lattice::ggh_keygen(&vs, lattice::random_unimodular(dim, &mut rng, 8)) {
            break k;
        }
    };
    let m: Vec<i64> = (0..dim).map(|_| rng.gen_range(-50..=50)).collect();
    let e: Vec<i64> = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
    let c = lattice::ggh_encrypt(&m, &keys.public, &e)?;
    let back = lattice::ggh_decrypt(&c, &keys)?;
    say!(ctx, "ggh private rows {:?}", keys.private);
    say!(ctx, "ggh public rows  {:?}", keys.public);
    say!(ctx, "m = {m:?}, e = {e:?}, c = {c:?}, decrypted = {back:?} ({})", if back == m { "ok" } else { "FAILED" });
    Ok(())
}

fn lwe(ctx: &mut Ctx, n: usize, q: u64, bound: u64) -> CliResult {
    let mut rng = ctx.rng("lwe");
    let inst = lattice::lwe_generate(n, q, bound, &mut rng)?;
    say!(ctx, "lwe n = {n}, q = {q}: s = {:?}, e = {:?}, t = {:?}", inst.s, inst.e, inst.t);
    say!(ctx, "embedding witness holds: {}", lattice::lwe_embed(&inst).witness_holds());
    match lattice::gauss_solve(&inst.a, &inst.t, q) {
        Ok(s) => say!(ctx, "elimination gives {s:?} ({})", if s == inst.s { "matches s" } else { "wrong: the error spreads" }),
        Err(e) => say!(ctx, "elimination failed: {e}"),
    }
    Ok(())
}
