use crate::{CliResult, Command, Ctx};

pub mod agility;
pub mod classic;
pub mod dilithium;
pub mod kyber;
pub mod lattice;
pub mod net;
pub mod numtheory;
pub mod shor;

pub fn dispatch(cmd: Command, ctx: &mut Ctx) -> CliResult {
    match cmd {
        Command::Numtheory(c) => numtheory::run(c, ctx),
        Command::Rsa(c) => classic::run_rsa(c, ctx),
        Command::Ecc(c) => classic::run_ecc(c, ctx),
        Command::Shor(c) => shor::run(c, ctx),
        Command::Lattice(c) => lattice::run(c, ctx),
        Command::Kyber(c) => kyber::run(c, ctx),
        Command::Dilithium(c) => dilithium::run(c, ctx),
        Command::Hybrid(a) => agility::hybrid(a, ctx),
        Command::Mosca(a) => agility::mosca(a, ctx),
        Command::Serve(a) => net::serve(a, ctx),
        Command::Connect(a) => net::connect(a, ctx),
    }
}

/// `writeln!` into the context's output, converting I/O errors.
#[macro_export]
macro_rules! say {
    ($ctx:expr, $($arg:tt)*) => {
        writeln!($ctx.out, $($arg)*).map_err($crate::CliError::from)?
    };
}

pub(crate) fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| crate::CliError::Domain(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| crate::CliError::Domain(format!("{}: {e}", path.display())))
}
