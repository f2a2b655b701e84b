use std::io::{self, BufWriter};

use twinsub::cli::PRECISION_ENV;

fn main() {
    let env = std::env::var(PRECISION_ENV).ok();
    let mut out = BufWriter::new(io::stdout());
    let code = twinsub::run(std::env::args_os(), env.as_deref(), &mut out);
    drop(out);
    std::process::exit(code);
}
