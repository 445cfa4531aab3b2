use std::io::{stderr, stdout, BufWriter};

fn main() {
    let code = frolov::cli::run_from_args(std::env::args_os(), &mut BufWriter::new(stdout()), &mut stderr());
    std::process::exit(code);
}
