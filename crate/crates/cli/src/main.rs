use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = io::BufWriter::new(io::stdout().lock());
    let code = terwilliger_cli::execute(std::env::args_os(), &mut stdout, &mut io::stderr());
    let _ = stdout.flush();
    ExitCode::from(code)
}
