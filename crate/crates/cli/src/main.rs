use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = farey_lab::run_cli(std::env::args_os(), &mut out, &mut io::stderr());
    if out.flush().is_err() && code == farey_lab::EXIT_OK {
        std::process::exit(farey_lab::EXIT_FAILED);
    }
    drop(out);
    std::process::exit(code);
}
