use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = dfl::cli::run(std::env::args_os(), &mut out, &mut stderr.lock());
    if out.flush().is_err() {
        std::process::exit(1);
    }
    std::process::exit(code);
}
