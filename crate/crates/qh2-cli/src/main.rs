use std::io::Write;

fn main() {
    let mut out = std::io::stdout().lock();
    let code = qh2_cli::run_cli(std::env::args(), &mut out);
    let _ = out.flush();
    std::process::exit(code);
}
