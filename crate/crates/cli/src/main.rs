use std::io::Write;

fn main() {
    let (code, out) = projflip::run_command(std::env::args_os());
    let _ = std::io::stdout().write_all(out.as_bytes());
    std::process::exit(code);
}
