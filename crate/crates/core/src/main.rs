use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let outcome = morrey_holder::cli::run(&args);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout.as_bytes());
    if !outcome.stderr.is_empty() {
        eprint!("{}", outcome.stderr);
    }
    let _ = out.flush();
    std::process::exit(outcome.exit_code);
}
