use std::io::Write;

fn main() {
    let out = runnerlab::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code as i32);
}
