use std::io::Write;

use vdm_core::cli::run_args;

fn main() {
    let outcome = run_args(std::env::args_os(), &mut std::io::stdin().lock());
    std::io::stdout().write_all(outcome.stdout.as_bytes()).ok();
    std::io::stderr().write_all(outcome.stderr.as_bytes()).ok();
    std::process::exit(outcome.code);
}
