use std::io::Write;

fn main() {
    let inv = sumkit_cli::invoke(std::env::args_os());
    std::io::stdout().write_all(inv.stdout.as_bytes()).ok();
    std::io::stderr().write_all(inv.stderr.as_bytes()).ok();
    std::process::exit(inv.exit_code);
}
