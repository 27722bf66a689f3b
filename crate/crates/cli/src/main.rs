use clap::Parser;
use revcgd_cli::{execute, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let stdout = std::io::stdout();
    let code = execute(&cli, &mut stdout.lock(), &mut std::io::stderr());
    std::process::exit(code);
}
