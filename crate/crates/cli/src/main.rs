use clap::Parser;

fn main() {
    let cli = zsi::cli::Cli::parse();
    match zsi::cli::execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
