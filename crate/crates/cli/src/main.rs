use clap::Parser;

fn main() {
    let cli = e2pt_cli::Cli::parse();
    if let Err(e) = e2pt_cli::run(cli) {
        eprintln!("e2pt: {e}");
        std::process::exit(e.exit_code());
    }
}
