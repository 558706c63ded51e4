use clap::Parser;

fn main() {
    let cli = phasim::cli::Cli::parse();
    if let Err(error) = phasim::cli::run(cli) {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}
