use clap::Parser;

fn main() {
    std::process::exit(owc_cli::run(owc_cli::Cli::parse()));
}
