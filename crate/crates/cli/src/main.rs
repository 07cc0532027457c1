use clap::Parser;

fn main() {
    let cli = usd_cli::Cli::parse();
    std::process::exit(usd_cli::run(cli));
}
