use clap::Parser;

fn main() {
    let cli = wubi_core::cli::Cli::parse();
    std::process::exit(wubi_core::cli::run(cli));
}
