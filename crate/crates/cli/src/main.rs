use clap::Parser;

fn main() {
    let cli = qlspace_cli::Cli::parse();
    std::process::exit(qlspace_cli::run(cli));
}
