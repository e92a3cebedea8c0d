use clap::Parser;

fn main() {
    let cli = decobec::cli::Cli::parse();
    std::process::exit(decobec::cli::execute(cli));
}
