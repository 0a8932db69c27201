use clap::Parser;

fn main() {
    let cli = nichols::cli::Cli::parse();
    std::process::exit(nichols::cli::run(&cli));
}
