use clap::Parser;

fn main() {
    let cli = anycam::cli::Cli::parse();
    if let Err(e) = anycam::cli::run(cli) {
        eprintln!("anycam: {e}");
        std::process::exit(e.exit_code());
    }
}
