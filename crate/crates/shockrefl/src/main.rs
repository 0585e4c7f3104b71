use clap::Parser;
use shockrefl::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    env_logger::Builder::new().parse_filters(&cli.log_level).init();
    std::process::exit(run(cli));
}
