use clap::Parser;
use gse_cli::commands::{run, CliError, EXIT_CONFIG};
use gse_cli::config::{Cli, RunConfig};

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let code = RunConfig::resolve(&cli.command, cli.config.as_deref())
        .map_err(CliError::from)
        .and_then(|cfg| run(&cfg))
        .unwrap_or_else(|e| {
            eprintln!("gse: {e}");
            e.exit_code()
        });
    if code == EXIT_CONFIG {
        eprintln!("gse: configuration rejected, nothing written");
    }
    std::process::exit(code);
}
