use clap::Parser;
use deformcalc_cli::{execute, Cli, RunConfig};

fn main() {
    let cli = Cli::parse();
    let code = match RunConfig::from_cli(cli) {
        Ok(config) => execute(&config),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
