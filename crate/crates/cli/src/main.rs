use clap::Parser;
use polyosc_cli::{cmd_epps, cmd_reproduce, cmd_ritz, Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Epps(args) => cmd_epps(args),
        Command::Ritz(args) => cmd_ritz(args),
        Command::ReproducePaper(args) => cmd_reproduce(args),
    };
    match result {
        Ok(rendered) => {
            println!("{}", rendered.text);
            std::process::exit(rendered.exit_code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
