use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "radgas", version, about = "Viscous radiative reactive gas simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output files, overriding `output_dir` in the config.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write diagnostics, snapshots and a report.
    Run { config: PathBuf },
    /// Run a grid of (b, beta) values.
    Sweep { config: PathBuf },
    /// Run the property suite and write verify_report.txt.
    Verify { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.output_dir.as_deref();
    let result = match &cli.command {
        Command::Run { config } => radgas_cli::run_command(config, out),
        Command::Sweep { config } => radgas_cli::sweep_command(config, out),
        Command::Verify { config } => radgas_cli::verify_command(config, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radgas: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
