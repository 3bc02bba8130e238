use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use whichpath_cli::{run_command, sweep_command, validate, CliError, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "whichpath", version, about = "Two-path interference with an internal which-path recorder")]
struct Cli {
    /// Directory that relative output paths are written under.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and write the pattern CSV and summary JSON.
    Run { config: PathBuf },
    /// Run a parameter sweep and write one CSV row per value.
    Sweep { config: PathBuf },
    /// Check every invariant of the simulator and report residuals.
    Validate {
        /// Print the invariant names without running them.
        #[arg(long)]
        list: bool,
        /// Negative control: force the named invariant (or `all`) to fail.
        #[arg(long, hide = true, value_name = "NAME")]
        corrupt_tolerance: Option<String>,
    },
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG as u8) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.output_dir.as_deref();
    let result = match cli.command {
        Command::Run { config } => run_command(&config, out).map(|(pattern, summary)| {
            eprintln!("wrote {} and {}", pattern.display(), summary.display());
        }),
        Command::Sweep { config } => sweep_command(&config, out).map(|path| {
            eprintln!("wrote {}", path.display());
        }),
        Command::Validate { list: true, .. } => {
            for name in validate::names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::Validate { list: false, corrupt_tolerance } => {
            let outcomes = validate::run_suite(corrupt_tolerance.as_deref(), |o| println!("{}", o.report_line()));
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            println!("{} passed, {failed} failed", outcomes.len() - failed);
            if failed == 0 { Ok(()) } else { Err(CliError::Validation(failed)) }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
