use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dep_repeater::experiments::{parse_config, render_csv, run_experiment, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "dep-repeater",
    version,
    about = "DEP purification and repeater experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV table.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file of key=value lines.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset: fig3, threshold-scan, chain-scan, decay-scan, oracle-check.
    #[arg(long)]
    preset: Option<String>,
    /// Override one key, e.g. --set p1=0.95. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// CSV destination; stdout when neither this nor `out` is given.
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_ORACLE: u8 = 2;

fn load(args: &RunArgs) -> Result<ExperimentConfig, String> {
    let mut text = match (&args.config, &args.preset) {
        (Some(path), _) => {
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
        }
        (None, Some(preset)) => format!("preset={preset}"),
        (None, None) => unreachable!("clap requires one source"),
    };
    for o in &args.overrides {
        if !o.contains('=') {
            return Err(format!("--set expects KEY=VALUE, got `{o}`"));
        }
        text.push('\n');
        text.push_str(o);
    }
    let mut cfg = parse_config(&text).map_err(|e| e.to_string())?;
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

fn run(args: RunArgs) -> ExitCode {
    let cfg = match load(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let output = match run_experiment(&cfg) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    match &cfg.out {
        Some(path) => eprintln!(
            "wrote {} rows to {}",
            output.table.rows.len(),
            path.display()
        ),
        None => print!("{}", render_csv(&output.table)),
    }
    if output.failures > 0 {
        eprintln!(
            "oracle check failed: {} rows outside tolerance",
            output.failures
        );
        return ExitCode::from(EXIT_ORACLE);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run(args) => run(args),
    }
}
