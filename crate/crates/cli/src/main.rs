mod cli;
mod commands;
mod config;
mod output;
mod report;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command, DualCommand, GroupCommand, MeasureCommand};
use output::{exit, exit_code};

/// Caps rayon workers.
const THREADS_VAR: &str = "HAAR_WALK_THREADS";

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> haar_walk::Result<u8> {
    let g = &cli.global;
    match cli.command {
        Command::Group { command: GroupCommand::Info { spec } } => commands::group_info(&spec),
        Command::Dual { command: DualCommand::Validate { group, dual } } => commands::dual_validate(&group, dual.as_deref()),
        Command::Measure { command: MeasureCommand::Check { spec, group, measure } } => {
            commands::measure_check(spec.as_deref(), group.as_deref(), measure.as_deref())
        }
        Command::Analyze(args) => commands::analyze_cmd(&args, g),
        Command::Simulate { config, out } => commands::simulate_cmd(&config, out.as_deref(), g),
        Command::Verify { law, config, out } => commands::verify_cmd(law, &config, out.as_deref(), g),
        Command::Report { inputs, out } => report::report_cmd(&inputs, out.as_deref(), &g.out_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::MALFORMED } else { exit::PASS });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(exit::MALFORMED);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
