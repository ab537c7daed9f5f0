use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gsc_cli::{emit, parse_instance, run_command, Command, Format, EXIT_USAGE};

/// Verifies geometric small cancellation for a rotation family over a group
/// acting on its Bass–Serre tree.
///
/// Exit codes: 0 pass, 1 verified failure, 2 inconclusive, 3 usage or
/// parse error.
#[derive(Parser)]
#[command(name = "gsc", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Instance file (TOML).
    instance: PathBuf,
    /// Cancellation constant, as p/q.
    #[arg(long)]
    lambda: Option<String>,
    /// Ball radius budget.
    #[arg(long)]
    radius: Option<usize>,
    /// Maximum interval precision in bits.
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; stdout without one.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let mut spec = match parse_instance(&cli.instance) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if let Err(e) = spec.apply_flags(cli.lambda.as_deref(), cli.radius, cli.precision) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    for w in &spec.warnings {
        eprintln!("warning: {w}");
    }
    let report = run_command(&spec, cli.command);
    if let Err(e) = emit(&report, cli.format, cli.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(report.exit_code() as u8)
}
