use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use horomori::app::{dispatch, AppError, Command, Options};
use horomori::io::load_problem;
use horomori::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Text,
}

/// Exact Mori-program combinatorics for horospherical varieties.
#[derive(Debug, Parser)]
#[command(name = "horomori", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Problem file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Divisor name, `-K`, or an inline list such as `H=(1,0):1;a:1/2`.
    #[arg(long)]
    divisor: Option<String>,
    /// Orbit name, `dense`, or inline generators such as `(1,0)(0,1)`.
    #[arg(long)]
    orbit: Option<String>,
    /// Extremal ray index as listed by `mori-cone`.
    #[arg(long)]
    ray: Option<usize>,
    #[arg(long, default_value_t = 8)]
    max_rank: usize,
    #[arg(long, default_value_t = horomori::mmp::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Disable the parallel code paths.
    #[arg(long)]
    sequential: bool,
}

fn run(cli: &Cli) -> Result<String, AppError> {
    let problem = cli.input.as_deref().map(load_problem).transpose()?;
    let opts = Options {
        divisor: cli.divisor.clone(),
        orbit: cli.orbit.clone(),
        ray: cli.ray,
        max_rank: cli.max_rank,
        cap: cli.cap,
        exec: if cli.sequential { Execution::Sequential } else { Execution::best() },
    };
    let report = dispatch(cli.command, problem.as_ref(), &opts)?;
    let out = match cli.emit {
        Emit::Json => report.to_json(),
        Emit::Text => report.to_text(),
    };
    if !report.all_hold() {
        emit(&out);
        return Err(AppError::Violation("a ledger check failed".into()));
    }
    Ok(out)
}

fn emit(out: &str) {
    let mut stdout = std::io::stdout().lock();
    let nl = if out.ends_with('\n') { "" } else { "\n" };
    let _ = write!(stdout, "{out}{nl}").and_then(|_| stdout.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
