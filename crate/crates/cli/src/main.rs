use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod job;
mod run;

use job::JobSpec;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("spec error: {0}")]
    Spec(String),
    #[error("computation error: {0}")]
    Compute(String),
    #[error("cannot write output: {0}")]
    Io(String),
}

impl From<ratdense::Error> for CliError {
    fn from(e: ratdense::Error) -> Self {
        use ratdense::Error::*;
        match e {
            MonoidTooLarge(_) | BoundExceeded(_) | NoConvergence(_) => CliError::Compute(e.to_string()),
            _ => CliError::Spec(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Spec(_) | CliError::Io(_) => 1,
            CliError::Compute(_) => 2,
        }
    }
}

/// Densities of rational languages: runs one job spec and writes a CSV
/// series and a summary.
#[derive(Debug, Parser)]
#[command(name = "ratdense", version)]
struct Args {
    /// Job spec file.
    spec: PathBuf,
    /// Output directory (overrides the spec's `output`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of terms (overrides the spec's `n`).
    #[arg(long = "max-n")]
    max_n: Option<usize>,
    /// Convergence tolerance (overrides the spec's `tolerance`).
    #[arg(long)]
    tol: Option<f64>,
    /// Do not print the summary.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ratdense: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let mut job = JobSpec::load(&args.spec)?;
    if let Some(n) = args.max_n {
        job.n = n;
    }
    if let Some(tol) = args.tol {
        job.tolerance = tol;
    }
    if let Some(out) = &args.out {
        job.output = out.clone();
    }
    job.validate()?;
    let report = run::run(&job)?;
    let written = report.write(&job.output)?;
    if !args.quiet {
        // a closed pipe downstream is not an error of the job
        let mut stdout = std::io::stdout().lock();
        let _ = write!(stdout, "{}", report.summary);
        for path in written {
            let _ = writeln!(stdout, "wrote {}", path.display());
        }
    }
    Ok(())
}
