//! Batch driver: runs one job file and writes its data plus a JSON report.

mod commands;
mod config;
mod error;
mod job;
mod output;
mod schema;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::config::Config;
use crate::error::CliError;
use crate::job::JobSpec;
use crate::output::{sidecar_path, write_file, Format, Outcome, Report};

#[derive(Debug, Parser)]
#[command(name = "dirac", version, about = "Exact graded-commutative algebra jobs")]
struct Args {
    /// Job file (JSON) naming a command, its parameters and inputs.
    #[arg(long)]
    job: PathBuf,
    /// Output data file; overrides the job's `output_path`. Stdout if neither.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML config file; defaults to $DIRAC_CONFIG when set.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn format_for(args: &Args, config: &Config, out: Option<&Path>) -> Format {
    args.format.or(config.format).unwrap_or_else(|| {
        match out.and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("txt") => Format::Text,
            _ => Format::Json,
        }
    })
}

fn thread_count(args: &Args, config: &Config) -> Result<usize, CliError> {
    match args.threads.or(config.threads) {
        Some(0) => Err(CliError::Parse("thread count must be positive".into())),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn execute(job: &JobSpec, config: &Config, threads: usize) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Engine(dirac_core::Error::Resource(format!("cannot start worker threads: {e}"))))?;
    pool.install(|| commands::run(job, config))
}

fn write_data(out: Option<&Path>, data: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, data),
        None => std::io::stdout()
            .write_all(data.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match Config::load(args.config.as_deref()) {
        Ok(c) => c,
        Err(e) => return fail_early(&e),
    };
    let job = match JobSpec::load(&args.job) {
        Ok(j) => j,
        Err(e) => return fail_early(&e),
    };
    let threads = match thread_count(&args, &config) {
        Ok(t) => t,
        Err(e) => return fail_early(&e),
    };
    let out = args.out.clone().or_else(|| job.output_path.as_ref().map(|p| job.resolve(p)));
    let format = format_for(&args, &config, out.as_deref());

    let start = Instant::now();
    let result = execute(&job, &config, threads);
    let wall = start.elapsed().as_secs_f64();

    let result = result.and_then(|o| write_data(out.as_deref(), &o.render(format)).map(|()| o));
    let mut code = match &result {
        Ok(outcome) => outcome.status.exit_code(),
        Err(e) => {
            eprintln!("dirac: {e}");
            e.exit_code()
        }
    };
    if let Some(path) = &out {
        let report = Report::new(job.command, threads, &result, wall);
        let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
        if let Err(e) = write_file(&sidecar_path(path), &text) {
            eprintln!("dirac: {e}");
            if code == 0 || code == 1 {
                code = e.exit_code();
            }
        }
    }
    if let Ok(outcome) = &result {
        if outcome.status == output::Status::Fail {
            if let Some(w) = &outcome.witness {
                eprintln!("dirac: check failed: {w}");
            }
        }
    }
    ExitCode::from(code)
}

fn fail_early(e: &CliError) -> ExitCode {
    eprintln!("dirac: {e}");
    e.exit()
}
