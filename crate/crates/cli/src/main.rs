use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use svfdt_cli::relative::{render_relative, write_relative};
use svfdt_cli::{
    export_curves, read_runs, relative_to, run_experiment, CliResult, ExperimentConfig,
};
use svfdt_core::Algorithm;

#[derive(Parser)]
#[command(
    name = "svfdt",
    version,
    about = "Compare VFDT with the strict SVFDT variants on data streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured (stream, τ, algorithm, seed, repetition).
    Run {
        /// TOML experiment file.
        config: PathBuf,
        /// Overrides `output_dir`.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Replaces the configured seeds; repeatable.
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        /// Only run the named streams; repeatable.
        #[arg(long = "stream")]
        streams: Vec<String>,
        /// Only run these algorithms (vfdt, svfdt-i, svfdt-ii); repeatable.
        #[arg(long = "algorithm")]
        algorithms: Vec<Algorithm>,
        /// Parallel runs; defaults to the number of CPUs.
        #[arg(long, env = svfdt_cli::WORKERS_ENV)]
        workers: Option<usize>,
    },
    /// Per-τ mean ratios of each algorithm's metrics over a baseline's.
    Relative {
        /// `runs.jsonl` or the directory holding it.
        results: PathBuf,
        #[arg(long, default_value = "vfdt")]
        baseline: Algorithm,
        /// Also write the table here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write one accuracy/size curve CSV per run.
    Curves {
        /// `runs.jsonl` or the directory holding it.
        results: PathBuf,
        /// Defaults to `curves/` next to the results.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Run {
            config,
            output,
            seeds,
            streams,
            algorithms,
            workers,
        } => {
            let mut experiment = ExperimentConfig::load(&config)?;
            if let Some(dir) = output {
                experiment.output_dir = dir;
            }
            if !seeds.is_empty() {
                experiment.seeds = seeds;
            }
            experiment.filter(
                (!streams.is_empty()).then_some(&streams[..]),
                (!algorithms.is_empty()).then_some(&algorithms[..]),
            )?;
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let out = run_experiment(&experiment, workers)?;
            println!(
                "{} runs -> {}, {}",
                out.records.len(),
                out.runs_path.display(),
                out.aggregate_path.display()
            );
        }
        Command::Relative {
            results,
            baseline,
            output,
        } => {
            let rows = relative_to(&read_runs(&results)?, baseline)?;
            print!("{}", render_relative(&rows));
            if let Some(path) = output {
                write_relative(&path, &rows)?;
            }
        }
        Command::Curves { results, output } => {
            let records = read_runs(&results)?;
            let dir = output.unwrap_or_else(|| {
                let base = if results.is_dir() {
                    results.clone()
                } else {
                    results.parent().map(PathBuf::from).unwrap_or_default()
                };
                base.join("curves")
            });
            let paths = export_curves(&records, &dir)?;
            println!("{} curves -> {}", paths.len(), dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
