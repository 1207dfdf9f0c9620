use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qikm_bench::{emit_report, run_experiment, BenchError, ExperimentConfig, Format, MethodName};
use qikm_core::{checksum, load, DatasetId, DatasetSpec};

#[derive(Parser)]
#[command(name = "qikm", version, about = "Quantum-inspired k-means benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write report.md, runs.csv and runs.jsonl.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        dataset: Option<String>,
        /// Keep only this method (classical, angle, amplitude, hybrid).
        #[arg(long)]
        method: Option<String>,
        /// Replace the seed list with this single seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        /// What to print on stdout; all three files are always written.
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show the known datasets and their expected shapes.
    ListDatasets {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
    },
    /// Load every dataset, check its shape and print its checksum.
    Verify {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qikm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, BenchError> {
    match cli.command {
        Command::Run { config, dataset, method, seed, restarts, jobs, format, out } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(d) = dataset {
                let id: DatasetId = d.parse().map_err(|e: qikm_core::DataError| BenchError::Config(e.to_string()))?;
                cfg.set_dataset(id);
            }
            if let Some(m) = method {
                cfg.restrict_method(m.parse::<MethodName>()?);
            }
            if let Some(s) = seed {
                cfg.seeds = vec![s];
            }
            if let Some(r) = restarts {
                cfg.restarts_per_seed = r;
            }
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            cfg.validate()?;
            let report = run_experiment(&cfg)?;
            emit_report(&report, &cfg.output_dir)?;
            print!("{}", format.render(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ListDatasets { data_dir } => {
            println!("{:<16} {:>5} {:>3} {:>3}  file", "id", "n", "m", "k");
            for id in DatasetId::ALL {
                let (n, m, k) = id.shape();
                let spec = DatasetSpec::new(id, &data_dir);
                let present = if spec.source_path.exists() { "" } else { "  (missing)" };
                println!("{:<16} {n:>5} {m:>3} {k:>3}  {}{present}", id.as_str(), spec.source_path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { data_dir } => {
            let mut failed = false;
            for id in DatasetId::ALL {
                let spec = DatasetSpec::new(id, &data_dir);
                match load(&spec).and_then(|_| checksum(&spec)) {
                    Ok(digest) => println!("ok    {:<16} {digest}", id.as_str()),
                    Err(e) => {
                        failed = true;
                        println!("FAIL  {:<16} {e}", id.as_str());
                    }
                }
            }
            Ok(if failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
    }
}
