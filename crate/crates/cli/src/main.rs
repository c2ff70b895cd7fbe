use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skewlab_cli::checks::{self, render_table, Fault, Scale};
use skewlab_cli::config::{parse_overrides, ExperimentConfig, KEYS};
use skewlab_cli::{exit, run, CliError, EXPERIMENTS};

#[derive(Parser, Debug)]
#[command(name = "skewlab", version, about = "Möbius correlations of analytic skew products on the 2-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment and write summary.json, curves.csv, manifest.json.
    Run {
        /// Experiment name (see `skewlab list`).
        experiment: String,
        /// `--key value` overrides, `--config FILE`, `--manifest FILE`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        /// Largest n the suite may sieve; smaller values shrink or skip checks.
        #[arg(long, default_value_t = Scale::FULL_LIMIT)]
        limit: u64,
        /// Worker threads, 0 for all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Corrupt an internal table to confirm the suite notices.
        #[arg(long, value_name = "FAULT")]
        inject_fault: Option<Fault>,
    },
    /// List experiments and config keys with their defaults.
    List,
}

fn run_command(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Run { experiment, args } => {
            let mut pairs = vec![("experiment".to_string(), experiment)];
            pairs.extend(parse_overrides(&args)?);
            let cfg = ExperimentConfig::from_pairs(&pairs)?;
            let out = run(&cfg)?;
            println!("{}", out.dir.display());
            if out.failed.is_empty() {
                Ok(exit::OK)
            } else {
                Err(CliError::Invariant(out.failed))
            }
        }
        Command::Verify { limit, threads, inject_fault } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
            let results = pool.install(|| checks::suite(Scale { limit }, inject_fault.unwrap_or_default()));
            print!("{}", render_table(&results));
            let failed: Vec<String> = results.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            if failed.is_empty() {
                Ok(exit::OK)
            } else {
                Err(CliError::Invariant(failed))
            }
        }
        Command::List => {
            println!("experiments:");
            for e in EXPERIMENTS {
                println!("  {e}");
            }
            println!("keys:");
            for (k, d, help) in KEYS {
                println!("  --{k:<18} {d:<28} {help}");
            }
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run_command(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("skewlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
