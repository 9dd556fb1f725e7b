//! `lsc`: simulation, verification and search driver.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsc_harness::config::ExperimentConfig;
use lsc_harness::dump::{describe_code, Fixture};
use lsc_harness::records::{write_csv, SIMULATE_COLUMNS};
use lsc_harness::scenario::{run_scenario, SCENARIO_COLUMNS};
use lsc_harness::search::{replay, run_search_beyond};
use lsc_harness::simulate::run_simulate;
use lsc_harness::verify::{run_verify, run_verify_with, CorruptedDecoder};
use lsc_harness::{HarnessError, EXIT_CONFIG, EXIT_NOT_FOUND, EXIT_OK, EXIT_VIOLATION};

#[derive(Parser)]
#[command(name = "lsc", version, about = "Layered subspace codes over the operator channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Base seed, overriding `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, overriding `run.workers`.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo decoding over the channel grid; CSV records plus a summary.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Trials per grid point, overriding `run.trials`.
        #[arg(long)]
        trials: Option<u64>,
        /// CSV destination; records go to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs every invariant suite and prints one line per suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Random checks per suite, overriding `verify.trials`.
        #[arg(long)]
        trials: Option<u64>,
        /// Replace the component decoder with one that reports wrong codewords.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Searches for decoding instances outside the guaranteed region.
    SearchBeyond {
        #[command(flatten)]
        common: Common,
        /// Trial budget per target, overriding `search.budget`.
        #[arg(long)]
        trials: Option<u64>,
        /// Directory receiving one fixture file per hit.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Re-decodes a fixture written by `search-beyond`.
    Replay {
        #[command(flatten)]
        common: Common,
        /// Fixture file.
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Runs the configured network scenario.
    Scenario {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the configured code.
    DumpCode {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common, trials: Option<u64>) -> Result<ExperimentConfig, HarnessError> {
    Ok(ExperimentConfig::from_path(&common.config)?.with_overrides(common.seed, trials, common.workers))
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes CSV to `out` (or stdout) and returns the stream for the summary.
fn emit_csv<R: serde::Serialize>(
    out: Option<&Path>,
    columns: &[&str],
    records: &[R],
) -> Result<Box<dyn Write>, HarnessError> {
    match out {
        Some(path) => {
            let mut f = create(path)?;
            write_csv(&mut f, columns, records)?;
            f.flush()?;
            Ok(Box::new(io::stdout()))
        }
        None => {
            write_csv(io::stdout().lock(), columns, records)?;
            Ok(Box::new(io::stderr()))
        }
    }
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    match cli.command {
        Command::Simulate { common, trials, out } => {
            let config = load(&common, trials)?;
            let output = run_simulate(&config)?;
            let mut summary = emit_csv(out.as_deref(), SIMULATE_COLUMNS, &output.records)?;
            write!(summary, "{}", output.summary.render())?;
            Ok(if output.summary.violations() > 0 { EXIT_VIOLATION } else { EXIT_OK })
        }
        Command::Scenario { common, trials, out } => {
            let config = load(&common, trials)?;
            let output = run_scenario(&config)?;
            let mut summary = emit_csv(out.as_deref(), SCENARIO_COLUMNS, &output.records)?;
            write!(summary, "{}", output.summary.render())?;
            Ok(if output.summary.violations() > 0 { EXIT_VIOLATION } else { EXIT_OK })
        }
        Command::Verify {
            common,
            trials,
            inject_fault,
        } => {
            let mut config = load(&common, None)?;
            if let Some(t) = trials {
                config.verify.trials = t;
            }
            let report = if inject_fault {
                run_verify_with(&config, &CorruptedDecoder, None)?
            } else {
                run_verify(&config)?
            };
            print!("{}", report.render());
            Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::SearchBeyond { common, trials, dump } => {
            let mut config = load(&common, None)?;
            if let Some(t) = trials {
                config.search.budget = t;
            }
            if let Some(dir) = &dump {
                std::fs::create_dir_all(dir)?;
            }
            let outcomes = run_search_beyond(&config, &mut |target, done| {
                eprintln!("search {}: {done} trials", target.label());
            })?;
            let mut missing = false;
            for o in &outcomes {
                let (rho, t) = o.channel;
                match &o.hit {
                    Some(hit) => {
                        println!(
                            "target {}: found at trial {} (seed {}, rho={rho}, t={t}) after {} trials",
                            o.target.label(),
                            hit.trial,
                            hit.seed,
                            o.trials_run
                        );
                        for (k, v) in hit.fixture.entries.iter().skip(4) {
                            println!("  {k} = {v}");
                        }
                        if let Some(dir) = &dump {
                            let path = dir.join(format!("target_{}.fixture", o.target.label()));
                            std::fs::write(&path, hit.fixture.render())?;
                            println!("  fixture = {}", path.display());
                        }
                    }
                    None => {
                        missing = true;
                        println!(
                            "target {}: not found in {} trials (rho={rho}, t={t})",
                            o.target.label(),
                            o.trials_run
                        );
                    }
                }
            }
            Ok(if missing { EXIT_NOT_FOUND } else { EXIT_OK })
        }
        Command::Replay { common, fixture } => {
            let config = load(&common, None)?;
            let fx = Fixture::parse(&std::fs::read_to_string(&fixture)?)?;
            let (alg1, alg2) = replay(&config.code(), &fx, config.sic)?;
            let flags = |v: &[bool]| v.iter().map(|&b| if b { "ok" } else { "fail" }).collect::<Vec<_>>().join(";");
            println!("alg1 = {}", flags(&alg1));
            println!("alg2 = {}", flags(&alg2));
            Ok(EXIT_OK)
        }
        Command::DumpCode { common } => {
            let config = load(&common, None)?;
            print!("{}", describe_code(&config.code()));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
