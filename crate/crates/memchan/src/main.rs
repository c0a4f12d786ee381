use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use memchan::cli::{self, RunConfig, Suite};
use memchan::error::Error;

/// Quantum capacities of correlated dephasing channels.
#[derive(Parser)]
#[command(name = "memchan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a model parameter and write a CSV of rates and capacities.
    Sweep {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a self-check suite; exits nonzero on any failure.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20240901)]
        seed: u64,
    },
    /// Report finite-use channel quantities for an environment.
    Channel {
        #[arg(long)]
        config: PathBuf,
        /// Number of channel uses (overrides the config).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Report forgetfulness distances and the decay fit.
    Forgetful {
        #[arg(long)]
        config: PathBuf,
        /// Live block length (overrides the config).
        #[arg(long)]
        l: Option<usize>,
        /// Number of sections (overrides the config).
        #[arg(long)]
        v: Option<usize>,
        /// Spacer lengths, comma separated (overrides the config).
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<usize>>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, Error> {
    match Cli::parse().command {
        Command::Sweep { config, out, seed } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = Some(seed);
            }
            let report = cli::run_sweep(&cfg)?;
            let csv = report.to_csv_string()?;
            std::fs::write(&out, csv)?;
            println!("wrote {} points to {}", report.points.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed } => {
            let results = cli::run_suite(suite, seed);
            let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut failures = 0;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                println!("{status}  {:width$}  {}", r.name, r.detail);
                if !r.passed {
                    failures += 1;
                }
            }
            println!("{} checks, {} failures", results.len(), failures);
            Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Channel { config, n } => {
            let cfg = RunConfig::load(&config)?;
            let uses = n
                .or_else(|| cfg.channel.as_ref().and_then(|c| c.uses))
                .ok_or_else(|| Error::Config("channel uses not given (flag --n or config)".into()))?;
            print!("{}", cli::channel_report(&cfg, uses)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Forgetful { config, l, v, s } => {
            let cfg = RunConfig::load(&config)?;
            let fp = cfg.forgetful.clone().unwrap_or_default();
            let live = l
                .or(fp.live)
                .ok_or_else(|| Error::Config("live block length not given (--l or config)".into()))?;
            let sections = v
                .or(fp.sections)
                .ok_or_else(|| Error::Config("section count not given (--v or config)".into()))?;
            let spacers = s
                .or(fp.spacers)
                .ok_or_else(|| Error::Config("spacer list not given (--s or config)".into()))?;
            print!("{}", cli::forgetful_report(&cfg, live, sections, &spacers)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
