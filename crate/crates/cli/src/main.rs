//! Command-line analyzer for pointwise maximal leakage of finite mechanisms.
//!
//! Exit codes: 0 on success, 1 when a verification check finds a violation,
//! 2 on input or validation errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod analyze;
mod config;
mod construct;
mod files;
mod fmt;
mod laplace;
mod threshold;
mod verify;

use config::{AnalysisConfig, OutputFormat};
use construct::{AdversarialKind, AdversarialSpec};

#[derive(Parser)]
#[command(
    name = "pml",
    version,
    about = "Pointwise maximal leakage analyzer for finite mechanisms"
)]
struct Cli {
    /// Configuration file (JSON); falls back to $PML_CONFIG, then defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format; overrides the configured default
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Tolerance override for verification checks
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Leakage report for one mechanism under one prior
    Analyze {
        /// Mechanism JSON file
        #[arg(long)]
        mechanism: PathBuf,
        /// Prior JSON file
        #[arg(long)]
        prior: PathBuf,
        /// Singling-out detection threshold in nats
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Run a named invariant check
    Verify {
        /// One of: eq-A2, thm-3.5, prop-3.6, thm-3.8, prop-3.9, thm-4.2,
        /// thm-4.5, remark-B1, cor-3.11
        id: String,
        /// Instance JSON file
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Seed and instance count for the randomized suite
        #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
        random: Option<Vec<u64>>,
    },
    /// Closed-form leakage of the Laplace counting query
    Laplace {
        /// Number of database entries
        #[arg(long)]
        n: u64,
        /// Laplace noise scale
        #[arg(long)]
        b: f64,
        /// Predicate probability for the exact leakage
        #[arg(long)]
        p: Option<f64>,
        /// Family margin for the prior-set bound
        #[arg(long)]
        c: Option<f64>,
        /// Sweep one parameter: param=lo:hi:steps with param in {n, b, p, c}
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Leakage of the deterministic threshold query
    Threshold {
        /// Database sizes
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        n: Vec<u64>,
        /// Per-entry predicate probabilities
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        p: Vec<f64>,
        /// Observed answer bit
        #[arg(long, default_value_t = 1)]
        answer: u8,
        /// Threshold count
        #[arg(long)]
        m: Option<u64>,
        /// Sweep the threshold over the percent grid of each n
        #[arg(long)]
        sweep: bool,
    },
    /// Serialize an adversarial construction to JSON files
    Construct {
        #[command(subcommand)]
        kind: ConstructCommand,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Disclosing mechanism with the minimal worst-case leakage
    MinCost {
        /// Prior JSON file
        #[arg(long)]
        prior: PathBuf,
        /// Disclosing-outcome probability; defaults inside the valid range
        #[arg(long)]
        alpha: Option<f64>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Attribute kernel lowering prior entropy while inheriting disclosure
    LowEntropyAttr {
        /// Attribute marginal JSON file
        #[arg(long)]
        prior: PathBuf,
        /// Attribute value the kernel discloses
        #[arg(long)]
        disclosed: String,
        /// Mass moved onto the disclosed value from every other value
        #[arg(long)]
        lambda: f64,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Concentrated prior drawn against a database mechanism
    AdversarialPrior {
        /// Database mechanism JSON file (entry_alphabet and n present)
        #[arg(long)]
        mechanism: PathBuf,
        #[arg(long, value_enum)]
        kind: AdversarialKind,
        /// Concentration parameter in (0, 1)
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Comma-separated per-entry target values (product-target)
        #[arg(long)]
        target: Option<String>,
        /// Entry index (conditional-entry, correlated-entry)
        #[arg(long, default_value_t = 0)]
        entry: usize,
        /// Comma-separated remaining-entry values (conditional-entry)
        #[arg(long)]
        rest: Option<String>,
        /// Boosted entry value (correlated-entry)
        #[arg(long)]
        d: Option<String>,
        /// Suppressed entry value (correlated-entry)
        #[arg(long)]
        d_prime: Option<String>,
        /// Output label the construction conditions on
        #[arg(long)]
        output: Option<String>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    let config = AnalysisConfig::load(cli.config.as_deref())?;
    let format = cli.format.unwrap_or(config.format);
    match cli.command {
        Command::Analyze {
            mechanism,
            prior,
            threshold,
        } => analyze::run(&mechanism, &prior, threshold, &config, format),
        Command::Verify {
            id,
            instance,
            random,
        } => {
            let random = random.map(|v| (v[0], v[1]));
            verify::run(&id, instance.as_deref(), random, cli.tol, &config)
        }
        Command::Laplace { n, b, p, c, sweep } => {
            laplace::run(n, b, p, c, sweep.as_deref(), format)
        }
        Command::Threshold {
            n,
            p,
            answer,
            m,
            sweep,
        } => threshold::run(&n, &p, answer, m, sweep, format),
        Command::Construct { kind } => match kind {
            ConstructCommand::MinCost { prior, alpha, out } => {
                construct::run_min_cost(&prior, alpha, &out)
            }
            ConstructCommand::LowEntropyAttr {
                prior,
                disclosed,
                lambda,
                out,
            } => construct::run_low_entropy_attr(&prior, &disclosed, lambda, &out),
            ConstructCommand::AdversarialPrior {
                mechanism,
                kind,
                eps,
                target,
                entry,
                rest,
                d,
                d_prime,
                output,
                out,
            } => {
                let spec = AdversarialSpec {
                    kind,
                    eps,
                    target,
                    entry,
                    rest,
                    d,
                    d_prime,
                    output,
                };
                construct::run_adversarial(&mechanism, &spec, &out)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
