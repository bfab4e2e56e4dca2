//! Command-line driver for E-sequence experiments.
//!
//! Exit status: 0 success, 1 verification violation, 2 usage error,
//! 3 bit-cap abort, 4 continued-fraction depth exhausted.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "esequence",
    version,
    about = "Exact E-sequence experiments for the 3x+1 map"
)]
struct Cli {
    /// TOML run configuration; flags given on the command line take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file (default: stdout)
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Largest allowed b_n (default: $ESEQ_BIT_CAP, else 1000000)
    #[arg(long, global = true)]
    bit_cap: Option<u64>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Odd trajectory records (k, x_k, a_k, b_k, B_k)
    Trajectory {
        /// Odd positive start
        #[arg(long)]
        x: Option<String>,
        /// Number of odd steps (default 100)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Omega-limit loop over a generator, with its growth series
    Omega {
        /// explicit:1,2,..  orbit:N  periodic:P;Q  sturmian:THETA  powers-of-two  squares
        #[arg(long)]
        generator: Option<String>,
        /// Depth limit (default 10000)
        #[arg(long)]
        max_n: Option<usize>,
        /// Abort bound, decimal or 2^k (default 2^256)
        #[arg(long)]
        threshold: Option<String>,
        /// Series sampling: pow2 (default) or every k-th depth
        #[arg(long)]
        stride: Option<String>,
    },
    /// Decide an eventually periodic E-sequence
    Periodic {
        /// Pre-period terms, comma separated
        #[arg(long)]
        prefix: Option<String>,
        /// Period terms, comma separated
        #[arg(long)]
        periodic: Option<String>,
    },
    /// Decide every canonical periodic spec within bounds
    SweepPeriodic {
        #[arg(long)]
        l_max: Option<usize>,
        #[arg(long)]
        r_max: Option<usize>,
        #[arg(long)]
        term_max: Option<u32>,
    },
    /// Verdict for the Sturmian sequence floor(n theta) - floor((n-1) theta)
    Sturmian {
        /// log2_3, p/q, or cf:a0,a1,..[;repeating]
        #[arg(long)]
        theta: Option<String>,
        /// Terms used for the finite checks (default 1000)
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Exact verification sweep
    Verify {
        /// product-bound, reciprocal-products, positional, split-identity, matthews-watts
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        n_max: Option<u64>,
        /// Seed for the sampled suites
        #[arg(long)]
        seed: Option<u64>,
        /// Sample count for the sampled suites
        #[arg(long)]
        samples: Option<usize>,
    },
}

impl Cli {
    /// The flags as a configuration layer.
    fn into_config(self) -> RunConfig {
        let mut cfg = RunConfig {
            bit_cap: self.bit_cap,
            ..Default::default()
        };
        cfg.output.format = self.format;
        cfg.output.path = self.output;
        let name = match self.command {
            None => None,
            Some(Command::Trajectory { x, n }) => {
                (cfg.x, cfg.n) = (x, n);
                Some("trajectory")
            }
            Some(Command::Omega {
                generator,
                max_n,
                threshold,
                stride,
            }) => {
                (cfg.generator, cfg.max_n, cfg.threshold, cfg.stride) =
                    (generator, max_n, threshold, stride);
                Some("omega")
            }
            Some(Command::Periodic { prefix, periodic }) => {
                (cfg.prefix, cfg.periodic) = (prefix, periodic);
                Some("periodic")
            }
            Some(Command::SweepPeriodic {
                l_max,
                r_max,
                term_max,
            }) => {
                (cfg.l_max, cfg.r_max, cfg.term_max) = (l_max, r_max, term_max);
                Some("sweep-periodic")
            }
            Some(Command::Sturmian { theta, max_n }) => {
                (cfg.theta, cfg.max_n) = (theta, max_n);
                Some("sturmian")
            }
            Some(Command::Verify {
                suite,
                n_max,
                seed,
                samples,
            }) => {
                (cfg.suite, cfg.n_max, cfg.seed, cfg.samples) = (suite, n_max, seed, samples);
                Some("verify")
            }
        };
        cfg.command = name.map(str::to_string);
        cfg
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let flags = cli.into_config();
    if let (Some(given), Some(configured)) = (&flags.command, &file.command) {
        if given != configured {
            return Err(CliError::Usage(format!(
                "command {given} conflicts with command {configured} in the config file"
            )));
        }
    }
    let cfg = flags.over(file);
    match cfg.command.as_deref() {
        Some("trajectory") => commands::trajectory::run(&cfg),
        Some("omega") => commands::omega::run(&cfg),
        Some("periodic") => commands::periodic::run(&cfg),
        Some("sweep-periodic") => commands::sweep::run(&cfg),
        Some("sturmian") => commands::sturmian::run(&cfg),
        Some("verify") => commands::verify::run(&cfg),
        Some(other) => Err(CliError::Usage(format!("unknown command {other:?}"))),
        None => Err(CliError::Usage(
            "no command given; pass a subcommand or a config file with `command`".into(),
        )),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("esequence: {e}");
            e.exit_code()
        }
    }
}
