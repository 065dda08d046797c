use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{cmd_classify, cmd_enumerate, cmd_index, cmd_witness, ClassifyFormat};
use crate::config::{parse_suites, OutputFormat, PrimeRange, RunConfig};
use crate::error::{CliError, EXIT_PASS};
use crate::report::{write_csv, write_json};
use crate::runner::run;

#[derive(Debug, Parser)]
#[command(
    name = "zsi",
    version,
    about = "Index of zero-sum sequences over cyclic groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index of a sequence given as comma-separated residues in [1, n].
    Index {
        #[arg(allow_hyphen_values = true)]
        sequence: String,
        #[arg(long)]
        order: u64,
        /// Also print the norm for every unit.
        #[arg(long)]
        verbose: bool,
    },
    /// Index-2 families (1, 1, x1, x2, x3) of minimal zero-sum sequences mod p.
    Classify {
        p: u64,
        #[arg(long, value_enum, default_value_t)]
        format: ClassifyFormat,
    },
    /// Search for (k, m) with kp/c <= m < kp/b and ma < p.
    Witness { a: u64, b: u64, c: u64, p: u64 },
    /// Minimal zero-sum sequences of length 5 with a repeated element, one per line.
    Enumerate {
        p: u64,
        #[arg(long, default_value_t = 2)]
        h_min: usize,
    },
    /// Run verification suites over every prime in a range.
    Verify {
        /// Inclusive range LO..HI.
        #[arg(long)]
        primes: String,
        /// Comma-separated: prop21, prop22, prop23, lemma24, theorem, audit.
        #[arg(long)]
        suites: String,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long, env = "ZSI_CACHE_DIR", default_value = "zsi-cache")]
        cache_dir: PathBuf,
        /// Recompute even when a passing report is cached.
        #[arg(long)]
        force: bool,
        /// Stop dispatching work after the first failure.
        #[arg(long)]
        fail_fast: bool,
        /// Progress on stderr.
        #[arg(long)]
        verbose: bool,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs a parsed command, writing to stdout. Returns the exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Index {
            sequence,
            order,
            verbose,
        } => {
            out.write_all(cmd_index(&sequence, order, verbose)?.as_bytes())?;
            EXIT_PASS
        }
        Command::Classify { p, format } => {
            out.write_all(cmd_classify(p, format)?.as_bytes())?;
            EXIT_PASS
        }
        Command::Witness { a, b, c, p } => {
            out.write_all(cmd_witness(a, b, c, p)?.as_bytes())?;
            EXIT_PASS
        }
        Command::Enumerate { p, h_min } => {
            cmd_enumerate(p, h_min, &mut out)?;
            EXIT_PASS
        }
        Command::Verify {
            primes,
            suites,
            jobs,
            format,
            cache_dir,
            force,
            fail_fast,
            verbose,
        } => {
            let config = RunConfig {
                prime_range: primes.parse::<PrimeRange>()?,
                suites: parse_suites(&suites)?,
                jobs,
                output_format: format,
                cache_dir,
                fail_fast,
                force,
                verbose,
            };
            let summary = run(&config)?;
            let reports = summary.reports();
            match config.output_format {
                OutputFormat::Json => write_json(&reports, &mut out)?,
                OutputFormat::Csv => write_csv(&reports, &mut out)?,
            }
            if summary.skipped_tasks > 0 {
                eprintln!("stopped early: {} tasks not run", summary.skipped_tasks);
            }
            summary.exit_code()
        }
    };
    out.flush()?;
    Ok(code)
}
