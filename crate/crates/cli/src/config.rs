use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use zsi_core::lab::{MIN_PRIME, THEOREM_MIN_PRIME};
use zsi_core::residue::MAX_ORDER;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Prop21,
    Prop22,
    Prop23,
    Lemma24,
    Theorem,
    Audit,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Prop21,
        Suite::Prop22,
        Suite::Prop23,
        Suite::Lemma24,
        Suite::Theorem,
        Suite::Audit,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Suite::Prop21 => "prop21",
            Suite::Prop22 => "prop22",
            Suite::Prop23 => "prop23",
            Suite::Lemma24 => "lemma24",
            Suite::Theorem => "theorem",
            Suite::Audit => "audit",
        }
    }

    /// Smallest prime the suite accepts as a range lower bound.
    pub fn min_prime(&self) -> u64 {
        match self {
            Suite::Theorem | Suite::Audit => THEOREM_MIN_PRIME,
            _ => MIN_PRIME,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.tag() == s.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown suite {s:?}")))
    }
}

/// Parses a comma-separated suite list, deduplicated and in canonical order.
pub fn parse_suites(list: &str) -> Result<Vec<Suite>, CliError> {
    let mut suites = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Suite::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    suites.sort_unstable();
    suites.dedup();
    Ok(suites)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Inclusive range `LO..HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for PrimeRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Usage(format!("expected LO..HI, got {s:?}"));
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        Ok(PrimeRange {
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub prime_range: PrimeRange,
    pub suites: Vec<Suite>,
    pub jobs: usize,
    pub output_format: OutputFormat,
    pub cache_dir: PathBuf,
    pub fail_fast: bool,
    pub force: bool,
    pub verbose: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let PrimeRange { lo, hi } = self.prime_range;
        if lo > hi {
            return Err(CliError::Usage(format!("empty prime range {lo}..{hi}")));
        }
        if hi > MAX_ORDER {
            return Err(CliError::Usage(format!("prime range exceeds {MAX_ORDER}")));
        }
        if self.suites.is_empty() {
            return Err(CliError::Usage("no suites selected".into()));
        }
        if self.jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        for suite in &self.suites {
            if lo < suite.min_prime() {
                return Err(CliError::Usage(format!(
                    "suite {suite} needs primes >= {}, range starts at {lo}",
                    suite.min_prime()
                )));
            }
        }
        if self.primes().is_empty() {
            return Err(CliError::Usage(format!("no primes in {lo}..{hi}")));
        }
        Ok(())
    }

    pub fn primes(&self) -> Vec<u64> {
        zsi_core::primes_in(self.prime_range.lo, self.prime_range.hi)
    }
}
