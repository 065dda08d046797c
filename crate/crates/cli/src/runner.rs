use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use zsi_core::lab::{
    audit_proof, verify_lemma_2_4, verify_prop_2_1, verify_prop_2_2, verify_prop_2_3,
    verify_theorem, Counterexample, TABLE_PRIMES,
};
use zsi_core::ClosedFormCase;

use crate::cache::ReportCache;
use crate::config::{RunConfig, Suite};
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::report::{Payload, Status, SuiteReport};

fn skip_reason(suite: Suite, p: u64) -> Option<String> {
    match suite {
        Suite::Prop23 if p > TABLE_PRIMES.1 => {
            Some(format!("table covers primes up to {}", TABLE_PRIMES.1))
        }
        Suite::Lemma24 if ClosedFormCase::ALL.iter().all(|c| p <= c.threshold()) => {
            Some("no closed-form case above its threshold".into())
        }
        _ => None,
    }
}

fn payload(suite: Suite, p: u64) -> zsi_core::Result<Payload> {
    if let Some(reason) = skip_reason(suite, p) {
        return Ok(Payload::Skipped { reason });
    }
    Ok(match suite {
        Suite::Prop21 => verify_prop_2_1(p)?.into(),
        Suite::Prop22 => verify_prop_2_2(p)?.into(),
        Suite::Prop23 => verify_prop_2_3(p)?.into(),
        Suite::Lemma24 => verify_lemma_2_4(p)?.into(),
        Suite::Theorem => verify_theorem(p)?.into(),
        Suite::Audit => audit_proof(p)?.into(),
    })
}

/// Runs one suite at one prime. Internal certificate errors become failing
/// reports; anything else is a configuration problem.
pub fn run_suite(suite: Suite, p: u64) -> Result<SuiteReport, CliError> {
    let start = Instant::now();
    let payload = match payload(suite, p) {
        Ok(payload) => payload,
        Err(zsi_core::Error::CertificateMismatch(reason)) => Payload::Error {
            counterexample: Counterexample {
                sequence: Vec::new(),
                reason,
            },
        },
        Err(e) => return Err(e.into()),
    };
    let ms = start.elapsed().as_millis() as u64;
    Ok(SuiteReport::new(suite, p, payload, ms))
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: SuiteReport,
    pub cached: bool,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    /// Sorted by prime, then suite.
    pub outcomes: Vec<Outcome>,
    /// Tasks left unrun after a failure under `fail_fast`.
    pub skipped_tasks: usize,
}

impl RunSummary {
    pub fn all_pass(&self) -> bool {
        self.skipped_tasks == 0
            && self
                .outcomes
                .iter()
                .all(|o| o.report.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn reports(&self) -> Vec<SuiteReport> {
        self.outcomes.iter().map(|o| o.report.clone()).collect()
    }
}

fn run_task(
    config: &RunConfig,
    cache: &ReportCache,
    suite: Suite,
    p: u64,
) -> Result<Outcome, CliError> {
    if !config.force {
        if let Some(report) = cache.load(suite, p).filter(|r| r.status == Status::Pass) {
            return Ok(Outcome {
                report,
                cached: true,
            });
        }
    }
    let report = run_suite(suite, p)?;
    cache.store(&report)?;
    Ok(Outcome {
        report,
        cached: false,
    })
}

/// Validates the config, then runs every `(suite, prime)` pair on a pool of
/// `jobs` threads, writing each report into the cache directory.
pub fn run(config: &RunConfig) -> Result<RunSummary, CliError> {
    config.validate()?;
    let cache = ReportCache::open(&config.cache_dir)?;
    let tasks: Vec<(Suite, u64)> = config
        .primes()
        .into_iter()
        .flat_map(|p| config.suites.iter().map(move |&s| (s, p)))
        .collect();
    let total = tasks.len();
    let done = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", config.jobs)))?;

    let results: Vec<Option<Result<Outcome, CliError>>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(suite, p)| {
                if config.fail_fast && stop.load(Ordering::Relaxed) {
                    return None;
                }
                let result = run_task(config, &cache, suite, p);
                let failed = !matches!(&result, Ok(o) if o.report.status != Status::Fail);
                if failed {
                    stop.store(true, Ordering::Relaxed);
                }
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                if config.verbose {
                    let status = match &result {
                        Ok(o) if o.cached => format!("{} (cached)", o.report.status.tag()),
                        Ok(o) => o.report.status.tag().to_string(),
                        Err(e) => format!("error: {e}"),
                    };
                    eprintln!("[{n}/{total}] {suite} p={p}: {status}");
                }
                Some(result)
            })
            .collect()
    });

    let mut outcomes = Vec::new();
    let mut skipped_tasks = 0;
    for result in results {
        match result {
            Some(r) => outcomes.push(r?),
            None => skipped_tasks += 1,
        }
    }
    outcomes.sort_by_key(|o| (o.report.prime, o.report.suite));
    Ok(RunSummary {
        outcomes,
        skipped_tasks,
    })
}
