use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use zsi_core::lab::{
    AuditRow, ClosedFormCheck, Counterexample, Lemma24Check, Prop21Check, Prop22Check, Prop23Check,
    TheoremCheck, Triple,
};
use zsi_core::{Fraction, IndexCertificate};

use crate::config::Suite;
use crate::error::CliError;

/// Version stamp written into every report; cached files with another
/// stamp are recomputed.
pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn tag(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Number of sequences with a given integral index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCount {
    pub index: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Prop21 {
        checked: usize,
        counterexample: Option<Counterexample>,
    },
    Prop22 {
        sequence: Vec<u64>,
        index: Fraction,
        certificate: IndexCertificate,
        minimal: bool,
        counterexample: Option<Counterexample>,
    },
    Prop23 {
        families: Vec<Triple>,
        expected: Vec<Triple>,
        missing: Vec<Triple>,
        unexpected: Vec<Triple>,
        orbit_families: Vec<Vec<u64>>,
        counterexample: Option<Counterexample>,
    },
    Lemma24 {
        certificates: Vec<ClosedFormCheck>,
        counterexample: Option<Counterexample>,
    },
    Theorem {
        families: Vec<Triple>,
        expected_family: Triple,
        sequences: usize,
        index_counts: Vec<IndexCount>,
        h3_checked: usize,
        counterexample: Option<Counterexample>,
    },
    Audit {
        bucket_counts: BTreeMap<String, usize>,
        rows: Vec<AuditRow>,
        counterexamples: Vec<Counterexample>,
    },
    Skipped {
        reason: String,
    },
    /// The suite stopped on an internal consistency error.
    Error {
        counterexample: Counterexample,
    },
}

impl Payload {
    pub fn counterexamples(&self) -> Vec<Counterexample> {
        match self {
            Payload::Prop21 { counterexample, .. }
            | Payload::Prop22 { counterexample, .. }
            | Payload::Prop23 { counterexample, .. }
            | Payload::Lemma24 { counterexample, .. }
            | Payload::Theorem { counterexample, .. } => counterexample.iter().cloned().collect(),
            Payload::Audit {
                counterexamples, ..
            } => counterexamples.clone(),
            Payload::Error { counterexample } => vec![counterexample.clone()],
            Payload::Skipped { .. } => Vec::new(),
        }
    }

    fn status(&self) -> Status {
        match self {
            Payload::Skipped { .. } => Status::Skipped,
            _ if self.counterexamples().is_empty() => Status::Pass,
            _ => Status::Fail,
        }
    }
}

impl From<Prop21Check> for Payload {
    fn from(c: Prop21Check) -> Self {
        Payload::Prop21 {
            checked: c.checked,
            counterexample: c.counterexample,
        }
    }
}

impl From<Prop22Check> for Payload {
    fn from(c: Prop22Check) -> Self {
        let counterexample = (!c.holds()).then(|| Counterexample {
            sequence: c.sequence.clone(),
            reason: format!("index {} instead of 2", c.certificate.index_value()),
        });
        Payload::Prop22 {
            index: c.certificate.index_value(),
            sequence: c.sequence,
            certificate: c.certificate,
            minimal: c.minimal,
            counterexample,
        }
    }
}

impl From<Prop23Check> for Payload {
    fn from(c: Prop23Check) -> Self {
        Payload::Prop23 {
            counterexample: c.counterexample(),
            families: c.record.families.into_iter().collect(),
            expected: c.expected.into_iter().collect(),
            missing: c.missing.into_iter().collect(),
            unexpected: c.unexpected.into_iter().collect(),
            orbit_families: c.orbit_families.into_iter().collect(),
        }
    }
}

impl From<Lemma24Check> for Payload {
    fn from(c: Lemma24Check) -> Self {
        Payload::Lemma24 {
            certificates: c.certificates,
            counterexample: c.counterexample,
        }
    }
}

impl From<TheoremCheck> for Payload {
    fn from(c: TheoremCheck) -> Self {
        Payload::Theorem {
            counterexample: c.counterexample(),
            families: c.scan.record.families.into_iter().collect(),
            expected_family: c.expected_family,
            sequences: c.scan.sequences,
            index_counts: c
                .scan
                .index_counts
                .into_iter()
                .map(|(index, count)| IndexCount { index, count })
                .collect(),
            h3_checked: c.h3.checked,
        }
    }
}

impl From<Vec<AuditRow>> for Payload {
    fn from(rows: Vec<AuditRow>) -> Self {
        let mut bucket_counts = BTreeMap::new();
        for row in &rows {
            *bucket_counts
                .entry(row.bucket.tag().to_string())
                .or_insert(0) += 1;
        }
        Payload::Audit {
            counterexamples: rows.iter().filter_map(AuditRow::counterexample).collect(),
            bucket_counts,
            rows,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_ms: u64,
}

/// Outcome of one suite at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub prime: u64,
    pub status: Status,
    pub version: String,
    pub payload: Payload,
    /// Kept out of the payload and dropped by [`SuiteReport::canonical_json`].
    #[serde(default)]
    pub timing: Timing,
}

/// One CSV row; the JSON rendering is an array of the same records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub prime: u64,
    pub status: String,
    pub family_or_bucket: String,
    pub detail: String,
}

fn triple(&(x1, x2, x3): &Triple) -> String {
    format!("({x1},{x2},{x3})")
}

fn joined(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl SuiteReport {
    pub fn new(suite: Suite, prime: u64, payload: Payload, wall_time_ms: u64) -> Self {
        SuiteReport {
            suite,
            prime,
            status: payload.status(),
            version: REPORT_VERSION.to_string(),
            payload,
            timing: Timing { wall_time_ms },
        }
    }

    pub fn file_name(&self) -> String {
        report_file_name(self.suite, self.prime)
    }

    /// Full report with keys in sorted order.
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)?)
    }

    /// The report without its timing sidecar, for byte comparison of runs.
    pub fn canonical_json(&self) -> Result<String, CliError> {
        let mut value = serde_json::to_value(self)?;
        if let Some(map) = value.as_object_mut() {
            map.remove("timing");
        }
        Ok(serde_json::to_string_pretty(&value)?)
    }

    pub fn records(&self) -> Vec<Record> {
        let record = |family_or_bucket: String, detail: String| Record {
            suite: self.suite.tag().to_string(),
            prime: self.prime,
            status: self.status.tag().to_string(),
            family_or_bucket,
            detail,
        };
        let mut out = Vec::new();
        match &self.payload {
            Payload::Prop21 { checked, .. } => {
                out.push(record("h>=3".into(), format!("checked={checked}")));
            }
            Payload::Prop22 {
                sequence,
                index,
                certificate,
                minimal,
                ..
            } => out.push(record(
                format!("({})", joined(&sequence[2..])),
                format!(
                    "index={index} multiplier={} minimal={minimal}",
                    certificate.best_multiplier
                ),
            )),
            Payload::Prop23 {
                families,
                expected,
                missing,
                orbit_families,
                ..
            } => {
                for f in families {
                    let tag = if expected.contains(f) {
                        "expected"
                    } else {
                        "unexpected"
                    };
                    out.push(record(triple(f), tag.into()));
                }
                for f in missing {
                    out.push(record(triple(f), "missing".into()));
                }
                out.push(record(
                    "orbits".into(),
                    format!("count={}", orbit_families.len()),
                ));
            }
            Payload::Lemma24 { certificates, .. } => {
                for c in certificates {
                    out.push(record(
                        c.case.to_string(),
                        format!("m={} t={} index={}", c.m, c.t, c.brute_force_index),
                    ));
                }
                if certificates.is_empty() {
                    out.push(record("none".into(), "no case above threshold".into()));
                }
            }
            Payload::Theorem {
                families,
                sequences,
                index_counts,
                h3_checked,
                ..
            } => {
                for f in families {
                    out.push(record(triple(f), "index=2".into()));
                }
                let counts = index_counts
                    .iter()
                    .map(|c| format!("{}:{}", c.index, c.count))
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push(record(
                    "indices".into(),
                    format!("sequences={sequences} {counts}"),
                ));
                out.push(record("h>=3".into(), format!("checked={h3_checked}")));
            }
            Payload::Audit { bucket_counts, .. } => {
                for (bucket, n) in bucket_counts {
                    out.push(record(bucket.clone(), format!("rows={n}")));
                }
            }
            Payload::Skipped { reason } => out.push(record("skipped".into(), reason.clone())),
            Payload::Error { .. } => {}
        }
        for c in self.payload.counterexamples() {
            out.push(record(
                "counterexample".into(),
                format!("sequence=[{}] {}", joined(&c.sequence), c.reason),
            ));
        }
        out
    }
}

pub fn report_file_name(suite: Suite, prime: u64) -> String {
    format!("{}_p{prime}.json", suite.tag())
}

pub fn write_csv<W: Write>(reports: &[SuiteReport], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for record in reports.iter().flat_map(SuiteReport::records) {
        w.serialize(record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(reports: &[SuiteReport], mut out: W) -> Result<(), CliError> {
    let records: Vec<Record> = reports.iter().flat_map(SuiteReport::records).collect();
    serde_json::to_writer_pretty(&mut out, &records)?;
    writeln!(out)?;
    Ok(())
}
