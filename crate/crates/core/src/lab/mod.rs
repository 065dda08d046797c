//! Exhaustive per-prime checks of the length-5 classification.
//!
//! Every length-5 sequence over `Z_p` with a repeated element lies in the
//! unit orbit of one whose repeated element is `1`, so enumerating
//! `(1, 1, x1, x2, x3)` covers all `h(S) >= 2` orbits. Shapes with `h >= 3`
//! are covered by `(1, 1, 1, x, y)`.

mod audit;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{index, is_minimal_zero_sum, multiplicity_h, orbit_canonical, IndexCertificate};
use crate::normal_form::{closed_form_witness, ClosedFormCase};
use crate::residue::{CyclicOrder, ResidueSequence};

pub use audit::{
    audit_normal_form, audit_proof, AuditRow, CertificateSource, ProofBucket, RowCertificate,
    Verdict,
};

/// Smallest prime the enumeration suites accept.
pub const MIN_PRIME: u64 = 5;
/// Smallest prime for which the single-family classification is claimed.
pub const THEOREM_MIN_PRIME: u64 = 31;
/// Primes covered by the small-prime table.
pub const TABLE_PRIMES: (u64, u64) = (5, 59);

/// Index-2 triples beyond the `((p-1)/2, (p+3)/2, p-3)` family, keyed by prime.
pub const SMALL_PRIME_EXTRA_FAMILIES: [(u64, Triple); 6] = [
    (17, (8, 11, 13)),
    (19, (6, 14, 16)),
    (19, (9, 12, 15)),
    (23, (11, 15, 18)),
    (23, (9, 15, 20)),
    (29, (14, 19, 23)),
];

pub type Triple = (u64, u64, u64);

/// A sequence that broke an expected property, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sequence: Vec<u64>,
    pub reason: String,
}

impl Counterexample {
    fn new(s: &ResidueSequence, reason: impl Into<String>) -> Self {
        Counterexample {
            sequence: s.entries().to_vec(),
            reason: reason.into(),
        }
    }
}

fn prime_order(p: u64, min: u64) -> Result<CyclicOrder> {
    let order = CyclicOrder::prime(p)?;
    if p < min {
        return Err(Error::PrimeTooSmall { p, min });
    }
    Ok(order)
}

/// `((p-1)/2, (p+3)/2, p-3)` sorted ascending.
pub fn exceptional_family(p: u64) -> Triple {
    let mut t = [(p - 1) / 2, (p + 3) / 2, p - 3];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

fn with_two_ones(order: CyclicOrder, (x1, x2, x3): Triple) -> ResidueSequence {
    ResidueSequence::new(order, [1, 1, x1, x2, x3]).expect("entries lie in [1, p]")
}

/// Minimal zero-sum `(1, 1, x1, x2, x3)` over `Z_p` with
/// `1 < x1 <= x2 <= x3 < p - 2`, each exactly once, ordered by `(x1, x2)`.
pub fn enumerate_h2(p: u64) -> Result<impl Iterator<Item = ResidueSequence>> {
    let order = prime_order(p, MIN_PRIME)?;
    Ok((2..p - 2).flat_map(move |x1| {
        (x1..p - 2).filter_map(move |x2| {
            // x3 is forced by the zero-sum condition
            let x3 = crate::residue::least_positive_residue(-((2 + x1 + x2) as i128), p);
            if x3 < x2 || x3 >= p - 2 {
                return None;
            }
            let s = with_two_ones(order, (x1, x2, x3));
            is_minimal_zero_sum(&s).expect("length 5").then_some(s)
        })
    }))
}

/// Minimal zero-sum `(1, 1, 1, x, y)` over `Z_p` with `1 <= x <= y <= p`.
/// Covers every orbit with `h(S) >= 3`, including `h = 4, 5`.
pub fn enumerate_h3(p: u64) -> Result<impl Iterator<Item = ResidueSequence>> {
    let order = prime_order(p, MIN_PRIME)?;
    Ok((1..=p).filter_map(move |x| {
        let y = crate::residue::least_positive_residue(-((3 + x) as i128), p);
        if y < x {
            return None;
        }
        let s = ResidueSequence::new(order, [1, 1, 1, x, y]).expect("entries lie in [1, p]");
        is_minimal_zero_sum(&s).expect("length 5").then_some(s)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub p: u64,
    /// Sorted triples `(x1, x2, x3)` with `(1, 1, x1, x2, x3)` minimal
    /// zero-sum of index 2.
    pub families: BTreeSet<Triple>,
}

impl ClassificationRecord {
    /// The families with orbit-equivalent entries collapsed, keyed by the
    /// canonical orbit representative.
    pub fn orbit_families(&self) -> BTreeSet<Vec<u64>> {
        let order = CyclicOrder::new(self.p).expect("validated prime");
        self.families
            .iter()
            .map(|&t| orbit_canonical(&with_two_ones(order, t)).entries().to_vec())
            .collect()
    }
}

/// Everything learned from one pass over [`enumerate_h2`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Scan {
    pub record: ClassificationRecord,
    pub sequences: usize,
    /// Number of enumerated sequences per integral index value.
    pub index_counts: BTreeMap<u64, usize>,
    /// Sequences contradicting `1 <= ind <= 2`, or of index 2 without sum `2p`.
    pub anomalies: Vec<Counterexample>,
}

pub fn scan_h2(p: u64) -> Result<H2Scan> {
    let mut families = BTreeSet::new();
    let mut index_counts = BTreeMap::new();
    let mut anomalies = Vec::new();
    let mut sequences = 0;
    for s in enumerate_h2(p)? {
        sequences += 1;
        let cert = index(&s);
        let ind = cert
            .integral_index()
            .expect("zero-sum sequences have integral index");
        *index_counts.entry(ind).or_insert(0) += 1;
        if !(1..=2).contains(&ind) {
            anomalies.push(Counterexample::new(
                &s,
                format!("index {ind} outside {{1, 2}}"),
            ));
        }
        if ind == 2 {
            let e = s.entries();
            if s.sum() != 2 * p {
                anomalies.push(Counterexample::new(&s, "index 2 with sum other than 2p"));
            }
            families.insert((e[2], e[3], e[4]));
        }
    }
    Ok(H2Scan {
        record: ClassificationRecord { p, families },
        sequences,
        index_counts,
        anomalies,
    })
}

/// The index-2 families among [`enumerate_h2`].
pub fn classify(p: u64) -> Result<ClassificationRecord> {
    Ok(scan_h2(p)?.record)
}

/// The table of index-2 triples for `p` in `[5, 59]`: the exceptional family
/// where it is minimal, plus the sporadic entries.
pub fn expected_small_prime_families(p: u64) -> Result<BTreeSet<Triple>> {
    let order = prime_order(p, TABLE_PRIMES.0)?;
    if p > TABLE_PRIMES.1 {
        return Err(Error::PrimeOutOfRange {
            p,
            lo: TABLE_PRIMES.0,
            hi: TABLE_PRIMES.1,
        });
    }
    let mut expected: BTreeSet<Triple> = SMALL_PRIME_EXTRA_FAMILIES
        .iter()
        .filter(|(q, _)| *q == p)
        .map(|&(_, t)| t)
        .collect();
    let family = exceptional_family(p);
    if family.0 >= 2
        && family.2 <= p - 3
        && is_minimal_zero_sum(&with_two_ones(order, family)).expect("length 5")
    {
        expected.insert(family);
    }
    Ok(expected)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop21Check {
    pub p: u64,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl Prop21Check {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Every minimal zero-sum length-5 sequence with `h >= 3` has index 1.
pub fn verify_prop_2_1(p: u64) -> Result<Prop21Check> {
    let mut checked = 0;
    for s in enumerate_h3(p)? {
        checked += 1;
        debug_assert!(multiplicity_h(&s) >= 3);
        let ind = index(&s).integral_index();
        if ind != Some(1) {
            return Ok(Prop21Check {
                p,
                checked,
                counterexample: Some(Counterexample::new(
                    &s,
                    format!("h >= 3 with index {ind:?}"),
                )),
            });
        }
    }
    Ok(Prop21Check {
        p,
        checked,
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop22Check {
    pub p: u64,
    pub sequence: Vec<u64>,
    pub certificate: IndexCertificate,
    pub minimal: bool,
}

impl Prop22Check {
    pub fn holds(&self) -> bool {
        self.certificate.integral_index() == Some(2)
    }
}

/// Brute-force index of `(1, 1, (p-1)/2, (p+3)/2, p-3)`; minimality is
/// recorded but not required.
pub fn verify_prop_2_2(p: u64) -> Result<Prop22Check> {
    let order = prime_order(p, MIN_PRIME)?;
    let s = with_two_ones(order, exceptional_family(p));
    Ok(Prop22Check {
        p,
        sequence: s.entries().to_vec(),
        certificate: index(&s),
        minimal: is_minimal_zero_sum(&s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop23Check {
    pub record: ClassificationRecord,
    pub expected: BTreeSet<Triple>,
    /// Expected but not found.
    pub missing: BTreeSet<Triple>,
    /// Found but not expected.
    pub unexpected: BTreeSet<Triple>,
    pub orbit_families: BTreeSet<Vec<u64>>,
    pub anomalies: Vec<Counterexample>,
}

impl Prop23Check {
    pub fn holds(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty() && self.anomalies.is_empty()
    }

    pub fn counterexample(&self) -> Option<Counterexample> {
        let p = self.record.p;
        let as_seq = |&(x1, x2, x3): &Triple, why: &str| Counterexample {
            sequence: vec![1, 1, x1, x2, x3],
            reason: format!("{why} at p={p}"),
        };
        self.missing
            .iter()
            .next()
            .map(|t| as_seq(t, "tabulated index-2 family not found"))
            .or_else(|| {
                self.unexpected
                    .iter()
                    .next()
                    .map(|t| as_seq(t, "index-2 family missing from the table"))
            })
            .or_else(|| self.anomalies.first().cloned())
    }
}

/// Computed index-2 families compared against the small-prime table.
pub fn verify_prop_2_3(p: u64) -> Result<Prop23Check> {
    let expected = expected_small_prime_families(p)?;
    let scan = scan_h2(p)?;
    let found = &scan.record.families;
    Ok(Prop23Check {
        missing: expected.difference(found).copied().collect(),
        unexpected: found.difference(&expected).copied().collect(),
        orbit_families: scan.record.orbit_families(),
        expected,
        record: scan.record,
        anomalies: scan.anomalies,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub case: ClosedFormCase,
    pub sequence: Vec<u64>,
    pub m: u64,
    pub t: u64,
    pub brute_force_index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma24Check {
    pub p: u64,
    pub certificates: Vec<ClosedFormCheck>,
    pub counterexample: Option<Counterexample>,
}

impl Lemma24Check {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Every closed-form case whose threshold lies below `p`: the explicit
/// multiplier certifies norm `p`, and brute force agrees the index is 1.
pub fn verify_lemma_2_4(p: u64) -> Result<Lemma24Check> {
    prime_order(p, MIN_PRIME)?;
    let mut certificates = Vec::new();
    for case in ClosedFormCase::ALL {
        if p <= case.threshold() {
            continue;
        }
        let s = case.normal_form(p)?.reconstruct();
        let w = match closed_form_witness(case, p) {
            Ok(w) => w,
            Err(Error::CertificateMismatch(why)) => {
                return Ok(Lemma24Check {
                    p,
                    certificates,
                    counterexample: Some(Counterexample::new(&s, why)),
                })
            }
            Err(e) => return Err(e),
        };
        let brute = index(&s).integral_index().unwrap_or(0);
        certificates.push(ClosedFormCheck {
            case,
            sequence: s.entries().to_vec(),
            m: w.m,
            t: w.t,
            brute_force_index: brute,
        });
        if brute != 1 {
            return Ok(Lemma24Check {
                p,
                certificates,
                counterexample: Some(Counterexample::new(
                    &s,
                    format!("brute-force index {brute}"),
                )),
            });
        }
    }
    Ok(Lemma24Check {
        p,
        certificates,
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub scan: H2Scan,
    pub expected_family: Triple,
    pub h3: Prop21Check,
}

impl TheoremCheck {
    pub fn holds(&self) -> bool {
        self.counterexample().is_none()
    }

    pub fn counterexample(&self) -> Option<Counterexample> {
        if let Some(c) = self.scan.anomalies.first() {
            return Some(c.clone());
        }
        if let Some(c) = &self.h3.counterexample {
            return Some(c.clone());
        }
        let p = self.scan.record.p;
        let families = &self.scan.record.families;
        if let Some(&(x1, x2, x3)) = families.iter().find(|&&t| t != self.expected_family) {
            return Some(Counterexample {
                sequence: vec![1, 1, x1, x2, x3],
                reason: format!("second index-2 family at p={p}"),
            });
        }
        if !families.contains(&self.expected_family) {
            let (x1, x2, x3) = self.expected_family;
            return Some(Counterexample {
                sequence: vec![1, 1, x1, x2, x3],
                reason: format!("expected index-2 family absent at p={p}"),
            });
        }
        None
    }
}

/// For `p >= 31`: the exceptional family is the only index-2 family, every
/// index is 1 or 2, and every `h >= 3` sequence has index 1.
pub fn verify_theorem(p: u64) -> Result<TheoremCheck> {
    prime_order(p, THEOREM_MIN_PRIME)?;
    Ok(TheoremCheck {
        scan: scan_h2(p)?,
        expected_family: exceptional_family(p),
        h3: verify_prop_2_1(p)?,
    })
}
