//! Replays the case analysis for `p >= 31` on every normal form that the
//! enumeration actually produces.
//!
//! Each normal form is routed through the decision tree (ceiling split,
//! `k1 <= b/a`, then the `l = floor(b / k1)` subcases) to a bucket. A bucket
//! either promises an index-1 certificate, marks the exceptional family, or
//! names a configuration the argument rules out. The promise is then checked
//! against brute force; any row that fails, or that fits no branch, is a
//! counterexample.

use serde::{Deserialize, Serialize};

use super::{enumerate_h2, prime_order, Counterexample, TABLE_PRIMES, THEOREM_MIN_PRIME};
use crate::error::Result;
use crate::index::{index, norm_prime};
use crate::normal_form::{
    closed_form_witness, eq3_check, find_witness, is_witness, reduce, ClosedFormCase, NormalForm,
    ReductionOutcome, WitnessResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProofBucket {
    #[serde(rename = "case1-ceil-split")]
    Case1CeilSplit,
    #[serde(rename = "case2-k1-small")]
    Case2K1Small,
    /// `k1 = 2` inside `2 < p/c < p/b < 3`, where `m1 = 5`.
    #[serde(rename = "case3-subcase-k1-2")]
    Case3K1Two,
    /// Branches that defer to the table for `p <= 59`.
    #[serde(rename = "small-prime-table")]
    SmallPrimeTable,
    #[serde(rename = "lemma-2.4-closed-form")]
    Lemma24ClosedForm,
    #[serde(rename = "lemma-3.1")]
    Lemma31,
    #[serde(rename = "lemma-3.2")]
    Lemma32,
    #[serde(rename = "lemma-3.3")]
    Lemma33,
    #[serde(rename = "lemma-3.4")]
    Lemma34,
    #[serde(rename = "lemma-3.5")]
    Lemma35,
    #[serde(rename = "lemma-3.6")]
    Lemma36,
    /// A branch the argument closes by contradiction outside the named lemmas.
    #[serde(rename = "case3-contradiction")]
    Case3Contradiction,
    #[serde(rename = "exceptional-family")]
    ExceptionalFamily,
    #[serde(rename = "unclassified")]
    Unclassified,
}

impl ProofBucket {
    pub fn tag(&self) -> &'static str {
        match self {
            ProofBucket::Case1CeilSplit => "case1-ceil-split",
            ProofBucket::Case2K1Small => "case2-k1-small",
            ProofBucket::Case3K1Two => "case3-subcase-k1-2",
            ProofBucket::SmallPrimeTable => "small-prime-table",
            ProofBucket::Lemma24ClosedForm => "lemma-2.4-closed-form",
            ProofBucket::Lemma31 => "lemma-3.1",
            ProofBucket::Lemma32 => "lemma-3.2",
            ProofBucket::Lemma33 => "lemma-3.3",
            ProofBucket::Lemma34 => "lemma-3.4",
            ProofBucket::Lemma35 => "lemma-3.5",
            ProofBucket::Lemma36 => "lemma-3.6",
            ProofBucket::Case3Contradiction => "case3-contradiction",
            ProofBucket::ExceptionalFamily => "exceptional-family",
            ProofBucket::Unclassified => "unclassified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateSource {
    /// The specific `(k, m)` named by the branch.
    BranchWitness,
    ClosedForm,
    /// First pair found by the exhaustive witness scan.
    WitnessSearch,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCertificate {
    pub multiplier: u64,
    pub source: CertificateSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Verdict {
    Certified,
    Exceptional,
    Counterexample { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub p: u64,
    pub form: NormalForm,
    pub sequence: Vec<u64>,
    pub k1: u64,
    pub bucket: ProofBucket,
    /// `"3.1"` or `"3.2"` for rows routed through the third case.
    pub subcase: Option<String>,
    pub witness: WitnessResult,
    pub certificate: Option<RowCertificate>,
    pub brute_force_index: u64,
    pub verdict: Verdict,
}

impl AuditRow {
    pub fn is_counterexample(&self) -> bool {
        matches!(self.verdict, Verdict::Counterexample { .. })
    }

    pub fn counterexample(&self) -> Option<Counterexample> {
        match &self.verdict {
            Verdict::Counterexample { reason } => Some(Counterexample {
                sequence: self.sequence.clone(),
                reason: format!("{} {}: {reason}", self.bucket.tag(), self.form),
            }),
            _ => None,
        }
    }
}

/// What a bucket asserts about its normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Claim {
    Witness {
        k: u64,
        m: u64,
    },
    ClosedForm(ClosedFormCase),
    /// Index 1 with a certificate from anywhere; `table_only` branches are
    /// only valid for primes covered by the small-prime table.
    IndexOne {
        table_only: bool,
    },
    Impossible,
    Exceptional,
    NoBranch(String),
}

#[inline]
fn ceil_div(num: u64, den: u64) -> u64 {
    num.div_ceil(den)
}

/// Smallest `k >= 1` with `ceil(kp/c) < ceil(kp/b)`, recomputed from the
/// ceilings rather than taken from the witness scan.
fn first_split(nf: &NormalForm) -> Option<u64> {
    (1..=nf.b).find(|&k| ceil_div(k * nf.p, nf.c) < ceil_div(k * nf.p, nf.b))
}

fn route(nf: &NormalForm, k1: u64, m1: u64) -> (ProofBucket, Option<&'static str>, Claim) {
    use ProofBucket::*;
    let NormalForm { a, b, c, p } = *nf;
    let no_branch = |why: &str| (Unclassified, None, Claim::NoBranch(why.to_string()));

    if nf.is_exceptional_shape() {
        return (ExceptionalFamily, None, Claim::Exceptional);
    }

    let ceil_c = ceil_div(p, c);
    let ceil_b = ceil_div(p, b);
    if ceil_c < ceil_b {
        return (Case1CeilSplit, None, Claim::Witness { k: 1, m: ceil_c });
    }
    if k1 * a <= b {
        return (Case2K1Small, None, Claim::Witness { k: k1, m: m1 });
    }

    if k1 < 2 {
        return no_branch("third case with k1 < 2");
    }
    if (a - 2) * k1 >= b {
        return no_branch("a - 2 >= b / k1 contradicts the k1 inequality");
    }
    let l = b / k1;
    let k0 = b % k1;
    // 2 < p/c < p/b < 3; p/c >= 2 is forced by c < p/2
    let below_three = p < 3 * c;

    // both subcases handle k1 = 2 in the (2, 3) band the same way
    let k1_two = |subcase| {
        if m1 != 5 {
            return (
                Unclassified,
                Some(subcase),
                Claim::NoBranch(format!("k1 = 2 but m1 = {m1}")),
            );
        }
        if 5 * a < p {
            (Case3K1Two, Some(subcase), Claim::Witness { k: 2, m: 5 })
        } else {
            (
                SmallPrimeTable,
                Some(subcase),
                Claim::IndexOne { table_only: true },
            )
        }
    };

    if a == l + 1 {
        let sub = "3.1";
        if !below_three {
            if l == 2 {
                if p > 4 * c {
                    return match ClosedFormCase::from_abc(a, b, c) {
                        Some(case) if k1 == 2 => {
                            (Lemma24ClosedForm, Some(sub), Claim::ClosedForm(case))
                        }
                        _ => (
                            Unclassified,
                            Some(sub),
                            Claim::NoBranch("p/c > 4 outside (3,4,5), (3,5,6)".into()),
                        ),
                    };
                }
                if k0 + 1 == k1 {
                    return (Lemma31, Some(sub), Claim::IndexOne { table_only: false });
                }
                if k0 + 2 == k1 {
                    return (Lemma32, Some(sub), Claim::Impossible);
                }
                return (
                    Unclassified,
                    Some(sub),
                    Claim::NoBranch(format!("3 < p/c < 4 with k0 = {k0}")),
                );
            }
            if l == 3 && k1 == 2 {
                return match ClosedFormCase::from_abc(a, b, c) {
                    Some(case) => (Lemma24ClosedForm, Some(sub), Claim::ClosedForm(case)),
                    None => (
                        Unclassified,
                        Some(sub),
                        Claim::NoBranch("l = 3, k1 = 2 outside (4,6,8), (4,7,9)".into()),
                    ),
                };
            }
            return (
                Unclassified,
                Some(sub),
                Claim::NoBranch(format!("p/c > 3 with l = {l}, k1 = {k1}")),
            );
        }
        return match (k1, l) {
            (2, _) => k1_two(sub),
            (3, l) if l <= 5 => (
                SmallPrimeTable,
                Some(sub),
                Claim::IndexOne { table_only: true },
            ),
            (4, l) if l <= 4 => (
                SmallPrimeTable,
                Some(sub),
                Claim::IndexOne { table_only: true },
            ),
            (k, 3) if k >= 5 => {
                if k0 + 1 == k1 {
                    (Lemma33, Some(sub), Claim::IndexOne { table_only: false })
                } else if k0 + 2 == k1 {
                    (Lemma34, Some(sub), Claim::Impossible)
                } else if k0 + 3 == k1 {
                    (Lemma35, Some(sub), Claim::Impossible)
                } else {
                    (
                        Unclassified,
                        Some(sub),
                        Claim::NoBranch(format!("l = 3 with k0 = {k0}")),
                    )
                }
            }
            (k, 2) if k >= 5 => (Lemma36, Some(sub), Claim::IndexOne { table_only: false }),
            _ => (
                Unclassified,
                Some(sub),
                Claim::NoBranch(format!("2 < p/c < 3 with l = {l}, k1 = {k1}")),
            ),
        };
    }

    if a == l + 2 {
        let sub = "3.2";
        if !below_three {
            return (Case3Contradiction, Some(sub), Claim::Impossible);
        }
        if k1 == 2 {
            return k1_two(sub);
        }
        if l == 1 {
            return (Case3Contradiction, Some(sub), Claim::Impossible);
        }
        return (
            Unclassified,
            Some(sub),
            Claim::NoBranch(format!("l = {l}, k1 = {k1}")),
        );
    }

    no_branch("a is neither l + 1 nor l + 2")
}

/// Routes one normal form and checks the claim of the bucket it lands in.
pub fn audit_normal_form(form: NormalForm) -> Result<AuditRow> {
    let p = form.p;
    let s = form.reconstruct();
    let witness = find_witness(&form)?;
    let brute = index(&s).integral_index().unwrap_or(0);
    let k1 = witness.k1;
    let (bucket, subcase, claim) = route(&form, k1, witness.m1);

    let mut certificate = None;
    let verdict = 'verdict: {
        let fail = |reason: String| Verdict::Counterexample { reason };
        if first_split(&form) != Some(k1) {
            break 'verdict fail(format!(
                "k1 from ceilings {:?} disagrees with witness scan {k1}",
                first_split(&form)
            ));
        }
        if !eq3_check(&form, k1) {
            break 'verdict fail("(k1 - 1) p (a - 2) < bc fails".into());
        }
        match claim {
            Claim::Exceptional => {
                if brute == 2 {
                    Verdict::Exceptional
                } else {
                    fail(format!("exceptional shape with brute-force index {brute}"))
                }
            }
            Claim::Impossible => fail("configuration ruled out by the argument occurs".into()),
            Claim::NoBranch(why) => fail(format!("no branch applies: {why}")),
            Claim::Witness { k, m } => {
                if !is_witness(&form, k, m) {
                    break 'verdict fail(format!("branch pair (k={k}, m={m}) is not a witness"));
                }
                if norm_prime(&s, m as i64)? != p {
                    break 'verdict fail(format!("norm at m={m} differs from p"));
                }
                certificate = Some(RowCertificate {
                    multiplier: m,
                    source: CertificateSource::BranchWitness,
                });
                if brute == 1 {
                    Verdict::Certified
                } else {
                    fail(format!(
                        "certificate found but brute-force index is {brute}"
                    ))
                }
            }
            Claim::ClosedForm(case) => {
                let w = closed_form_witness(case, p)?;
                certificate = Some(RowCertificate {
                    multiplier: w.m,
                    source: CertificateSource::ClosedForm,
                });
                if brute == 1 {
                    Verdict::Certified
                } else {
                    fail(format!(
                        "closed form holds but brute-force index is {brute}"
                    ))
                }
            }
            Claim::IndexOne { table_only } => {
                if table_only && p > TABLE_PRIMES.1 {
                    break 'verdict fail(format!(
                        "branch needs p <= {} but p = {p}",
                        TABLE_PRIMES.1
                    ));
                }
                certificate = match witness.found {
                    Some(w) => Some(RowCertificate {
                        multiplier: w.m,
                        source: CertificateSource::WitnessSearch,
                    }),
                    None if brute == 1 => Some(RowCertificate {
                        multiplier: index(&s).best_multiplier,
                        source: CertificateSource::BruteForce,
                    }),
                    None => None,
                };
                if brute == 1 && certificate.is_some() {
                    Verdict::Certified
                } else {
                    fail(format!("index 1 claimed, brute-force index is {brute}"))
                }
            }
        }
    };

    Ok(AuditRow {
        p,
        form,
        sequence: s.entries().to_vec(),
        k1,
        bucket,
        subcase: subcase.map(str::to_string),
        witness,
        certificate,
        brute_force_index: brute,
        verdict,
    })
}

/// One row per normal form reached by reducing the enumerated sequences,
/// sorted by `(a, b, c)`.
pub fn audit_proof(p: u64) -> Result<Vec<AuditRow>> {
    prime_order(p, THEOREM_MIN_PRIME)?;
    let mut forms = Vec::new();
    for s in enumerate_h2(p)? {
        if let ReductionOutcome::Normalized { form, .. } = reduce(&s)? {
            forms.push(form);
        }
    }
    forms.sort_unstable();
    forms.dedup();
    forms.into_iter().map(audit_normal_form).collect()
}
