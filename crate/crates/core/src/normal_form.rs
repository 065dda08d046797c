//! Reduction of a length-5 minimal zero-sum sequence with a repeated element
//! to the parameters `(a, b, c)`, and the search for a multiplier `m` whose
//! scaled norm is exactly `p`.
//!
//! After scaling the repeated element to `1`, a sequence of sum `2p` with
//! its smallest free entry below `p/2` is written as `(1, 1, c, p-b, p-a)`
//! with `2 + c = a + b` and `2 < a <= b < c < p/2`. A pair `(k, m)` with
//!
//! ```text
//! kp/c <= m < kp/b,  gcd(m, p) = 1,  1 <= k <= b,  ma < p
//! ```
//!
//! bounds `||mS||' <= m + m + (mc - kp) + (kp - mb) + (p - ma) = p`, so the
//! index is 1. All interval tests are done by cross-multiplication.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{is_minimal_zero_sum, multiplicity_h, norm_prime, Fraction};
use crate::residue::{mod_inverse, CyclicOrder, ResidueSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub p: u64,
}

impl NormalForm {
    pub fn new(a: u64, b: u64, c: u64, p: u64) -> Result<Self> {
        CyclicOrder::prime(p)?;
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidNormalForm(what.to_string()))
            }
        };
        check(2 + c == a + b, "2 + c = a + b")?;
        check(a > 2, "2 < a")?;
        check(a <= b, "a <= b")?;
        check(b < c, "b < c")?;
        check(2 * c < p, "c < p/2")?;
        Ok(NormalForm { a, b, c, p })
    }

    /// The sequence `(1, 1, c, p - b, p - a)` over `Z_p`.
    pub fn reconstruct(&self) -> ResidueSequence {
        let order = CyclicOrder::new(self.p).expect("validated prime");
        ResidueSequence::new(order, [1, 1, self.c, self.p - self.b, self.p - self.a])
            .expect("entries lie in [1, p]")
    }

    /// `(a, c) = (3, (p-1)/2)`: the parameters of the family
    /// `(1, 1, (p-1)/2, (p+3)/2, p-3)`.
    pub fn is_exceptional_shape(&self) -> bool {
        self.a == 3 && 2 * self.c + 1 == self.p
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a={}, b={}, c={}, p={})",
            self.a, self.b, self.c, self.p
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NotApplicable {
    NotLength5,
    NotH2,
    NotMinimal,
    NotPrimeOrder,
}

impl NotApplicable {
    pub fn tag(&self) -> &'static str {
        match self {
            NotApplicable::NotLength5 => "not-length-5",
            NotApplicable::NotH2 => "not-h2",
            NotApplicable::NotMinimal => "not-minimal",
            NotApplicable::NotPrimeOrder => "not-prime-order",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum ReductionOutcome {
    /// `norm_prime(S, multiplier) = p` for the original sequence.
    DirectCertificate {
        multiplier: u64,
        norm_prime: u64,
    },
    /// `multiplier * S = form.reconstruct()`.
    Normalized {
        form: NormalForm,
        multiplier: u64,
    },
    NotApplicable {
        reason: NotApplicable,
    },
}

/// Reduces a minimal zero-sum sequence of length 5 with `h(S) = 2` over a
/// prime-order group.
///
/// The repeated element (the smallest one, if there are two pairs) is first
/// scaled to `1`. A sum of `p` is certified at once; a sum of `2p` with every
/// free entry above `p/2` is certified by doubling; anything else becomes a
/// [`NormalForm`].
pub fn reduce(s: &ResidueSequence) -> Result<ReductionOutcome> {
    let not_applicable = |reason| Ok(ReductionOutcome::NotApplicable { reason });
    if !s.order().is_prime() {
        return not_applicable(NotApplicable::NotPrimeOrder);
    }
    if s.len() != 5 {
        return not_applicable(NotApplicable::NotLength5);
    }
    if !is_minimal_zero_sum(s)? {
        return not_applicable(NotApplicable::NotMinimal);
    }
    if multiplicity_h(s) != 2 {
        return not_applicable(NotApplicable::NotH2);
    }
    let p = s.n();
    let entries = s.entries();
    let repeated = entries
        .windows(2)
        .find(|w| w[0] == w[1])
        .map(|w| w[0])
        .expect("h(S) = 2");
    let normalizer = mod_inverse(repeated as i64, p).expect("nonzero residue mod prime");
    let t = s.scale(normalizer as i64);
    let x = t.entries();
    debug_assert_eq!(&x[..2], &[1, 1]);
    let (x1, x2, x3) = (x[2], x[3], x[4]);

    let certify = |m: u64| -> Result<ReductionOutcome> {
        let multiplier = (m * normalizer) % p;
        let norm = norm_prime(s, multiplier as i64)?;
        if norm != p {
            return Err(Error::CertificateMismatch(format!(
                "reduce: norm_prime({s}, {multiplier}) = {norm}, expected {p}"
            )));
        }
        Ok(ReductionOutcome::DirectCertificate {
            multiplier,
            norm_prime: norm,
        })
    };

    let sum = t.sum();
    if sum == p {
        return certify(1);
    }
    if sum != 2 * p {
        return Err(Error::CertificateMismatch(format!(
            "reduce: normalized sum {sum} of {t} is neither p nor 2p"
        )));
    }
    if 2 * x1 > p {
        return certify(2);
    }
    let form = NormalForm::new(p - x3, p - x2, x1, p)
        .map_err(|e| Error::CertificateMismatch(format!("reduce: {t} gave no normal form: {e}")))?;
    Ok(ReductionOutcome::Normalized {
        form,
        multiplier: normalizer,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub k: u64,
    pub m: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub found: Option<Witness>,
    /// Smallest `k >= 1` whose interval `[kp/c, kp/b)` holds an integer.
    pub k1: u64,
    /// `ceil(k1 * p / c)`, the least integer in that interval.
    pub m1: u64,
}

#[inline]
fn ceil_div(num: u128, den: u128) -> u128 {
    num.div_ceil(den)
}

/// Least integer in `[kp/c, kp/b)`, if any.
fn interval_start(nf: &NormalForm, k: u64) -> Option<u64> {
    let kp = k as u128 * nf.p as u128;
    let lo = ceil_div(kp, nf.c as u128);
    (lo * (nf.b as u128) < kp).then_some(lo as u64)
}

/// Whether `(k, m)` satisfies every condition of the witness inequality.
pub fn is_witness(nf: &NormalForm, k: u64, m: u64) -> bool {
    let (k, m, a, b, c, p) = (
        k as u128,
        m as u128,
        nf.a as u128,
        nf.b as u128,
        nf.c as u128,
        nf.p as u128,
    );
    (1..=b).contains(&k) && k * p <= m * c && m * b < k * p && m * a < p && m.gcd(&p) == 1
}

/// Scans `k = 1..=b`, and within each `k` the integers of `[kp/c, kp/b)`
/// ascending, returning the first witness. `k1` and `m1` are computed
/// regardless of whether a witness exists.
pub fn find_witness(nf: &NormalForm) -> Result<WitnessResult> {
    let mut first_interval: Option<(u64, u64)> = None;
    let mut found = None;
    'scan: for k in 1..=nf.b {
        let Some(lo) = interval_start(nf, k) else {
            continue;
        };
        first_interval.get_or_insert((k, lo));
        let kp = k as u128 * nf.p as u128;
        let mut m = lo;
        while (m as u128) * (nf.b as u128) < kp {
            if is_witness(nf, k, m) {
                found = Some(Witness { k, m });
                break 'scan;
            }
            m += 1;
        }
    }
    let (k1, m1) = first_interval.ok_or_else(|| {
        Error::CertificateMismatch(format!(
            "find_witness: no k <= b with a nonempty interval for {nf}"
        ))
    })?;
    if let Some(w) = found {
        let s = nf.reconstruct();
        let norm = norm_prime(&s, w.m as i64)?;
        if norm != nf.p {
            return Err(Error::CertificateMismatch(format!(
                "find_witness: (k={}, m={}) gives norm_prime {norm} for {s}, expected {}",
                w.k, w.m, nf.p
            )));
        }
    }
    Ok(WitnessResult { found, k1, m1 })
}

/// `(k1 - 1) p (a - 2) / (bc)` in lowest terms.
pub fn eq3_value(nf: &NormalForm, k1: u64) -> Fraction {
    let num = (k1.saturating_sub(1) as u128) * nf.p as u128 * (nf.a - 2) as u128;
    let den = nf.b as u128 * nf.c as u128;
    let g = num.gcd(&den);
    Fraction {
        num: u64::try_from(num / g).expect("fraction numerator overflow"),
        den: u64::try_from(den / g).expect("fraction denominator overflow"),
    }
}

/// `(k1 - 1) p (a - 2) < bc`.
pub fn eq3_check(nf: &NormalForm, k1: u64) -> bool {
    let lhs = (k1.saturating_sub(1) as u128) * nf.p as u128 * (nf.a - 2) as u128;
    lhs < nf.b as u128 * nf.c as u128
}

/// The four parameter triples with an explicit multiplier `m = floor(p / D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClosedFormCase {
    /// `(a, b, c) = (4, 6, 8)`, `D = 6`, `p > 17`.
    A4B6C8,
    /// `(a, b, c) = (4, 7, 9)`, `D = 7`, `p > 19`.
    A4B7C9,
    /// `(a, b, c) = (3, 4, 5)`, `D = 4`, `p > 15`.
    A3B4C5,
    /// `(a, b, c) = (3, 5, 6)`, `D = 5`, `p > 24`.
    A3B5C6,
}

impl ClosedFormCase {
    pub const ALL: [ClosedFormCase; 4] = [
        ClosedFormCase::A4B6C8,
        ClosedFormCase::A4B7C9,
        ClosedFormCase::A3B4C5,
        ClosedFormCase::A3B5C6,
    ];

    pub fn abc(&self) -> (u64, u64, u64) {
        match self {
            ClosedFormCase::A4B6C8 => (4, 6, 8),
            ClosedFormCase::A4B7C9 => (4, 7, 9),
            ClosedFormCase::A3B4C5 => (3, 4, 5),
            ClosedFormCase::A3B5C6 => (3, 5, 6),
        }
    }

    pub fn divisor(&self) -> u64 {
        match self {
            ClosedFormCase::A4B6C8 => 6,
            ClosedFormCase::A4B7C9 => 7,
            ClosedFormCase::A3B4C5 => 4,
            ClosedFormCase::A3B5C6 => 5,
        }
    }

    /// The case applies for primes strictly above this value.
    pub fn threshold(&self) -> u64 {
        match self {
            ClosedFormCase::A4B6C8 => 17,
            ClosedFormCase::A4B7C9 => 19,
            ClosedFormCase::A3B4C5 => 15,
            ClosedFormCase::A3B5C6 => 24,
        }
    }

    pub fn from_abc(a: u64, b: u64, c: u64) -> Option<Self> {
        Self::ALL.into_iter().find(|case| case.abc() == (a, b, c))
    }

    pub fn normal_form(&self, p: u64) -> Result<NormalForm> {
        let (a, b, c) = self.abc();
        NormalForm::new(a, b, c, p)
    }
}

impl fmt::Display for ClosedFormCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.abc();
        write!(f, "({a},{b},{c})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormWitness {
    pub m: u64,
    pub t: u64,
}

/// Writes `p = D m + t` with `1 <= t <= D - 1` and checks that `m` scales
/// `(1, 1, c, p - b, p - a)` to norm exactly `p`.
pub fn closed_form_witness(case: ClosedFormCase, p: u64) -> Result<ClosedFormWitness> {
    CyclicOrder::prime(p)?;
    if p <= case.threshold() {
        return Err(Error::BelowThreshold {
            case: case.to_string(),
            threshold: case.threshold(),
            p,
        });
    }
    let (m, t) = p.div_rem(&case.divisor());
    let nf = case.normal_form(p)?;
    let s = nf.reconstruct();
    let norm = norm_prime(&s, m as i64)?;
    if t == 0 || norm != p {
        return Err(Error::CertificateMismatch(format!(
            "closed form {case} at p={p}: m={m}, t={t}, norm_prime={norm}"
        )));
    }
    Ok(ClosedFormWitness { m, t })
}
