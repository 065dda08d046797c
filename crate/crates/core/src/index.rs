//! Norms, the index, zero-sum and minimality predicates, `h(S)` and
//! canonical representatives of unit orbits.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{least_positive_residue, units, ResidueSequence};

/// Longest sequence [`is_minimal_zero_sum`] will enumerate subsets for.
pub const MINIMALITY_MAX_LENGTH: usize = 30;

/// An exact non-negative fraction, always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn as_integer(&self) -> Option<u64> {
        self.is_integer().then_some(self.num)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The index of a sequence together with a multiplier attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCertificate {
    /// Smallest unit `m` minimising `norm_prime(S, m)`.
    pub best_multiplier: u64,
    /// `sum |m * n_i|_n` at `best_multiplier`.
    pub best_norm_prime: u64,
    pub order: u64,
}

impl IndexCertificate {
    /// `best_norm_prime / n`, reduced.
    pub fn index_value(&self) -> Fraction {
        Fraction::new(self.best_norm_prime, self.order)
    }

    /// The index when it is an integer, i.e. when the sequence is zero-sum.
    pub fn integral_index(&self) -> Option<u64> {
        self.best_norm_prime
            .is_multiple_of(self.order)
            .then_some(self.best_norm_prime / self.order)
    }
}

#[inline]
fn norm_prime_unchecked(s: &ResidueSequence, m: u64) -> u64 {
    let n = s.n();
    s.entries()
        .iter()
        .map(|&e| least_positive_residue(m as i128 * e as i128, n))
        .sum()
}

/// `||mS||'`: the integer sum of the least positive residues of `m * n_i`.
pub fn norm_prime(s: &ResidueSequence, m: i64) -> Result<u64> {
    let n = s.n();
    let reduced = (m as i128).rem_euclid(n as i128) as u64;
    if reduced.gcd(&n) != 1 {
        return Err(Error::NotAUnit { m, n });
    }
    Ok(norm_prime_unchecked(s, reduced))
}

/// Every unit paired with its norm, ascending by unit.
pub fn norm_table(s: &ResidueSequence) -> Vec<(u64, u64)> {
    units(s.n())
        .into_iter()
        .map(|m| (m, norm_prime_unchecked(s, m)))
        .collect()
}

/// Minimum of `norm_prime(S, m) / n` over all units, ties to the smallest `m`.
///
/// For a zero-sum sequence every norm is a positive multiple of `n`, so the
/// scan stops at the first norm equal to `n`; that multiplier is also the
/// smallest one attaining the minimum.
pub fn index(s: &ResidueSequence) -> IndexCertificate {
    let n = s.n();
    let zero_sum = is_zero_sum(s);
    let mut best: Option<(u64, u64)> = None;
    for m in 1..n {
        if m.gcd(&n) != 1 {
            continue;
        }
        let norm = norm_prime_unchecked(s, m);
        if best.is_none_or(|(_, b)| norm < b) {
            best = Some((m, norm));
            if zero_sum && norm == n {
                break;
            }
        }
    }
    // m = 1 is always a unit, so the scan visits at least one multiplier
    let (best_multiplier, best_norm_prime) = best.expect("no units");
    IndexCertificate {
        best_multiplier,
        best_norm_prime,
        order: n,
    }
}

pub fn is_zero_sum(s: &ResidueSequence) -> bool {
    s.sum().is_multiple_of(s.n())
}

/// Zero-sum with no proper nonempty sub-multiset summing to zero.
///
/// Sub-multisets are enumerated positionally as bitmasks, so repeated
/// entries are treated as distinct positions.
pub fn is_minimal_zero_sum(s: &ResidueSequence) -> Result<bool> {
    let len = s.len();
    if len > MINIMALITY_MAX_LENGTH {
        return Err(Error::MinimalityGuard(len));
    }
    if !is_zero_sum(s) {
        return Ok(false);
    }
    let n = s.n();
    let entries = s.entries();
    let full: u64 = (1u64 << len) - 1;
    for mask in 1..full {
        let mut sum = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            sum += entries[i];
            bits &= bits - 1;
        }
        if sum.is_multiple_of(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `h(S)`: the largest multiplicity of any element.
pub fn multiplicity_h(s: &ResidueSequence) -> usize {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &e in s.entries() {
        *counts.entry(e).or_default() += 1;
    }
    counts.into_values().max().unwrap_or(0)
}

/// The lexicographically smallest sorted entry list in the unit orbit of `S`.
pub fn orbit_canonical(s: &ResidueSequence) -> ResidueSequence {
    units(s.n())
        .into_iter()
        .map(|m| s.scale(m as i64))
        .min_by(|x, y| x.entries().cmp(y.entries()))
        .expect("no units")
}
