//! Exact arithmetic over `Z_n` and the sequence type the rest of the crate
//! consumes.
//!
//! Residues are kept in `[1, n]`: the zero element is written as `n`, never
//! `0`. Every sequence is expressed relative to the canonical generator `1`,
//! so changing generator is the same as scaling by a unit.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported group order.
pub const MAX_ORDER: u64 = (1 << 31) - 1;
/// Largest supported sequence length.
pub const MAX_LENGTH: usize = 64;

/// Deterministic trial division. Orders are capped at `2^31 - 1`, so this
/// does at most ~46k divisions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes in the inclusive range `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| is_prime(q)).collect()
}

/// The order of a cyclic group `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CyclicOrder {
    n: u64,
    #[serde(skip)]
    prime: bool,
}

impl CyclicOrder {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        Ok(CyclicOrder {
            n,
            prime: is_prime(n),
        })
    }

    /// Like [`CyclicOrder::new`], but additionally requires `n` to be prime.
    pub fn prime(p: u64) -> Result<Self> {
        let order = Self::new(p)?;
        if !order.prime {
            return Err(Error::NotPrime(p));
        }
        Ok(order)
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.prime
    }
}

impl<'de> Deserialize<'de> for CyclicOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u64,
        }
        let raw = Raw::deserialize(d)?;
        CyclicOrder::new(raw.n).map_err(serde::de::Error::custom)
    }
}

/// `|x|_n`: the representative of `x mod n` in `[1, n]`.
#[inline]
pub fn least_positive_residue(x: i128, n: u64) -> u64 {
    debug_assert!(n >= 1);
    let r = x.rem_euclid(n as i128) as u64;
    if r == 0 {
        n
    } else {
        r
    }
}

/// Integers in `[1, n-1]` coprime to `n`, ascending.
pub fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|m| m.gcd(&n) == 1).collect()
}

/// Inverse of `m` modulo `n`, if `m` is a unit.
pub fn mod_inverse(m: i64, n: u64) -> Option<u64> {
    let m = (m as i128).rem_euclid(n as i128) as i64;
    let ext = m.extended_gcd(&(n as i64));
    if ext.gcd != 1 {
        return None;
    }
    Some(least_positive_residue(ext.x as i128, n))
}

/// A finite multiset of residues over `Z_n`, stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueSequence {
    order: CyclicOrder,
    entries: Vec<u64>,
}

impl ResidueSequence {
    /// Builds a sequence from entries that must already lie in `[1, n]`.
    pub fn new(order: CyclicOrder, entries: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut entries: Vec<u64> = entries.into_iter().collect();
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        if entries.len() > MAX_LENGTH {
            return Err(Error::SequenceTooLong(entries.len()));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > order.n()) {
            return Err(Error::EntryOutOfRange {
                entry: bad as i64,
                n: order.n(),
            });
        }
        entries.sort_unstable();
        Ok(ResidueSequence { order, entries })
    }

    /// Convenience constructor taking the raw group order.
    pub fn from_slice(n: u64, entries: &[u64]) -> Result<Self> {
        Self::new(CyclicOrder::new(n)?, entries.iter().copied())
    }

    /// Builds a sequence from arbitrary integers, reducing each into `[1, n]`.
    pub fn from_integers(order: CyclicOrder, values: &[i64]) -> Result<Self> {
        Self::new(
            order,
            values
                .iter()
                .map(|&v| least_positive_residue(v as i128, order.n())),
        )
    }

    #[inline]
    pub fn order(&self) -> CyclicOrder {
        self.order
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.order.n()
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Plain integer sum of the stored representatives.
    pub fn sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// `mS`: every entry multiplied by `m` and reduced into `[1, n]`.
    pub fn scale(&self, m: i64) -> ResidueSequence {
        let n = self.n();
        let m = (m as i128).rem_euclid(n as i128);
        let mut entries: Vec<u64> = self
            .entries
            .iter()
            .map(|&e| least_positive_residue(m * e as i128, n))
            .collect();
        entries.sort_unstable();
        ResidueSequence {
            order: self.order,
            entries,
        }
    }
}

/// Free-function form of [`ResidueSequence::scale`].
pub fn scale(s: &ResidueSequence, m: i64) -> ResidueSequence {
    s.scale(m)
}

impl fmt::Display for ResidueSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ") mod {}", self.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_positive_residue_examples() {
        assert_eq!(least_positive_residue(7, 5), 2);
        assert_eq!(least_positive_residue(10, 5), 5);
        assert_eq!(least_positive_residue(-3, 5), 2);
        assert_eq!(least_positive_residue(0, 1), 1);
    }

    #[test]
    fn scale_examples() {
        let s = ResidueSequence::from_slice(31, &[1, 1, 15, 17, 28]).unwrap();
        assert_eq!(s.scale(2).entries(), &[2, 2, 3, 25, 30]);
        assert_eq!(s.scale(1), s);
        let t = ResidueSequence::from_slice(31, &[1, 1, 14, 22, 24]).unwrap();
        assert_eq!(t.scale(3).entries(), &[3, 3, 4, 10, 11]);
        // negative and oversized multipliers reduce first
        assert_eq!(t.scale(-28), t.scale(3));
        assert_eq!(t.scale(i64::MAX), t.scale(i64::MAX % 31));
    }

    #[test]
    fn units_examples() {
        assert_eq!(units(5), vec![1, 2, 3, 4]);
        assert_eq!(units(6), vec![1, 5]);
        assert_eq!(units(31), (1..=30).collect::<Vec<_>>());
        assert_eq!(units(2), vec![1]);
    }

    #[test]
    fn inverse() {
        assert_eq!(mod_inverse(2, 31), Some(16));
        assert_eq!(mod_inverse(4, 6), None);
        assert_eq!(mod_inverse(-1, 7), Some(6));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = primes_in(0, 30);
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(MAX_ORDER));
        assert!(!is_prime(25));
        assert!(!is_prime(49));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(CyclicOrder::new(1), Err(Error::OrderTooSmall(1)));
        assert_eq!(
            CyclicOrder::new(MAX_ORDER + 1),
            Err(Error::OrderTooLarge(MAX_ORDER + 1))
        );
        assert_eq!(CyclicOrder::prime(12), Err(Error::NotPrime(12)));
        assert!(matches!(
            ResidueSequence::from_slice(5, &[0, 1]),
            Err(Error::EntryOutOfRange { entry: 0, n: 5 })
        ));
        assert!(matches!(
            ResidueSequence::from_slice(5, &[6]),
            Err(Error::EntryOutOfRange { .. })
        ));
        assert_eq!(
            ResidueSequence::from_slice(5, &[]),
            Err(Error::EmptySequence)
        );
        assert_eq!(
            ResidueSequence::from_slice(5, &[1; 65]),
            Err(Error::SequenceTooLong(65))
        );
    }

    #[test]
    fn entries_are_sorted_and_zero_is_n() {
        let order = CyclicOrder::new(5).unwrap();
        let s = ResidueSequence::from_integers(order, &[4, 10, -1, 7]).unwrap();
        assert_eq!(s.entries(), &[2, 4, 4, 5]);
        assert_eq!(s, ResidueSequence::from_slice(5, &[5, 4, 2, 4]).unwrap());
    }
}
