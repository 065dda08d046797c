use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order {0} is below 2")]
    OrderTooSmall(u64),
    #[error("group order {0} exceeds 2^31 - 1")]
    OrderTooLarge(u64),
    #[error("entry {entry} is outside [1, {n}]")]
    EntryOutOfRange { entry: i64, n: u64 },
    #[error("sequence is empty")]
    EmptySequence,
    #[error("sequence length {0} exceeds the cap of {max}", max = crate::residue::MAX_LENGTH)]
    SequenceTooLong(usize),
    #[error("multiplier {m} is not a unit modulo {n}")]
    NotAUnit { m: i64, n: u64 },
    #[error("minimality check refuses length {0} (limit {max})", max = crate::index::MINIMALITY_MAX_LENGTH)]
    MinimalityGuard(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} is below the required minimum {min}")]
    PrimeTooSmall { p: u64, min: u64 },
    #[error("prime {p} is outside [{lo}, {hi}]")]
    PrimeOutOfRange { p: u64, lo: u64, hi: u64 },
    #[error("invalid normal form: violates {0}")]
    InvalidNormalForm(String),
    #[error("closed form {case} requires p > {threshold}, got {p}")]
    BelowThreshold {
        case: String,
        threshold: u64,
        p: u64,
    },
    /// A certificate that the algebra guarantees failed to reproduce. This
    /// indicates a bug in the implementation, never a property of the input.
    #[error("internal certificate mismatch: {0}")]
    CertificateMismatch(String),
}
