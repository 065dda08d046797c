//! Index of sequences over finite cyclic groups `Z_n`, and exhaustive
//! verification of the index of length-5 minimal zero-sum sequences with a
//! repeated element over groups of prime order.
//!
//! The crate is layered bottom-up:
//!
//! - [`residue`]: residues in `[1, n]`, units and the [`ResidueSequence`] type.
//! - [`index`]: norms, the index with a witnessing multiplier, minimality,
//!   `h(S)` and unit-orbit canonical forms.
//! - [`normal_form`]: the `(a, b, c)` reduction, the `(k, m)` witness search
//!   and the closed-form multipliers.
//! - [`lab`]: per-prime enumeration, classification and the case audit.

pub mod error;
pub mod index;
pub mod lab;
pub mod normal_form;
pub mod residue;

pub use error::{Error, Result};
pub use index::{
    index, is_minimal_zero_sum, is_zero_sum, multiplicity_h, norm_prime, norm_table,
    orbit_canonical, Fraction, IndexCertificate,
};
pub use normal_form::{
    closed_form_witness, eq3_check, eq3_value, find_witness, reduce, ClosedFormCase,
    ClosedFormWitness, NormalForm, NotApplicable, ReductionOutcome, Witness, WitnessResult,
};
pub use residue::{
    is_prime, least_positive_residue, primes_in, scale, units, CyclicOrder, ResidueSequence,
};
