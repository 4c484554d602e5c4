//! Exact lattice arithmetic for numerical divisor classes on Enriques surfaces.
//!
//! The crate is `no_std` (it needs `alloc`). Every computation is carried out
//! with arbitrary-precision integers and exact rationals; nothing in here ever
//! touches floating point.
//!
//! Layout:
//!
//! * [`lattice`]: Gram lattices, divisor classes, pairing, profile, divisibility.
//! * [`config`]: dual graphs of (−2)-curves and their ambient numerical lattice.
//! * [`calculus`]: nefness, Weyl reduction, the Φ invariant via isotropic
//!   enumeration, negative definite divisors and cone membership.
//! * [`fano`]: 10-sequences, Fano polarizations, tails and the effectivity
//!   criterion for Reye congruences.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod config;
mod error;
pub mod fano;
pub mod lattice;
pub mod linalg;

pub use error::{Error, Result};

pub use calculus::{
    cone_membership, enumerate_isotropic_slice, is_nef_against, is_negative_definite_divisor,
    is_negative_definite_exhaustive, phi, weyl_reduce, weyl_reduce_with, IsotropicSlice, NegDefOutcome, PhiResult,
    ReductionStep, ReductionTrace, SliceEnumerator,
};
pub use config::{build_ambient, curve_gram, AmbientModel, CurveConfig, Edge};
pub use fano::{
    check_e_membership, fano_from_sequence, hat_transform, pattern_check, reye_criterion, special_triple_check,
    square_from_pattern, validate_sequence, FanoReport, HatReport, IsotropicSequence, PatternReport, ReyeReport,
    SequenceBlock, SequenceReport,
};

pub use lattice::{
    divide_in_lattice, is_primitive, lattice_profile, pair, DivClass, GramLattice, LatticeProfile, Signature,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
