//! Exact minimization and height reduction of hyperelliptic curve models
//! over Q and real quadratic fields, with Igusa-Clebsch invariants and a
//! verification harness for the CM-curve tables shipped in `data/`.

pub mod binform;
pub mod nfield;
pub mod screduce;

pub use nfield::{
    embed, fundamental_unit, split_rational_prime, FieldElement, NfieldError, OkIdeal,
    PrimeIdeal, QuadField,
};
