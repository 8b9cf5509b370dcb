//! Exact arithmetic for Q and real quadratic fields Q(a).
//!
//! The generator a of a field of discriminant d is the larger real root of
//! x^2 + eps*x + (eps - d)/4, where eps in {0,1} is d mod 4. Elements are
//! stored on the integral basis {1, a} as (x + y*a)/den with gcd(x,y,den)=1,
//! ideals of Z[a] as lower-triangular Hermite normal forms.

mod element;
mod embed;
mod ideal;
mod primes;
mod unit;
pub(crate) mod zlinalg;

pub use element::{FieldElement, FieldKind, QuadField};
pub use embed::{embed, Embedding};
pub use ideal::OkIdeal;
pub use primes::{split_rational_prime, PrimeIdeal, ResElt, ResidueField, SplitKind};
pub use unit::fundamental_unit;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NfieldError {
    #[error("invalid discriminant {0}: need a positive nonsquare integer congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("the rational field has trivial unit group")]
    TrivialUnitGroup,
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("ideal generators must be integral")]
    NonIntegralGenerator,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("element is not integral")]
    NotIntegral,
    #[error("parse error: {0}")]
    Parse(String),
}
