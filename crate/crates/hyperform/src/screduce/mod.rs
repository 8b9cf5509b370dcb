//! Height reduction: the upper-half-plane covariant of a binary form and
//! reduction of its coefficients under SL_2(Z) (over Q) and
//! GL_2(O_k) x O_k^* (over real quadratic fields).

mod covariant;
mod lll;
mod reduce;
mod roots;

pub use covariant::{covariant, covariant_vector, HPoint};
pub use lll::lll_z;
pub use reduce::{
    reduce_gl2ok, reduce_sl2z, step5_search, unit_walk, ReduceFlags, Reduced,
};
pub use roots::{complex_roots, disc_oracle, rat_f64, DyadicComplex, RootSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScreduceError {
    #[error("root finding did not converge")]
    RootsDiverged,
    #[error("covariant Newton iteration did not converge: {0}")]
    CovariantDiverged(String),
    #[error("operation requires the rational field")]
    NeedsRationalField,
    #[error("operation requires a real quadratic field")]
    NeedsQuadraticField,
    #[error("reduction budget exhausted")]
    BudgetExhausted,
    #[error(transparent)]
    Binform(#[from] crate::binform::BinformError),
    #[error(transparent)]
    Field(#[from] crate::nfield::NfieldError),
}
