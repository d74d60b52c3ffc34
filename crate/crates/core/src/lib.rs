//! Exact-arithmetic verification kit for a handful of computable statements
//! around simple supercuspidal representations: formal degrees and the adjoint
//! gamma-factor prediction, affine generic characters, trace-formula main terms
//! via zeta special values, Kloosterman sums over finite fields, the slope of
//! the Kloosterman-type irregular connection, and its p-adic Frobenius structure.
//!
//! Everything is computed exactly (big rationals, cyclotomic numbers, truncated
//! p-adic rings). Floating point appears only in complex embeddings used for
//! inequality checks.

pub mod affine_generic;
pub mod algebra;
pub mod cartan;
pub mod crystal;
pub mod error;
pub mod formal_degree;
pub mod gauge;
pub mod io;
pub mod kloosterman;
pub mod ledger;
pub mod zeta_count;

pub use algebra::{
    CyclotomicNumber, EisensteinLocal, FiniteField, FqElem, IntPoly, LambdaNumber, LaurentPoly,
    Rational,
};
pub use cartan::{CartanData, Series, SimpleType};
pub use error::{Error, Result};
