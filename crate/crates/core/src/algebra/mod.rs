//! Exact arithmetic substrate shared by every other module.

mod cyclotomic;
mod eisenstein;
mod finite_field;
mod laurent;
mod matrix;
mod poly;
mod rational;

pub use cyclotomic::CyclotomicNumber;
pub use eisenstein::{teichmueller, EisensteinLocal, LambdaNumber};
pub use finite_field::{FiniteField, FqElem};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use matrix::RatMatrix;
pub use poly::{IntPoly, RatPoly};
pub use rational::{
    int, is_prime, parse_rational, prime_power, rat, rat_pow, rat_text, BigInt, Rational,
};
