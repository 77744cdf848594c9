//! Coefficients, monomials, polynomials and polynomial matrices.

mod base;
mod field;
mod matrix;
mod monomial;
mod parse;
mod poly;

pub(crate) use base::{check_same_ring, same_ring};
pub use base::{Ring, RingDescriptor};
pub use field::{Field, FieldDescriptor, Fp, Rational, F32003, SUPPORTED_PRIMES};
pub use matrix::{subsets, PolyMatrix, ScalarMatrix, RANK_ATTEMPTS, SAMPLE_BOUND};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use poly::Polynomial;
