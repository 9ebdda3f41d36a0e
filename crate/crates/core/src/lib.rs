//! Exact combinatorics, truncated Toeplitz models and spectral estimators for
//! Dixmier traces of commutator products on irreducible bounded symmetric
//! domains.
//!
//! Rational quantities are computed exactly with [`num_rational::BigRational`];
//! floating point enters only in [`spectral`] and [`geometry`].

pub mod catalog;
pub mod combinatorics;
pub mod conical;
pub mod error;
pub mod geometry;
pub mod models;
pub mod seqclass;
pub mod spectral;
pub mod symbol;
pub mod verify;

pub use catalog::{descriptor_for, peirce1_data, DomainDescriptor, DomainFamily, Peirce1Data};
pub use combinatorics::Partition;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use symbol::{Coeff, SymbolPolynomial};

/// Build an exact rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Nearest `f64` of an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
