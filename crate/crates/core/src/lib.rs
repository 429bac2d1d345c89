//! Distance from polynomials to square-free polynomials.
//!
//! Polynomials over the integers, the rationals, GF(2) and prime fields are
//! measured by coefficient length `L`, and the crate builds, searches and
//! certifies square-free neighbours at small `L`-distance.
//!
//! The dense polynomial type [`Poly`] is generic over its scalar; the aliases
//! below fix the scalars used throughout the crate.

pub mod certificate;
pub mod construct;
pub mod error;
pub mod fp;
pub mod gf2;
pub mod neighborhood;
pub mod poly;
pub mod text;
pub mod totient;
pub mod zpoly;

pub use error::{Error, Result};
pub use poly::{Degree, FieldScalar, Poly, Scalar};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Exact rational.
pub type Rational = num_rational::BigRational;
/// Real number used for the analytic bounds.
pub type Real = f64;

/// Polynomial with integer coefficients.
pub type IntPoly = Poly<Int>;
/// Polynomial with exact rational coefficients.
pub type RatPoly = Poly<Rational>;

pub use fp::FpPoly;
pub use gf2::Gf2Poly;
