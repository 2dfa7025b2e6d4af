//! Rational univariate representations of zero-dimensional polynomial
//! systems over the rationals.
//!
//! The solver reduces the system modulo a stream of 30-bit primes, computes
//! a Gröbner basis and a univariate parametrization of the solutions for
//! each prime, lifts the images with Chinese remaindering and Farey
//! reconstruction, and finally certifies the lifted result by exact
//! substitution into the original equations.

pub mod certify;
pub mod driver;
pub mod error;
pub mod gbasis;
pub mod generators;
pub mod output;
pub mod polyarith;
pub mod quotient;
pub mod realroots;
pub mod rur_modp;
pub mod seqlinalg;
pub mod system;

pub use error::{BadPrimeReason, Result, RurError};
