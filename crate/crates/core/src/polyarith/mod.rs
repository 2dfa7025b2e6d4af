//! Monomials, sparse multivariate polynomials over `Z/pZ` and `Z`, and
//! dense univariate polynomials over both.

mod intpoly;
mod modpoly;
mod monomial;
mod prime;
mod uniint;
mod unimod;

pub use intpoly::IntPoly;
pub use modpoly::{normal_form, ModPoly};
pub(crate) use modpoly::normal_form_refs;
pub use monomial::{cmp_grevlex, Monomial, MonomialOrder};
pub use prime::{is_prime_u64, nonzero_residue, Prime, PRIME_BITS};
pub(crate) use prime::bigint_is_divisible;
pub use uniint::{uni_int_divrem, uni_int_mul, UniIntPoly};
pub use unimod::{uni_divrem_modp, uni_ext_gcd_modp, uni_gcd_modp, UniModPoly};
