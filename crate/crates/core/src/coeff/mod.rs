//! Exact scalars: Laurent polynomials in u = q^(1/2), their fraction field,
//! and a prime-field specialization used for fast probabilistic ranks.

mod field;
mod laurent;
mod modgcd;
mod parse;
mod prime;
mod scalar;
pub mod upoly;

pub use field::FieldElement;
pub use laurent::LaurentPoly;
pub use parse::parse_field;
pub use prime::{specialize, Fp, PrimeSpec, DEFAULT_GUARD, MODULUS};
pub use scalar::{Backend, Exact, Prime, Scalar};
