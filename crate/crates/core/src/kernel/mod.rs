//! Exact integer, polynomial, Gaussian-integer, number-field and
//! finite-field arithmetic.

pub mod factor;
pub mod ffield;
pub mod gaussian;
pub mod numfield;
pub mod poly;
pub mod primeset;
pub mod resultant;
pub mod sturm;

pub use factor::{factorize, is_prime, is_prime_u64, prime_divisors, Factorization, PrimeDivisors};
pub use gaussian::{gaussian_valuation, GaussianInteger};
pub use numfield::{NumberField, NumberFieldElement};
pub use poly::IntPolynomial;
pub use primeset::PrimeSet;
pub use resultant::resultant;

/// Characteristic polynomial of a number field element; see
/// [`NumberFieldElement::char_poly`].
pub fn element_char_poly(e: &NumberFieldElement) -> IntPolynomial {
    e.char_poly()
}
