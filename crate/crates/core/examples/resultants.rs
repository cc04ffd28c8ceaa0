//! Resultants of x^2 - 2c^2 against a characteristic polynomial and the
//! primes dividing them.
use quartic_fermat::kernel::{prime_divisors, resultant, IntPolynomial};
use quartic_fermat::sieve::trace_polynomial;

fn main() -> quartic_fermat::Result<()> {
    let b = IntPolynomial::from_i64s(&[-1, -2, 1]);
    for c in 0..=2 {
        let r = resultant(&trace_polynomial(c), &b)?;
        let primes = if r == 0.into() {
            "all".to_string()
        } else {
            format!("{:?}", prime_divisors(&r)?.primes)
        };
        println!("c = {c}: Res = {r}, primes {primes}");
    }
    Ok(())
}
