//! Classify the primes below 200 that are 1 mod 8 and list the ones the
//! sieve can handle.
use quartic_fermat::classifier::classify;

fn main() {
    for q in (17..200u64).step_by(8) {
        let Ok(c) = classify(q) else { continue };
        match c.obstruction() {
            None => println!("{q:>4}  {c}"),
            Some(why) => println!("{q:>4}  {c}: {why}"),
        }
    }
}
