//! Build the curve attached to (A, B), print its discriminant and the
//! Frobenius traces at a few small primes.
use quartic_fermat::frey::{build_curve, discriminant, frobenius, odd_bad_primes};

fn main() -> quartic_fermat::Result<()> {
    let (a, b) = (2, 3);
    let e = build_curve(a, b)?;
    println!("E_({a},{b}): {e}");
    println!("discriminant: {}", discriminant(&e));
    let bad = odd_bad_primes(&e)?;
    println!("odd bad primes: {bad:?}");
    for t in [3u64, 5, 7, 11, 13, 17, 19, 23, 29] {
        match frobenius(&e, t) {
            Ok(d) => println!(
                "t = {t:>2} {:?}: #E = {}, trace {}",
                d.splitting, d.point_count, d.trace
            ),
            Err(err) => println!("t = {t:>2}: {err}"),
        }
    }
    Ok(())
}
