//! Run the sieve for q given on the command line (default 73) with bundled
//! data and print the survivors of each form.
use quartic_fermat::newform::{NewformStore, StoreConfig};
use quartic_fermat::sieve::{sieve_level, DEFAULT_P_MIN, DEFAULT_TSET};

fn main() -> quartic_fermat::Result<()> {
    let q = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(73);
    let store = NewformStore::new(StoreConfig::offline());
    let out = sieve_level(q, &DEFAULT_TSET, DEFAULT_P_MIN, &store)?;
    for r in &out.reports {
        println!("{}: {}", r.label, r.survivors);
    }
    println!("proved for p >= {DEFAULT_P_MIN}: {}", out.proved);
    Ok(())
}
