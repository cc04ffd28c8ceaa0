//! Load a level from the bundled snapshot (or a cache directory given as the
//! first argument) and print each form's Hecke field and first eigenvalues.
use quartic_fermat::newform::{eigenvalue_char_poly, NewformStore, StoreConfig};

fn main() -> quartic_fermat::Result<()> {
    let mut config = StoreConfig::offline();
    config.cache_dir = std::env::args().nth(1).map(Into::into);
    let store = NewformStore::new(config);
    for f in store.fetch_level(2336)? {
        println!(
            "{} (dim {}): field {}",
            f.label,
            f.dimension,
            f.field_poly()
        );
        for t in [3, 7] {
            println!("  char poly of a_{t}: {}", eigenvalue_char_poly(&f, t)?);
        }
    }
    Ok(())
}
