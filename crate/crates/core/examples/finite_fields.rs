//! Factor a Hecke field polynomial modulo a few primes and count real roots
//! of an eigenvalue's characteristic polynomial.
use quartic_fermat::kernel::ffield::{factor_mod_p, PolyDisplay, PrimeField};
use quartic_fermat::kernel::sturm::{count_all_real_roots, roots_within_hasse_interval};
use quartic_fermat::newform::{eigenvalue_char_poly, NewformStore, StoreConfig};

fn main() -> quartic_fermat::Result<()> {
    let store = NewformStore::new(StoreConfig::offline());
    let f = store.fetch_level(2336)?.pop().expect("bundled");
    println!("{}: {}", f.label, f.field_poly());
    for l in [3u64, 5, 17] {
        let field = PrimeField::new(l)?;
        let factors = factor_mod_p(&field, &field.reduce_poly(f.field_poly()));
        let shown: Vec<String> = factors
            .iter()
            .map(|g| format!("({})^{}", PolyDisplay(&g.factor), g.multiplicity))
            .collect();
        println!("mod {l:>2}: {}", shown.join(" "));
    }
    let cp = eigenvalue_char_poly(&f, 3)?;
    println!(
        "a_3: {} real roots, inside the Hasse interval: {}",
        count_all_real_roots(&cp),
        roots_within_hasse_interval(&cp, 3)
    );
    Ok(())
}
