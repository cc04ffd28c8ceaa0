//! Check the mod-17 congruence between the q = 73 survivor and the CM form
//! of level 32, then the valuation argument on a few (A, B).
use quartic_fermat::endgame::{run_endgame, valuation_residue, valuation_witnesses};
use quartic_fermat::newform::{NewformStore, StoreConfig};

fn main() -> quartic_fermat::Result<()> {
    let store = NewformStore::new(StoreConfig::offline());
    let survivor = store
        .fetch_level(2336)?
        .into_iter()
        .find(|f| f.label == "2336.2.a.l")
        .expect("bundled");
    let cm = store.fetch_level(32)?.remove(0);
    let cert = run_endgame(73, 17, &survivor, &cm)?;
    let c = &cert.congruence;
    println!(
        "{} = {} mod 17: {} (bound {}, prime above 17 given by {:?})",
        c.form_a, c.form_b, c.holds, c.bound, c.prime_above_a
    );
    println!("zero pattern at inert t: {}", cert.zero_pattern.holds);
    for (a, b) in valuation_witnesses(73, 4) {
        let v = valuation_residue(a, b, 73, 17)?;
        println!(
            "(A, B) = ({a}, {b}): v = {} at {}, {} at {}",
            v.v_pi, v.pi, v.v_pi_bar, v.pi_bar
        );
    }
    Ok(())
}
