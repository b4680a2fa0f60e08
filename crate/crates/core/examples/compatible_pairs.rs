//! Compatibility degrees, the matrices E and F, and random compatible pairs.
//!
//! ```bash
//! cargo run -p qcluster --example compatible_pairs
//! ```

use qcluster::mutation::check_compatible;
use qcluster::mutation::random::random_compatible_pair;
use qcluster::{fixtures, Result};
use rand::SeedableRng;

pub fn run() -> Result<()> {
    for (name, pair) in [("A2", fixtures::a2_pair()), ("Kronecker", fixtures::kronecker_pair()), ("F3", fixtures::f3_pair())] {
        let d = check_compatible(pair.indices(), pair.l(), pair.b())?;
        let k = pair.indices().ex_labels()[0];
        let (e, f) = pair.ef_matrices(k)?;
        let mutated = pair.mutate(k)?;
        println!("{name}: d = {d}");
        print!("  E for k = {k}:\n{e}  F:\n{f}");
        print!("  mutated L:\n{}  mutated B:\n{}", mutated.l(), mutated.b());
        assert_eq!(mutated.d(), d);
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let pair = random_compatible_pair(&mut rng, 5);
        println!(
            "random pair with {} exchangeable and {} frozen indices, d = {}",
            pair.indices().n_ex(),
            pair.indices().len() - pair.indices().n_ex(),
            pair.d()
        );
        print!("{}", pair.l());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
