//! Quantum seed mutation around the A2 pentagon.
//!
//! ```bash
//! cargo run -p qcluster --example seed_mutation
//! ```

use qcluster::{fixtures, QuantumSeed, Result};

pub fn run() -> Result<()> {
    let mut seed = QuantumSeed::initial(fixtures::a2_pair());
    for step in 1..=5 {
        let k = if step % 2 == 1 { 1 } else { 2 };
        seed = seed.mutate(k)?;
        println!("after {:?}:", seed.history());
        for (label, x) in seed.indices().labels().iter().zip(seed.vars()) {
            println!("  x{label} = {x}");
        }
        assert!(seed.audit()?.is_empty());
    }
    // five steps swap the two initial variables
    let initial = QuantumSeed::initial(fixtures::a2_pair());
    println!("relabeling back to the start: {:?}", seed.relabeling_to(&initial));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
