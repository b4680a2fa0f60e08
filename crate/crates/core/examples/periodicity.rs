//! Periods of cyclic mutation sequences.
//!
//! ```bash
//! cargo run -p qcluster --example periodicity
//! ```

use qcluster::{detect_period, fixtures, QuantumSeed, Result};

pub fn run() -> Result<()> {
    let a2 = QuantumSeed::initial(fixtures::a2_pair());
    let kronecker = QuantumSeed::initial(fixtures::kronecker_pair());
    println!("A2, (1 2)*, labeled: {:?}", detect_period(&a2, &[1, 2], 20, false)?);
    println!("A2, (1 2)*, up to relabeling: {:?}", detect_period(&a2, &[1, 2], 20, true)?);
    println!("A2, (1 1)*: {:?}", detect_period(&a2, &[1, 1], 20, false)?);
    println!("Kronecker, (1 2)*, within 40 steps: {:?}", detect_period(&kronecker, &[1, 2], 40, false)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
