//! Degree bookkeeping for a quantum monoidal seed with one exchangeable index.
//!
//! ```bash
//! cargo run -p qcluster --example monoidal_ledger
//! ```

use qcluster::{fixtures, Result};

pub fn run() -> Result<()> {
    let ledger = fixtures::f3_ledger();
    let report = ledger.check();
    println!("conditions hold: {}", report.is_ok());

    let stats = ledger.pairing_stats(1, 2)?;
    println!("Λ(M1, M2) = {}, Λ̃ = {}, δ = {}", stats.lambda, stats.tilde_lambda, stats.delta);

    let (mutated, step) = ledger.mutate(1)?;
    println!(
        "mutation at 1: Λ(M1, M'1) = {}, δ = {}, (m, m') = ({}, {}), ζ = {:?}",
        step.lambda_k_new, step.delta, step.m, step.m_prime, step.zeta
    );
    print!("new Λ:\n{}", mutated.lambda());

    let w = ledger.decat_verify(1)?;
    println!("q^m [M1][M'1]  = {}", w.lhs1);
    println!("q^m' [M'1][M1] = {}", w.lhs2);

    // changing one entry breaks parity and compatibility
    let mut lambda = ledger.lambda().clone();
    lambda[(0, 1)] = -3;
    lambda[(1, 0)] = 3;
    let broken = qcluster::MonoidalLedger::new(
        ledger.indices().clone(),
        lambda,
        ledger.b().clone(),
        ledger.weights().clone(),
    )?;
    for v in broken.check().violations {
        println!("broken: {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
