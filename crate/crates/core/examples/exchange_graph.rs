//! Breadth-first exploration of the exchange graph with audits and DOT export.
//!
//! ```bash
//! cargo run -p qcluster --example exchange_graph
//! ```

use qcluster::explore::graph_stats;
use qcluster::{audit_graph, fixtures, mutation_graph, ExploreOptions, QuantumSeed, Result};

pub fn run() -> Result<()> {
    let a2 = QuantumSeed::initial(fixtures::a2_pair());
    let folded = mutation_graph(&a2, &ExploreOptions { fold: true, ..ExploreOptions::depth(6) })?;
    println!("A2, folded: {:?}", graph_stats(&folded));
    print!("{}", folded.to_dot());

    let kronecker = QuantumSeed::initial(fixtures::kronecker_pair());
    let opts = ExploreOptions { parallel: true, ..ExploreOptions::depth(5) };
    let graph = mutation_graph(&kronecker, &opts)?;
    let report = audit_graph(&graph)?;
    println!("Kronecker, depth 5: {:?}", graph_stats(&graph));
    println!("audit passed: {} ({} variables)", report.passed(), report.variables_checked);

    let capped = ExploreOptions { max_nodes: 5, ..ExploreOptions::depth(10) };
    match mutation_graph(&kronecker, &capped) {
        Err(e) => println!("with a 5-node budget: {e}"),
        Ok(_) => unreachable!("the Kronecker graph is infinite"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
