//! Reading seed and ledger JSON and writing seed state.
//!
//! ```bash
//! cargo run -p qcluster --example seed_files
//! ```

use qcluster::wire::{SeedFile, SeedState};
use qcluster::{QuantumSeed, Result};

const F3: &str = r#"{
    "indices": {"ex": [1], "fr": [2, 3]},
    "Lambda": [[0, -4, -2], [4, 0, 0], [2, 0, 0]],
    "B": [[0], [1], [-1]],
    "gram": [[2]],
    "weights": {"1": [-1], "2": [-2], "3": [-2]}
}"#;

pub fn run() -> Result<()> {
    let file = SeedFile::parse(F3)?;
    let ledger = file.ledger()?.expect("file carries Lambda");
    println!("ledger conditions hold: {}", ledger.check().is_ok());

    let seed = QuantumSeed::initial(file.pair()?).mutate(1)?;
    let state = serde_json::to_string_pretty(&SeedState::of(&seed)).expect("serializable");
    println!("{state}");

    if let Err(e) = SeedFile::parse("{\"indices\": {\"ex\": [1]},\n \"B\": [[0]] oops}") {
        println!("{e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
