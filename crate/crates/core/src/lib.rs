//! Exact arithmetic for skew-symmetric quantum cluster algebras.
//!
//! Coefficients live in `Z[v, v⁻¹]` with `v = q^{1/2}`; every power of `q`
//! is stored as an integer power of `v`. Cluster variables are elements of
//! the quantum torus of the initial seed and are computed by exact left
//! division, so nothing is ever approximated.
//!
//! ```
//! use qcluster::{fixtures, QuantumSeed};
//!
//! let seed = QuantumSeed::initial(fixtures::a2_pair());
//! let s1 = seed.mutate(1).unwrap();
//! assert!(s1.vars()[0].is_bar_invariant());
//! assert_eq!(s1.mutate(1).unwrap(), seed);
//! ```

pub mod coeffs;
pub mod error;
pub mod explore;
pub mod fixtures;
pub mod ledger;
pub mod matrix;
pub mod mutation;
pub mod seed;
pub mod torus;
pub mod wire;

pub use coeffs::VPoly;
pub use error::{Error, Result};
pub use explore::{
    audit_graph, collect_variables, detect_period, mutation_graph, AuditReport, ExploreOptions,
    MutationGraph,
};
pub use ledger::{GramLattice, MonoidalLedger, WeightData};
pub use matrix::IntMatrix;
pub use mutation::{CompatiblePair, IndexSet};
pub use seed::QuantumSeed;
pub use torus::{ExponentVector, QuantumTorus, TorusElement};
