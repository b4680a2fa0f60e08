//! Small named seeds used throughout the tests and examples.

use crate::ledger::{GramLattice, MonoidalLedger, WeightData};
use crate::matrix::IntMatrix;
use crate::mutation::{CompatiblePair, IndexSet};

fn m<const N: usize>(rows: &[[i64; N]]) -> IntMatrix {
    IntMatrix::from_rows(rows).expect("fixture matrix")
}

/// Type `A₂`: `L = [[0,-2],[2,0]]`, `B = [[0,1],[-1,0]]`, `d = 2`.
pub fn a2_pair() -> CompatiblePair {
    CompatiblePair::new(
        IndexSet::standard(2, 0).unwrap(),
        m(&[[0, -2], [2, 0]]),
        m(&[[0, 1], [-1, 0]]),
    )
    .expect("A2 fixture is compatible")
}

/// The Kronecker quiver: `L = [[0,-1],[1,0]]`, `B = [[0,2],[-2,0]]`, `d = 2`.
pub fn kronecker_pair() -> CompatiblePair {
    CompatiblePair::new(
        IndexSet::standard(2, 0).unwrap(),
        m(&[[0, -1], [1, 0]]),
        m(&[[0, 2], [-2, 0]]),
    )
    .expect("Kronecker fixture is compatible")
}

/// Three indices, one exchangeable: `B̃ = (0, 1, -1)ᵀ`,
/// `Λ = [[0,-4,-2],[4,0,0],[2,0,0]]`, rank-1 lattice with `G = [2]`,
/// weights `d = (-1), (-2), (-2)`.
pub fn f3_ledger() -> MonoidalLedger {
    let lattice = GramLattice::new(m(&[[2]])).unwrap();
    MonoidalLedger::new(
        IndexSet::standard(1, 2).unwrap(),
        m(&[[0, -4, -2], [4, 0, 0], [2, 0, 0]]),
        m(&[[0], [1], [-1]]),
        WeightData::new(vec![vec![-1], vec![-2], vec![-2]], lattice).unwrap(),
    )
    .expect("F3 fixture shapes")
}

/// The compatible pair `(-Λ, B̃)` of [`f3_ledger`].
pub fn f3_pair() -> CompatiblePair {
    f3_ledger().compatible_pair().expect("F3 fixture is compatible")
}

/// `A₂` as a ledger with zero weights: `Λ = [[0,2],[-2,0]]`, `G = [2]`.
pub fn a2_ledger() -> MonoidalLedger {
    let lattice = GramLattice::new(m(&[[2]])).unwrap();
    MonoidalLedger::new(
        IndexSet::standard(2, 0).unwrap(),
        m(&[[0, 2], [-2, 0]]),
        m(&[[0, 1], [-1, 0]]),
        WeightData::zero(2, lattice),
    )
    .expect("A2 ledger shapes")
}
