//! Compatible pairs `(L, B̃)` and their mutation.
//!
//! Every mutation is computed twice, once through the `E`/`F` matrices
//! (`μ_k(L) = EᵀLE`, `μ_k(B̃) = EB̃F`) and once through the entrywise case
//! formulas, and the two results must agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub mod random;

/// `K = K_ex ⊔ K_fr`. Indices are integer labels; the ambient order on `K`
/// (rows of `L` and `B̃`, entries of exponent vectors) is ascending label
/// order, and the columns of `B̃` follow ascending order on `K_ex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IndexSetWire", into = "IndexSetWire")]
pub struct IndexSet {
    labels: Vec<usize>,
    exchangeable: Vec<bool>,
    ex_positions: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct IndexSetWire {
    ex: Vec<usize>,
    #[serde(default)]
    fr: Vec<usize>,
}

impl TryFrom<IndexSetWire> for IndexSet {
    type Error = Error;
    fn try_from(w: IndexSetWire) -> Result<Self> {
        IndexSet::new(&w.ex, &w.fr)
    }
}

impl From<IndexSet> for IndexSetWire {
    fn from(s: IndexSet) -> Self {
        IndexSetWire {
            ex: s.ex_labels(),
            fr: s.fr_labels(),
        }
    }
}

impl IndexSet {
    pub fn new(ex: &[usize], fr: &[usize]) -> Result<Self> {
        if ex.is_empty() {
            return Err(Error::IndexSet("no exchangeable indices".into()));
        }
        let mut labels: Vec<usize> = ex.iter().chain(fr).copied().collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::IndexSet(
                "labels must be distinct and ex/fr disjoint".into(),
            ));
        }
        let exchangeable: Vec<bool> = labels.iter().map(|l| ex.contains(l)).collect();
        let ex_positions = (0..labels.len()).filter(|&p| exchangeable[p]).collect();
        Ok(Self {
            labels,
            exchangeable,
            ex_positions,
        })
    }

    /// `K = {1..n}` with the first `n_ex` labels exchangeable.
    pub fn standard(n_ex: usize, n_fr: usize) -> Result<Self> {
        let ex: Vec<usize> = (1..=n_ex).collect();
        let fr: Vec<usize> = (n_ex + 1..=n_ex + n_fr).collect();
        Self::new(&ex, &fr)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_ex(&self) -> usize {
        self.ex_positions.len()
    }

    /// All labels in ambient order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn ex_labels(&self) -> Vec<usize> {
        self.ex_positions.iter().map(|&p| self.labels[p]).collect()
    }

    pub fn fr_labels(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| !self.exchangeable[p])
            .map(|p| self.labels[p])
            .collect()
    }

    /// Ambient positions of the exchangeable indices, i.e. of `B̃`'s columns.
    pub fn ex_positions(&self) -> &[usize] {
        &self.ex_positions
    }

    pub fn label(&self, pos: usize) -> usize {
        self.labels[pos]
    }

    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn is_exchangeable_at(&self, pos: usize) -> bool {
        self.exchangeable[pos]
    }

    pub fn contains(&self, label: usize) -> bool {
        self.position(label).is_some()
    }

    /// Ambient position and `B̃` column of an exchangeable label.
    pub fn ex_slot(&self, label: usize) -> Result<(usize, usize)> {
        let pos = self.position(label).ok_or(Error::UnknownIndex(label))?;
        let col = self
            .ex_positions
            .binary_search(&pos)
            .map_err(|_| Error::NotExchangeable(label))?;
        Ok((pos, col))
    }

    /// Column of `B̃` for the ambient position `pos`, if exchangeable.
    pub fn column_of(&self, pos: usize) -> Option<usize> {
        self.ex_positions.binary_search(&pos).ok()
    }
}

fn check_shapes(indices: &IndexSet, l: &IntMatrix, b: &IntMatrix) -> Result<()> {
    let n = indices.len();
    if l.rows() != n || l.cols() != n {
        return Err(Error::Shape(format!(
            "L must be {n}x{n}, got {}x{}",
            l.rows(),
            l.cols()
        )));
    }
    check_b_shape(indices, b)?;
    if let Some((i, j)) = l.skew_violation() {
        return Err(Error::NotSkewSymmetric {
            name: "L",
            i: indices.label(i),
            j: indices.label(j),
        });
    }
    Ok(())
}

fn check_b_shape(indices: &IndexSet, b: &IntMatrix) -> Result<()> {
    let (n, m) = (indices.len(), indices.n_ex());
    if b.rows() != n || b.cols() != m {
        return Err(Error::Shape(format!(
            "B must be {n}x{m}, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let ex = indices.ex_positions();
    for (ci, &pi) in ex.iter().enumerate() {
        for (cj, &pj) in ex.iter().enumerate() {
            if b[(pi, cj)] != -b[(pj, ci)] {
                return Err(Error::NotSkewSymmetric {
                    name: "principal part of B",
                    i: indices.label(pi),
                    j: indices.label(pj),
                });
            }
        }
    }
    Ok(())
}

/// Checks `Σ_t λ_it b_tj = δ_ij d` for a single `d > 0` and returns `d`.
/// Violations report the labels `(i, j)` of the first failing entry.
pub fn check_compatible(indices: &IndexSet, l: &IntMatrix, b: &IntMatrix) -> Result<i64> {
    check_shapes(indices, l, b)?;
    let lb = l * b;
    let ex = indices.ex_positions();
    let d = lb[(ex[0], 0)];
    for i in 0..indices.len() {
        for (j, &pj) in ex.iter().enumerate() {
            let expected = if i == pj { d } else { 0 };
            if lb[(i, j)] != expected || d <= 0 {
                return Err(Error::NotCompatible {
                    i: indices.label(i),
                    j: indices.label(pj),
                });
            }
        }
    }
    Ok(d)
}

/// The matrices `E` (`K×K`) and `F` (`K_ex×K_ex`) for mutation in direction `k`.
pub fn ef_matrices(indices: &IndexSet, b: &IntMatrix, k: usize) -> Result<(IntMatrix, IntMatrix)> {
    check_b_shape(indices, b)?;
    let (kp, kc) = indices.ex_slot(k)?;
    let e = IntMatrix::from_fn(indices.len(), indices.len(), |i, j| {
        if j != kp {
            (i == j) as i64
        } else if i == kp {
            -1
        } else {
            (-b[(i, kc)]).max(0)
        }
    });
    let f = IntMatrix::from_fn(indices.n_ex(), indices.n_ex(), |i, j| {
        if i != kc {
            (i == j) as i64
        } else if j == kc {
            -1
        } else {
            b[(kp, j)].max(0)
        }
    });
    Ok((e, f))
}

/// `μ_k(B̃)`, cross-checked between `E B̃ F` and the entrywise formula.
pub fn mutate_b(indices: &IndexSet, b: &IntMatrix, k: usize) -> Result<IntMatrix> {
    let (e, f) = ef_matrices(indices, b, k)?;
    let (kp, kc) = indices.ex_slot(k)?;
    let via_ef = &(&e * b) * &f;
    let direct = IntMatrix::from_fn(b.rows(), b.cols(), |i, j| {
        if i == kp || j == kc {
            -b[(i, j)]
        } else {
            let bik = b[(i, kc)];
            let bkj = b[(kp, j)];
            let sign = if bik < 0 { -1 } else { 1 };
            b[(i, j)] + sign * (bik * bkj).max(0)
        }
    });
    if via_ef != direct {
        return Err(Error::InternalMismatch("mutate_b: EB̃F differs from the case formula"));
    }
    Ok(direct)
}

/// `μ_k(L)`, cross-checked between `EᵀLE` and the entrywise formula.
pub fn mutate_l(indices: &IndexSet, l: &IntMatrix, b: &IntMatrix, k: usize) -> Result<IntMatrix> {
    check_shapes(indices, l, b)?;
    let (e, _) = ef_matrices(indices, b, k)?;
    let (kp, kc) = indices.ex_slot(k)?;
    let via_e = &(&e.transpose() * l) * &e;
    let n = indices.len();
    let neg_part = |t: usize| (-b[(t, kc)]).max(0);
    let direct = IntMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0
        } else if i == kp {
            -l[(kp, j)] + (0..n).map(|t| neg_part(t) * l[(t, j)]).sum::<i64>()
        } else if j == kp {
            -l[(i, kp)] + (0..n).map(|t| neg_part(t) * l[(i, t)]).sum::<i64>()
        } else {
            l[(i, j)]
        }
    });
    if via_e != direct {
        return Err(Error::InternalMismatch("mutate_l: EᵀLE differs from the case formula"));
    }
    Ok(direct)
}

/// A validated compatible pair together with its compatibility degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompatiblePair {
    indices: IndexSet,
    l: IntMatrix,
    b: IntMatrix,
    d: i64,
}

impl CompatiblePair {
    pub fn new(indices: IndexSet, l: IntMatrix, b: IntMatrix) -> Result<Self> {
        let d = check_compatible(&indices, &l, &b)?;
        Ok(Self { indices, l, b, d })
    }

    pub fn indices(&self) -> &IndexSet {
        &self.indices
    }

    pub fn l(&self) -> &IntMatrix {
        &self.l
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn ef_matrices(&self, k: usize) -> Result<(IntMatrix, IntMatrix)> {
        ef_matrices(&self.indices, &self.b, k)
    }

    /// `μ_k(L, B̃)`. The degree `d` is recomputed and must not change.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let l = mutate_l(&self.indices, &self.l, &self.b, k)?;
        let b = mutate_b(&self.indices, &self.b, k)?;
        let d = check_compatible(&self.indices, &l, &b)?;
        if d != self.d {
            return Err(Error::InternalMismatch("mutation changed the compatibility degree"));
        }
        Ok(Self {
            indices: self.indices.clone(),
            l,
            b,
            d,
        })
    }

    /// Relabels exchangeable positions by `perm` (a permutation of the
    /// ambient positions that fixes every frozen position).
    pub(crate) fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.indices.len();
        let mut l = IntMatrix::zeros(n, n);
        let mut b = IntMatrix::zeros(n, self.indices.n_ex());
        for i in 0..n {
            for j in 0..n {
                l[(perm[i], perm[j])] = self.l[(i, j)];
            }
            for (c, &pj) in self.indices.ex_positions().iter().enumerate() {
                let nc = self.indices.column_of(perm[pj]).expect("perm fixes frozen");
                b[(perm[i], nc)] = self.b[(i, c)];
            }
        }
        Self {
            indices: self.indices.clone(),
            l,
            b,
            d: self.d,
        }
    }
}
