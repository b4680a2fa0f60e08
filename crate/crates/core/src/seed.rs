//! Quantum seeds whose cluster variables live in the fixed initial torus.
//!
//! Mutation never inverts a non-monomial element. With `b⁺ = e_k + a'` and
//! `b⁻ = e_k + a''` (both nonnegative), the exchange relation reads
//!
//! ```text
//! x_k · x'_k = v^{Σ_i a''_i λ_ki} (v² x^{b⁺} + x^{b⁻})
//! ```
//!
//! so the new variable is an exact left quotient by `x_k`.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::mutation::{CompatiblePair, IndexSet};
use crate::torus::{ExponentVector, QuantumTorus, TorusElement};

#[derive(Clone, Debug)]
pub struct QuantumSeed {
    pair: CompatiblePair,
    torus: QuantumTorus,
    vars: Vec<TorusElement>,
    history: Vec<usize>,
}

/// A failed seed invariant, reported with index labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedViolation {
    NotBarInvariant { index: usize },
    QuasiCommutation {
        i: usize,
        j: usize,
        expected: i64,
        found: Option<i64>,
    },
}

impl QuantumSeed {
    /// The initial seed: `x_i = X_i` in the torus of the pair's own `L`.
    pub fn initial(pair: CompatiblePair) -> Self {
        let torus = QuantumTorus::new(pair.l().clone()).expect("compatible pairs have skew L");
        let vars = (0..pair.indices().len()).map(|i| torus.generator(i)).collect();
        Self {
            pair,
            torus,
            vars,
            history: Vec::new(),
        }
    }

    pub fn pair(&self) -> &CompatiblePair {
        &self.pair
    }

    pub fn indices(&self) -> &IndexSet {
        self.pair.indices()
    }

    pub fn l(&self) -> &IntMatrix {
        self.pair.l()
    }

    pub fn b(&self) -> &IntMatrix {
        self.pair.b()
    }

    /// The initial torus all variables are expressed in.
    pub fn torus(&self) -> &QuantumTorus {
        &self.torus
    }

    /// Cluster variables in ambient index order.
    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn var(&self, label: usize) -> Result<&TorusElement> {
        let p = self
            .indices()
            .position(label)
            .ok_or(Error::UnknownIndex(label))?;
        Ok(&self.vars[p])
    }

    /// Mutation directions applied so far, as labels.
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    /// Overwrites a variable. Only meant for tests of the audits.
    #[doc(hidden)]
    pub fn set_var_unchecked(&mut self, pos: usize, x: TorusElement) {
        self.vars[pos] = x;
    }

    /// The quantum cluster monomial `x^c = v^{Σ_{i>j} c_i c_j λ_ij} x_1^{c_1} ⋯ x_n^{c_n}`
    /// for the current `L`, computed in the initial torus.
    pub fn cluster_monomial(&self, c: &ExponentVector) -> Result<TorusElement> {
        if c.len() != self.vars.len() {
            return Err(Error::Shape(format!(
                "exponent vector of length {} for a seed of rank {}",
                c.len(),
                self.vars.len()
            )));
        }
        if let Some(p) = c.first_negative() {
            return Err(Error::NegativeExponent(p));
        }
        let l = self.l();
        let e = c.entries();
        let mut twist = 0;
        for i in 0..e.len() {
            for j in 0..i {
                twist += e[i] * e[j] * l[(i, j)];
            }
        }
        let mut acc = self.torus.one();
        for (x, &ci) in self.vars.iter().zip(e) {
            if ci > 0 {
                acc = acc.checked_mul(&x.pow(ci as u32))?;
            }
        }
        Ok(acc.shift_v(twist))
    }

    /// The exponent vectors `(a', a'')` of the exchange monomials at `k`.
    pub fn exchange_vectors(&self, k: usize) -> Result<(ExponentVector, ExponentVector)> {
        let (kp, kc) = self.indices().ex_slot(k)?;
        let b = self.b();
        let n = self.vars.len();
        let build = |sign: i64| {
            ExponentVector::new(
                (0..n)
                    .map(|i| if i == kp { -1 } else { (sign * b[(i, kc)]).max(0) })
                    .collect(),
            )
        };
        Ok((build(1), build(-1)))
    }

    /// `μ_k` of the seed. Checks afterwards that the new variable is
    /// bar-invariant and quasi-commutes with the others per `μ_k(L)`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let (kp, _) = self.indices().ex_slot(k)?;
        let (a1, a2) = self.exchange_vectors(k)?;
        let unit = ExponentVector::unit(self.vars.len(), kp);
        let plus = self.cluster_monomial(&(&unit + &a1))?;
        let minus = self.cluster_monomial(&(&unit + &a2))?;
        let twist: i64 = a2
            .entries()
            .iter()
            .zip(self.l().row(kp))
            .map(|(a, lam)| a * lam)
            .sum();
        let numerator = plus.shift_v(2).checked_add(&minus)?.shift_v(twist);
        let fresh = self.vars[kp].divide_left_exact(&numerator)?;

        let pair = self.pair.mutate(k)?;
        let mut vars = self.vars.clone();
        vars[kp] = fresh;
        let mut history = self.history.clone();
        history.push(k);
        let next = Self {
            pair,
            torus: self.torus.clone(),
            vars,
            history,
        };

        if !next.vars[kp].is_bar_invariant() {
            return Err(Error::Postcondition {
                k,
                what: "new variable is not bar-invariant".into(),
            });
        }
        for j in 0..next.vars.len() {
            if j == kp {
                continue;
            }
            let expected = next.l()[(kp, j)];
            let found = next.vars[kp].qcommute(&next.vars[j])?;
            if found != Some(expected) {
                return Err(Error::Postcondition {
                    k,
                    what: format!(
                        "quasi-commutation with {}: expected {expected}, found {found:?}",
                        next.indices().label(j)
                    ),
                });
            }
        }
        Ok(next)
    }

    /// Applies a sequence of mutations given by labels.
    pub fn mutate_seq(&self, seq: &[usize]) -> Result<Self> {
        let mut s = self.clone();
        for &k in seq {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Checks bar-invariance of every variable and `x_i x_j = q^{λ_ij} x_j x_i`
    /// for every pair.
    pub fn audit(&self) -> Result<Vec<SeedViolation>> {
        let mut out = Vec::new();
        let labels = self.indices().labels();
        for (i, x) in self.vars.iter().enumerate() {
            if !x.is_bar_invariant() {
                out.push(SeedViolation::NotBarInvariant { index: labels[i] });
            }
        }
        for i in 0..self.vars.len() {
            for j in i + 1..self.vars.len() {
                let expected = self.l()[(i, j)];
                let found = self.vars[i].qcommute(&self.vars[j])?;
                if found != Some(expected) {
                    out.push(SeedViolation::QuasiCommutation {
                        i: labels[i],
                        j: labels[j],
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(out)
    }

    /// The seed with ambient positions moved by `perm` (which must fix every
    /// frozen position). History is kept as is.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut vars = self.vars.clone();
        for (i, x) in self.vars.iter().enumerate() {
            vars[perm[i]] = x.clone();
        }
        Self {
            pair: self.pair.permuted(perm),
            torus: self.torus.clone(),
            vars,
            history: self.history.clone(),
        }
    }

    /// Every permutation of the ambient positions that fixes frozen positions.
    pub fn relabelings(&self) -> Vec<Vec<usize>> {
        let n = self.vars.len();
        let ex = self.indices().ex_positions().to_vec();
        permutations(ex.len())
            .into_iter()
            .map(|p| {
                let mut perm: Vec<usize> = (0..n).collect();
                for (src, &dst) in p.iter().enumerate() {
                    perm[ex[src]] = ex[dst];
                }
                perm
            })
            .collect()
    }

    /// A permutation `σ` of exchangeable positions with `σ(self) == other`.
    pub fn relabeling_to(&self, other: &QuantumSeed) -> Option<Vec<usize>> {
        if self.indices() != other.indices() {
            return None;
        }
        self.relabelings()
            .into_iter()
            .find(|p| self.permuted(p) == *other)
    }
}

/// Seeds are equal when `L`, `B̃` and the variables agree; history is ignored.
impl PartialEq for QuantumSeed {
    fn eq(&self, other: &Self) -> bool {
        self.pair == other.pair && self.vars == other.vars
    }
}

impl Eq for QuantumSeed {}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}
