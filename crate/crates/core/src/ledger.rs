//! Integer bookkeeping for quantum monoidal seeds.
//!
//! A [`MonoidalLedger`] stores `Λ_ij = Λ(M_i, M_j)`, the exchange matrix `B̃`
//! and the weights `d_i = wt(M_i)` in a lattice with an even symmetric form.
//! The quasi-commutation matrix of the associated quantum seed is `L = -Λ`.
//! Nothing here constructs modules; only their numeric invariants are kept.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::mutation::{mutate_b, mutate_l, CompatiblePair, IndexSet};
use crate::torus::{ExponentVector, QuantumTorus, TorusElement};

/// The weight lattice: `Z^rank` with the bilinear form given by `G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GramLattice {
    g: IntMatrix,
}

impl GramLattice {
    /// `G` must be symmetric with even diagonal, so `(β, β) ∈ 2Z`.
    pub fn new(g: IntMatrix) -> Result<Self> {
        if g.rows() == 0 || !g.is_symmetric() {
            return Err(Error::Shape("Gram matrix must be nonempty and symmetric".into()));
        }
        if (0..g.rows()).any(|i| g[(i, i)] % 2 != 0) {
            return Err(Error::Shape("Gram matrix must have even diagonal".into()));
        }
        Ok(Self { g })
    }

    pub fn rank(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.g
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += xi * yj * self.g[(i, j)];
            }
        }
        s
    }
}

/// The weights `D = {d_i}`, indexed by ambient position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightData {
    d: Vec<Vec<i64>>,
    lattice: GramLattice,
}

impl WeightData {
    pub fn new(d: Vec<Vec<i64>>, lattice: GramLattice) -> Result<Self> {
        if let Some(bad) = d.iter().position(|w| w.len() != lattice.rank()) {
            return Err(Error::Shape(format!(
                "weight at position {bad} has length {}, lattice rank is {}",
                d[bad].len(),
                lattice.rank()
            )));
        }
        Ok(Self { d, lattice })
    }

    pub fn zero(n: usize, lattice: GramLattice) -> Self {
        let r = lattice.rank();
        Self {
            d: vec![vec![0; r]; n],
            lattice,
        }
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.d
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().flatten().all(|&x| x == 0)
    }

    /// `(d_i, d_j)` for ambient positions.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.lattice.pair(&self.d[i], &self.d[j])
    }

    /// `Σ_i c_i d_i`.
    pub fn weight_of(&self, c: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.lattice.rank()];
        for (ci, di) in c.iter().zip(&self.d) {
            for (o, x) in out.iter_mut().zip(di) {
                *o += ci * x;
            }
        }
        out
    }

    /// `μ_k(D)`: only slot `k` changes, to `ζ = -d_k + Σ_{b_ik>0} b_ik d_i`.
    pub fn mutated(&self, indices: &IndexSet, b: &IntMatrix, k: usize) -> Result<Self> {
        let (kp, kc) = indices.ex_slot(k)?;
        let positive: Vec<i64> = (0..indices.len()).map(|i| b[(i, kc)].max(0)).collect();
        let mut zeta = self.weight_of(&positive);
        for (z, x) in zeta.iter_mut().zip(&self.d[kp]) {
            *z -= x;
        }
        let mut d = self.d.clone();
        d[kp] = zeta;
        Ok(Self {
            d,
            lattice: self.lattice.clone(),
        })
    }
}

/// A failed quantum-monoidal-seed condition, with index labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// `Λ_ij ≠ -Λ_ji`.
    LambdaNotSkew { i: usize, j: usize },
    /// `Λ_ii ≠ 0`.
    LambdaDiagonal { i: usize },
    /// `Λ_ij ≢ (d_i, d_j) mod 2`.
    Parity { i: usize, j: usize },
    /// The principal part of `B̃` is not skew-symmetric.
    PrincipalNotSkew { i: usize, j: usize },
    /// `(-Λ, B̃)` fails compatibility with `d = 2` at `(j, k)`.
    Compatibility { j: usize, k: usize },
    /// `λ_ij - (d_i, d_j) ∉ 2Z` for `L = -Λ`.
    LParity { i: usize, j: usize },
    /// `Σ_i b_ik d_i ≠ 0`.
    WeightBalance { k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LambdaNotSkew { i, j } => write!(f, "Lambda not skew-symmetric at ({i}, {j})"),
            Violation::LambdaDiagonal { i } => write!(f, "Lambda has nonzero diagonal entry at ({i}, {i})"),
            Violation::Parity { i, j } => write!(f, "parity violation at ({i}, {j}): Lambda and (d_i, d_j) differ mod 2"),
            Violation::PrincipalNotSkew { i, j } => write!(f, "principal part of B not skew-symmetric at ({i}, {j})"),
            Violation::Compatibility { j, k } => write!(f, "compatibility with d = 2 fails at ({j}, {k})"),
            Violation::LParity { i, j } => write!(f, "L parity violation at ({i}, {j})"),
            Violation::WeightBalance { k } => write!(f, "weights not balanced along column {k} of B"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidalReport {
    pub violations: Vec<Violation>,
}

impl MonoidalReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairingStats {
    pub lambda: i64,
    pub tilde_lambda: i64,
    pub delta: i64,
}

/// What a ledger mutation in direction `k` certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerMutationReport {
    pub k: usize,
    /// `Λ(M_k, M'_k)`.
    pub lambda_k_new: i64,
    /// `Λ(M'_k, M_k)`.
    pub lambda_new_k: i64,
    /// `δ(M_k, M'_k)`; always 1 on success.
    pub delta: i64,
    /// `Λ̃(M_k, M'_k)`; equals `m_k` on success.
    pub tilde_lambda: i64,
    pub m: i64,
    pub m_prime: i64,
    pub zeta: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalLedger {
    indices: IndexSet,
    lambda: IntMatrix,
    b: IntMatrix,
    weights: WeightData,
}

/// Required compatibility degree for monoidal seeds.
pub const MONOIDAL_DEGREE: i64 = 2;

impl MonoidalLedger {
    /// Validates shapes only; the seed conditions are checked by
    /// [`MonoidalLedger::check`].
    pub fn new(indices: IndexSet, lambda: IntMatrix, b: IntMatrix, weights: WeightData) -> Result<Self> {
        let (n, m) = (indices.len(), indices.n_ex());
        if lambda.rows() != n || lambda.cols() != n {
            return Err(Error::Shape(format!(
                "Lambda must be {n}x{n}, got {}x{}",
                lambda.rows(),
                lambda.cols()
            )));
        }
        if b.rows() != n || b.cols() != m {
            return Err(Error::Shape(format!("B must be {n}x{m}, got {}x{}", b.rows(), b.cols())));
        }
        if weights.weights().len() != n {
            return Err(Error::Shape(format!(
                "expected {n} weights, got {}",
                weights.weights().len()
            )));
        }
        Ok(Self {
            indices,
            lambda,
            b,
            weights,
        })
    }

    pub fn indices(&self) -> &IndexSet {
        &self.indices
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn weights(&self) -> &WeightData {
        &self.weights
    }

    /// `L = -Λ`.
    pub fn l(&self) -> IntMatrix {
        -&self.lambda
    }

    pub fn compatible_pair(&self) -> Result<CompatiblePair> {
        CompatiblePair::new(self.indices.clone(), self.l(), self.b.clone())
    }

    /// Evaluates every quantum-monoidal-seed condition. With all weights zero
    /// the two parity conditions are skipped.
    pub fn check(&self) -> MonoidalReport {
        let n = self.indices.len();
        let lab = |p: usize| self.indices.label(p);
        let lam = &self.lambda;
        let mut v = Vec::new();

        for i in 0..n {
            if lam[(i, i)] != 0 {
                v.push(Violation::LambdaDiagonal { i: lab(i) });
            }
            for j in i + 1..n {
                if lam[(i, j)] != -lam[(j, i)] {
                    v.push(Violation::LambdaNotSkew { i: lab(i), j: lab(j) });
                }
            }
        }

        if !self.weights.is_zero() {
            for i in 0..n {
                for j in 0..n {
                    if (lam[(i, j)] - self.weights.pairing(i, j)) % 2 != 0 {
                        v.push(Violation::Parity { i: lab(i), j: lab(j) });
                    }
                }
            }
        }

        let ex = self.indices.ex_positions();
        for (ci, &pi) in ex.iter().enumerate() {
            for (cj, &pj) in ex.iter().enumerate().skip(ci) {
                if self.b[(pi, cj)] != -self.b[(pj, ci)] {
                    v.push(Violation::PrincipalNotSkew { i: lab(pi), j: lab(pj) });
                }
            }
        }

        for j in 0..n {
            for (c, &pk) in ex.iter().enumerate() {
                let s: i64 = -(0..n).map(|i| lam[(j, i)] * self.b[(i, c)]).sum::<i64>();
                let expected = if j == pk { MONOIDAL_DEGREE } else { 0 };
                if s != expected {
                    v.push(Violation::Compatibility { j: lab(j), k: lab(pk) });
                }
            }
        }

        if !self.weights.is_zero() {
            for i in 0..n {
                for j in 0..n {
                    if (-lam[(i, j)] - self.weights.pairing(i, j)) % 2 != 0 {
                        v.push(Violation::LParity { i: lab(i), j: lab(j) });
                    }
                }
            }
        }

        for (c, &pk) in ex.iter().enumerate() {
            let col: Vec<i64> = (0..n).map(|i| self.b[(i, c)]).collect();
            if self.weights.weight_of(&col).iter().any(|&x| x != 0) {
                v.push(Violation::WeightBalance { k: lab(pk) });
            }
        }

        MonoidalReport { violations: v }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.check();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidLedger(report.violations))
        }
    }

    /// `(Λ, Λ̃, δ)` for the labels `i`, `j`.
    pub fn pairing_stats(&self, i: usize, j: usize) -> Result<PairingStats> {
        let pi = self.indices.position(i).ok_or(Error::UnknownIndex(i))?;
        let pj = self.indices.position(j).ok_or(Error::UnknownIndex(j))?;
        let lambda = self.lambda[(pi, pj)];
        let tilde_lambda = halve(lambda + self.weights.pairing(pi, pj), "tilde_lambda")?;
        let delta = halve(lambda + self.lambda[(pj, pi)], "delta")?;
        Ok(PairingStats {
            lambda,
            tilde_lambda,
            delta,
        })
    }

    /// `ζ = μ_k(D)_k`.
    pub fn mutated_weight(&self, k: usize) -> Result<Vec<i64>> {
        let (kp, _) = self.indices.ex_slot(k)?;
        Ok(self.weights.mutated(&self.indices, &self.b, k)?.d[kp].clone())
    }

    /// `(m_k, m'_k)` with `λ = -Λ`:
    /// `m_k = ½(d_k, ζ) + ½Σ_{b_ik<0} λ_ki b_ik`, `m'_k = ½(d_k, ζ) + ½Σ_{b_ik>0} λ_ki b_ik`.
    pub fn grading_shifts(&self, k: usize) -> Result<(i64, i64)> {
        self.require_valid()?;
        let (kp, kc) = self.indices.ex_slot(k)?;
        let zeta = self.mutated_weight(k)?;
        let dz = self.weights.lattice.pair(&self.weights.d[kp], &zeta);
        let (mut neg, mut pos) = (0, 0);
        for i in 0..self.indices.len() {
            let bik = self.b[(i, kc)];
            let term = -self.lambda[(kp, i)] * bik;
            if bik < 0 {
                neg += term;
            } else if bik > 0 {
                pos += term;
            }
        }
        Ok((halve(dz + neg, "m_k")?, halve(dz + pos, "m'_k")?))
    }

    /// `Σ_{i,j} c_i c'_j Λ_ij`, the Λ-value between two ⊙-monomials.
    pub fn lambda_of_monomials(&self, c: &ExponentVector, c_prime: &ExponentVector) -> Result<i64> {
        let n = self.indices.len();
        if c.len() != n || c_prime.len() != n {
            return Err(Error::Shape(format!("exponent vectors must have length {n}")));
        }
        if let Some(p) = c.first_negative().or(c_prime.first_negative()) {
            return Err(Error::NegativeExponent(p));
        }
        let (x, y) = (c.entries(), c_prime.entries());
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += xi * yj * self.lambda[(i, j)];
            }
        }
        Ok(s)
    }

    /// Mutation in direction `k`: `Λ` via the exchange-sequence relations,
    /// `B̃ -> μ_k(B̃)`, `D -> μ_k(D)`. Fails unless `δ(M_k, M'_k) = 1`,
    /// `Λ̃(M_k, M'_k) = m_k`, `-μ_k(Λ)` agrees with `EᵀLE` for `L = -Λ`,
    /// and the result is again a valid ledger.
    pub fn mutate(&self, k: usize) -> Result<(MonoidalLedger, LedgerMutationReport)> {
        self.require_valid()?;
        let (kp, kc) = self.indices.ex_slot(k)?;
        let n = self.indices.len();
        let lam = &self.lambda;
        let col: Vec<i64> = (0..n).map(|i| self.b[(i, kc)]).collect();

        // Λ(M_j, M'_k) and Λ(M'_k, M_j)
        let into_new = |j: usize| -> i64 {
            -lam[(j, kp)]
                - (0..n)
                    .filter(|&i| col[i] < 0)
                    .map(|i| lam[(j, i)] * col[i])
                    .sum::<i64>()
        };
        let from_new = |j: usize| -> i64 {
            -lam[(kp, j)]
                + (0..n)
                    .filter(|&i| col[i] > 0)
                    .map(|i| lam[(i, j)] * col[i])
                    .sum::<i64>()
        };

        let lambda_k_new = into_new(kp);
        let lambda_new_k = from_new(kp);
        let delta = halve(lambda_k_new + lambda_new_k, "delta(M_k, M'_k)")?;
        if delta != 1 {
            return Err(Error::SimplyLinkedViolation { k, delta });
        }

        let weights = self.weights.mutated(&self.indices, &self.b, k)?;
        let zeta = weights.d[kp].clone();
        let tilde_lambda = halve(
            lambda_k_new + self.weights.lattice.pair(&self.weights.d[kp], &zeta),
            "tilde_lambda(M_k, M'_k)",
        )?;
        let (m, m_prime) = self.grading_shifts(k)?;
        if tilde_lambda != m {
            return Err(Error::CrossCheckMismatch(format!(
                "tilde_lambda(M_k, M'_k) = {tilde_lambda} but m_k = {m}"
            )));
        }

        let mut new_lambda = lam.clone();
        for j in 0..n {
            if j == kp {
                new_lambda[(kp, kp)] = 0;
            } else {
                new_lambda[(j, kp)] = into_new(j);
                new_lambda[(kp, j)] = from_new(j);
            }
        }

        let expected_l = mutate_l(&self.indices, &self.l(), &self.b, k)?;
        if -&new_lambda != expected_l {
            return Err(Error::CrossCheckMismatch(format!(
                "-mu_k(Lambda) = {:?} but E^T L E = {:?}",
                (-&new_lambda).to_rows(),
                expected_l.to_rows()
            )));
        }

        let next = MonoidalLedger {
            indices: self.indices.clone(),
            lambda: new_lambda,
            b: mutate_b(&self.indices, &self.b, k)?,
            weights,
        };
        next.require_valid()?;
        Ok((
            next,
            LedgerMutationReport {
                k,
                lambda_k_new,
                lambda_new_k,
                delta,
                tilde_lambda,
                m,
                m_prime,
                zeta,
            },
        ))
    }

    /// The class `[⊙_i M_i^{⊙a_i}] = v^{(μ,μ)/2} X^a` with `μ = Σ a_i d_i`.
    pub fn monomial_class(&self, torus: &QuantumTorus, a: &ExponentVector) -> Result<TorusElement> {
        let mu = self.weights.weight_of(a.entries());
        let mm = self.weights.lattice.pair(&mu, &mu);
        Ok(torus.monomial(a.clone())?.shift_v(mm / 2))
    }

    /// Checks both decategorified exchange identities at `k` as exact
    /// equations in the torus of `L = -Λ`, using the computed `m_k`, `m'_k`.
    pub fn decat_verify(&self, k: usize) -> Result<DecatWitness> {
        let (m, m_prime) = self.grading_shifts(k)?;
        let mut w = self.decat_verify_with_shifts(k, m, m_prime)?;
        let (_, report) = self.mutate(k)?;
        // the two right-hand terms sit at q^1 and q^0; their gap is δ(M_k, M'_k)
        if report.delta != w.shift_gap {
            return Err(Error::CrossCheckMismatch(format!(
                "shift gap {} differs from delta {}",
                w.shift_gap, report.delta
            )));
        }
        w.delta = Some(report.delta);
        Ok(w)
    }

    /// Like [`MonoidalLedger::decat_verify`] with caller-supplied shifts.
    pub fn decat_verify_with_shifts(&self, k: usize, m: i64, m_prime: i64) -> Result<DecatWitness> {
        self.require_valid()?;
        let (kp, kc) = self.indices.ex_slot(k)?;
        let n = self.indices.len();
        let torus = QuantumTorus::new(self.l())?;

        let plus = ExponentVector::new((0..n).map(|i| self.b[(i, kc)].max(0)).collect());
        let minus = ExponentVector::new((0..n).map(|i| (-self.b[(i, kc)]).max(0)).collect());
        let unit = ExponentVector::unit(n, kp);
        let a1 = &plus - &unit;
        let a2 = &minus - &unit;

        let mk = self.monomial_class(&torus, &unit)?;
        let x_new = torus.monomial(a1)?.checked_add(&torus.monomial(a2)?)?;
        let zeta = self.mutated_weight(k)?;
        let zz = self.weights.lattice.pair(&zeta, &zeta) / 2;
        let scaled_new = x_new.shift_v(zz);

        let class_plus = self.monomial_class(&torus, &plus)?;
        let class_minus = self.monomial_class(&torus, &minus)?;

        let lhs1 = mk.checked_mul(&scaled_new)?.shift_v(2 * m);
        let rhs1 = class_plus.shift_v(2).checked_add(&class_minus)?;
        let lhs2 = scaled_new.checked_mul(&mk)?.shift_v(2 * m_prime);
        let rhs2 = class_plus.checked_add(&class_minus.shift_v(2))?;

        compare(1, &lhs1, &rhs1)?;
        compare(2, &lhs2, &rhs2)?;

        Ok(DecatWitness {
            k,
            m,
            m_prime,
            zeta,
            lhs1,
            rhs1,
            lhs2,
            rhs2,
            shift_gap: 1,
            delta: None,
        })
    }
}

/// Both sides of the two verified identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecatWitness {
    pub k: usize,
    pub m: i64,
    pub m_prime: i64,
    pub zeta: Vec<i64>,
    pub lhs1: TorusElement,
    pub rhs1: TorusElement,
    pub lhs2: TorusElement,
    pub rhs2: TorusElement,
    /// Difference of the `q`-shifts of the two right-hand terms.
    pub shift_gap: i64,
    /// `δ(M_k, M'_k)` from the mutated ledger, when it was computed.
    pub delta: Option<i64>,
}

fn compare(identity: u8, lhs: &TorusElement, rhs: &TorusElement) -> Result<()> {
    if lhs == rhs {
        return Ok(());
    }
    let diff = lhs.checked_sub(rhs)?;
    let (a, _) = diff.leading_term().expect("nonzero difference");
    Err(Error::IdentityFailure {
        identity,
        exponent: a.entries().to_vec(),
        lhs: lhs.coeff(a).to_q_string(),
        rhs: rhs.coeff(a).to_q_string(),
    })
}

fn halve(x: i64, what: &'static str) -> Result<i64> {
    if x % 2 == 0 {
        Ok(x / 2)
    } else {
        Err(Error::NonIntegral(what))
    }
}
