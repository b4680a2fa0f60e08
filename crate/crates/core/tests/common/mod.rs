//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qcluster::explore::specialize_at_one;
use qcluster::ledger::{GramLattice, WeightData};
use qcluster::{CompatiblePair, ExponentVector, IntMatrix, QuantumSeed, QuantumTorus, TorusElement, VPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `b'_ij = -b_ij` on row/column `k`, else `b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2`.
pub fn oracle_b(pair: &CompatiblePair, k: usize) -> IntMatrix {
    let idx = pair.indices();
    let b = pair.b();
    let kp = idx.position(k).unwrap();
    let kc = idx.ex_labels().iter().position(|&x| x == k).unwrap();
    IntMatrix::from_fn(b.rows(), b.cols(), |i, j| {
        if i == kp || j == kc {
            -b[(i, j)]
        } else {
            let (bik, bkj) = (b[(i, kc)], b[(kp, j)]);
            b[(i, j)] + (bik.abs() * bkj + bik * bkj.abs()) / 2
        }
    })
}

/// New `L` from the exchange monomial `-e_k + Σ [b_ik]_+ e_i` (the positive
/// sign choice; the implementation uses the negative one).
pub fn oracle_l(pair: &CompatiblePair, k: usize) -> IntMatrix {
    let idx = pair.indices();
    let (l, b) = (pair.l(), pair.b());
    let n = idx.len();
    let kp = idx.position(k).unwrap();
    let kc = idx.ex_labels().iter().position(|&x| x == k).unwrap();
    let mut new_k = vec![0i64; n];
    new_k[kp] = -1;
    for i in 0..n {
        if i != kp {
            new_k[i] = b[(i, kc)].max(0);
        }
    }
    let row = |j: usize| -> i64 { (0..n).map(|t| new_k[t] * l[(t, j)]).sum() };
    IntMatrix::from_fn(n, n, |i, j| match (i == kp, j == kp) {
        (true, true) => 0,
        (true, false) => row(j),
        (false, true) => -row(i),
        (false, false) => l[(i, j)],
    })
}

/// Weights that satisfy `Σ_i b_ik d_i = 0`: combinations of the frozen rows
/// of `L`, which are orthogonal to every column of `B̃`.
pub fn balanced_weights(rng: &mut ChaCha8Rng, pair: &CompatiblePair) -> WeightData {
    let rank = rng.random_range(1..=2usize);
    let g = rng.random_range(-1..=1i64);
    let gram = if rank == 1 {
        IntMatrix::from_rows(&[[2]]).unwrap()
    } else {
        IntMatrix::from_rows(&[[2, g], [g, 4]]).unwrap()
    };
    let lattice = GramLattice::new(gram).unwrap();
    let idx = pair.indices();
    let n = idx.len();
    let frozen: Vec<usize> = idx.fr_labels().iter().map(|&f| idx.position(f).unwrap()).collect();
    let coeffs: Vec<Vec<i64>> = (0..rank)
        .map(|_| frozen.iter().map(|_| rng.random_range(-2..=2)).collect())
        .collect();
    let d = (0..n)
        .map(|i| {
            coeffs
                .iter()
                .map(|c| frozen.iter().zip(c).map(|(&f, x)| x * pair.l()[(f, i)]).sum())
                .collect()
        })
        .collect();
    WeightData::new(d, lattice).unwrap()
}

pub fn balanced(w: &WeightData, pair: &CompatiblePair) -> bool {
    (0..pair.b().cols()).all(|c| {
        let col: Vec<i64> = (0..pair.b().rows()).map(|i| pair.b()[(i, c)]).collect();
        w.weight_of(&col).iter().all(|&x| x == 0)
    })
}

pub fn all_quasi_commute(seed: &QuantumSeed) -> bool {
    let vars = seed.vars();
    (0..vars.len()).all(|i| {
        (0..vars.len()).all(|j| vars[i].qcommute(&vars[j]).unwrap() == Some(seed.l()[(i, j)]))
    })
}

pub fn random_torus(rng: &mut ChaCha8Rng) -> QuantumTorus {
    let n = rng.random_range(1..=4usize);
    let mut l = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.random_range(-3..=3);
            l[(i, j)] = x;
            l[(j, i)] = -x;
        }
    }
    QuantumTorus::new(l).unwrap()
}

pub fn random_vpoly(rng: &mut ChaCha8Rng, max_terms: usize) -> VPoly {
    loop {
        let terms: Vec<(i64, BigInt)> = (0..rng.random_range(1..=max_terms))
            .map(|_| (rng.random_range(-4..=4i64), BigInt::from(rng.random_range(-3..=3i64))))
            .collect();
        let p = VPoly::from_terms(terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_exponent(rng: &mut ChaCha8Rng, n: usize) -> ExponentVector {
    ExponentVector::new((0..n).map(|_| rng.random_range(-3..=3)).collect())
}

pub fn random_element(rng: &mut ChaCha8Rng, torus: &QuantumTorus, max_terms: usize) -> TorusElement {
    loop {
        let x = torus
            .element((0..rng.random_range(1..=max_terms)).map(|_| {
                (random_exponent(rng, torus.rank()), random_vpoly(rng, 3))
            }))
            .unwrap();
        if !x.is_zero() {
            return x;
        }
    }
}

/// A commutative seed: exchange matrix (ambient rows × exchangeable columns)
/// and the values of the cluster variables at a fixed point.
#[derive(Clone)]
pub struct Classical {
    pub b: Vec<Vec<i64>>,
    pub ex: Vec<usize>,
    pub x: Vec<BigRational>,
}

impl Classical {
    pub fn mutate(&self, k: usize) -> Self {
        let col = self.ex.iter().position(|&p| p == k).unwrap();
        let n = self.x.len();
        let mut plus = BigRational::one();
        let mut minus = BigRational::one();
        for i in 0..n {
            let b = self.b[i][col];
            if b > 0 {
                plus *= pow(&self.x[i], b);
            } else if b < 0 {
                minus *= pow(&self.x[i], -b);
            }
        }
        let mut x = self.x.clone();
        x[k] = (plus + minus) / &self.x[k];
        let b = (0..n)
            .map(|i| {
                (0..self.ex.len())
                    .map(|j| {
                        if i == k || j == col {
                            -self.b[i][j]
                        } else {
                            let (bik, bkj) = (self.b[i][col], self.b[k][j]);
                            self.b[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
                        }
                    })
                    .collect()
            })
            .collect();
        Classical {
            b,
            ex: self.ex.clone(),
            x,
        }
    }
}

pub fn pow(x: &BigRational, e: i64) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e.abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

pub fn eval(x: &TorusElement, point: &[BigRational]) -> BigRational {
    specialize_at_one(x)
        .iter()
        .map(|(a, c)| {
            a.entries()
                .iter()
                .zip(point)
                .fold(BigRational::from_integer(c.clone()), |acc, (&e, p)| acc * pow(p, e))
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            // positive points: subtraction-free expressions never vanish there
            let num = rng.random_range(1..=9i64);
            let den = rng.random_range(1..=7i64);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

pub fn classical_of(seed: &QuantumSeed, point: Vec<BigRational>) -> Classical {
    let b = seed.b();
    Classical {
        b: (0..b.rows()).map(|i| b.row(i).to_vec()).collect(),
        ex: seed.indices().ex_positions().to_vec(),
        x: point,
    }
}

pub fn assert_agree(seed: &QuantumSeed, classical: &Classical, point: &[BigRational]) {
    for (x, value) in seed.vars().iter().zip(&classical.x) {
        assert_eq!(&eval(x, point), value, "variable {x} disagrees at v = 1");
    }
}
