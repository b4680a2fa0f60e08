//! Random compatible pairs for property tests and experiments.
//!
//! A skew-symmetric principal part and random frozen rows are sampled first;
//! `L` is then solved for exactly from `L B̃ = d·[δ_ij]` over the rationals,
//! with free unknowns set to small random integers. Samples without an
//! integral skew-symmetric solution are rejected and redrawn.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{CompatiblePair, IndexSet};
use crate::matrix::IntMatrix;

/// Degree used by every generated pair.
pub const GENERATED_DEGREE: i64 = 2;

/// A random compatible pair with `1 <= |K| <= max_size` and `d = 2`.
pub fn random_compatible_pair<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> CompatiblePair {
    assert!(max_size >= 1, "max_size must be positive");
    loop {
        let n = rng.random_range(1..=max_size);
        let n_ex = rng.random_range(1..=n);
        let indices = IndexSet::standard(n_ex, n - n_ex).expect("standard index set");
        let b = random_exchange_matrix(rng, n, n_ex);
        if let Some(l) = solve_for_l(rng, &indices, &b, GENERATED_DEGREE) {
            if let Ok(pair) = CompatiblePair::new(indices, l, b) {
                return pair;
            }
        }
    }
}

/// `n × n_ex` matrix with skew-symmetric top block and entries in `[-2, 2]`.
pub fn random_exchange_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, n_ex: usize) -> IntMatrix {
    let mut b = IntMatrix::zeros(n, n_ex);
    for i in 0..n_ex {
        for j in i + 1..n_ex {
            let x = rng.random_range(-2..=2);
            b[(i, j)] = x;
            b[(j, i)] = -x;
        }
    }
    for i in n_ex..n {
        for j in 0..n_ex {
            b[(i, j)] = rng.random_range(-2..=2);
        }
    }
    b
}

/// Solves `Σ_t λ_it b_tj = d δ_{i, j}` for an integral skew-symmetric `L`.
pub fn solve_for_l<R: Rng + ?Sized>(
    rng: &mut R,
    indices: &IndexSet,
    b: &IntMatrix,
    d: i64,
) -> Option<IntMatrix> {
    let n = indices.len();
    // unknown u(i, j) for i < j stands for λ_ij
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let unknown = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
    let cols = pairs.len();

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        for (c, &pj) in indices.ex_positions().iter().enumerate() {
            let mut row = vec![BigRational::zero(); cols + 1];
            for t in 0..n {
                let coef = b[(t, c)];
                if coef == 0 || t == i {
                    continue;
                }
                let (u, sign) = if i < t {
                    (unknown(i, t), 1)
                } else {
                    (unknown(t, i), -1)
                };
                row[u] += BigRational::from_integer(BigInt::from(sign * coef));
            }
            row[cols] = BigRational::from_integer(BigInt::from(if i == pj { d } else { 0 }));
            rows.push(row);
        }
    }

    let pivots = row_reduce(&mut rows, cols)?;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();

    for _attempt in 0..4 {
        let mut values = vec![BigRational::zero(); cols];
        for &f in &free {
            values[f] = BigRational::from_integer(BigInt::from(rng.random_range(-2..=2)));
        }
        for (r, &p) in pivots.iter().enumerate() {
            let mut v = rows[r][cols].clone();
            for &f in &free {
                v -= &rows[r][f] * &values[f];
            }
            values[p] = v;
        }
        if values.iter().all(|v| v.is_integer() && v.abs() < BigRational::from_integer(1000.into())) {
            let mut l = IntMatrix::zeros(n, n);
            for (u, &(i, j)) in pairs.iter().enumerate() {
                let x = values[u].to_integer().to_i64()?;
                l[(i, j)] = x;
                l[(j, i)] = -x;
            }
            return Some(l);
        }
        if free.is_empty() {
            break;
        }
    }
    None
}

/// Reduced row echelon form in place; returns pivot columns, or `None` when
/// the system is inconsistent.
fn row_reduce(rows: &mut [Vec<BigRational>], cols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots)
}
