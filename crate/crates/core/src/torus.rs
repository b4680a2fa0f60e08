//! The based quantum torus attached to a skew-symmetric integer matrix `L`.
//!
//! Elements are finite sums `Σ c_a(v) X^a` over the normalized basis, where
//! `X^a X^b = v^{Σ_{i,j} a_i b_j λ_ij} X^{a+b}`. Storing coordinates in the
//! normalized basis (rather than in ordered products of generators) makes
//! every `X^a` fixed by the bar involution.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeffs::{q_power, VPoly};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// An integer vector indexed by the ambient index set, in its fixed order.
/// The derived ordering is lexicographic, which is compatible with addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn first_negative(&self) -> Option<usize> {
        self.0.iter().position(|&x| x < 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl Add<&ExponentVector> for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), rhs.len());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&ExponentVector> for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), rhs.len());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

/// The algebra `P(L)`: a handle on the skew-symmetric matrix every element
/// of the torus is built against.
#[derive(Clone, Debug)]
pub struct QuantumTorus {
    l: Arc<IntMatrix>,
}

impl QuantumTorus {
    pub fn new(l: IntMatrix) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::Shape(format!(
                "L must be square, got {}x{}",
                l.rows(),
                l.cols()
            )));
        }
        if let Some((i, j)) = l.skew_violation() {
            return Err(Error::NotSkewSymmetric { name: "L", i, j });
        }
        Ok(Self { l: Arc::new(l) })
    }

    pub fn rank(&self) -> usize {
        self.l.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.l
    }

    /// `Σ_{i,j} a_i b_j λ_ij`: the v-exponent in `X^a X^b = v^{..} X^{a+b}`.
    pub fn bilinear(&self, a: &ExponentVector, b: &ExponentVector) -> i64 {
        bilinear(&self.l, a, b)
    }

    /// `Σ_{i>j} a_i a_j λ_ij`: the v-exponent relating `X^a` to the ordered
    /// product `X_1^{a_1} ... X_n^{a_n}`.
    pub fn ordering_exponent(&self, a: &ExponentVector) -> i64 {
        let a = a.entries();
        let mut s = 0;
        for i in 0..a.len() {
            for j in 0..i {
                s += a[i] * a[j] * self.l[(i, j)];
            }
        }
        s
    }

    pub fn zero(&self) -> TorusElement {
        TorusElement {
            ambient: self.l.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> TorusElement {
        self.monomial_unchecked(ExponentVector::zeros(self.rank()), VPoly::one())
    }

    /// The basis element `X^a`.
    pub fn monomial(&self, a: ExponentVector) -> Result<TorusElement> {
        self.check_dim(&a)?;
        Ok(self.monomial_unchecked(a, VPoly::one()))
    }

    /// `c · X^a`.
    pub fn term(&self, a: ExponentVector, c: VPoly) -> Result<TorusElement> {
        self.check_dim(&a)?;
        Ok(self.monomial_unchecked(a, c))
    }

    /// The generator `X_i` (position `i` in the index order).
    pub fn generator(&self, i: usize) -> TorusElement {
        self.monomial_unchecked(ExponentVector::unit(self.rank(), i), VPoly::one())
    }

    /// Builds an element from `(exponent, coefficient)` pairs, summing repeats.
    pub fn element<I>(&self, terms: I) -> Result<TorusElement>
    where
        I: IntoIterator<Item = (ExponentVector, VPoly)>,
    {
        let mut out = self.zero();
        for (a, c) in terms {
            self.check_dim(&a)?;
            out.add_term(a, c);
        }
        Ok(out)
    }

    fn check_dim(&self, a: &ExponentVector) -> Result<()> {
        if a.len() != self.rank() {
            return Err(Error::Shape(format!(
                "exponent vector of length {} in a torus of rank {}",
                a.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    fn monomial_unchecked(&self, a: ExponentVector, c: VPoly) -> TorusElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        TorusElement {
            ambient: self.l.clone(),
            terms,
        }
    }
}

fn bilinear(l: &IntMatrix, a: &ExponentVector, b: &ExponentVector) -> i64 {
    let (a, b) = (a.entries(), b.entries());
    let mut s = 0;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let row = l.row(i);
        s += ai * b.iter().zip(row).map(|(bj, lij)| bj * lij).sum::<i64>();
    }
    s
}

/// An element of a quantum torus in normalized-basis coordinates.
#[derive(Clone)]
pub struct TorusElement {
    ambient: Arc<IntMatrix>,
    terms: BTreeMap<ExponentVector, VPoly>,
}

impl TorusElement {
    pub fn torus(&self) -> QuantumTorus {
        QuantumTorus {
            l: self.ambient.clone(),
        }
    }

    pub fn ambient(&self) -> &IntMatrix {
        &self.ambient
    }

    pub fn same_ambient(&self, other: &TorusElement) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient
    }

    fn check_ambient(&self, other: &TorusElement) -> Result<()> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    fn add_term(&mut self, a: ExponentVector, c: VPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &VPoly)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &ExponentVector) -> VPoly {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &VPoly)> {
        self.terms.iter().next_back()
    }

    /// `Some(a)` if the element is `c · X^a` for a single exponent `a`.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &VPoly)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// True when every coefficient lies in `Z_{≥0}[v^±1]`.
    pub fn has_nonneg_coefficients(&self) -> bool {
        self.terms.values().all(VPoly::is_nonneg)
    }

    /// Largest number of `v`-terms in a single coefficient.
    pub fn max_coeff_len(&self) -> usize {
        self.terms.values().map(VPoly::len).max().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TorusElement) -> Result<TorusElement> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_ambient(other)?;
        let l = &*self.ambient;
        let mut out = TorusElement {
            ambient: self.ambient.clone(),
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            // a^T L, reused against every term of `other`
            let n = a.len();
            let row: Vec<i64> = (0..n)
                .map(|j| (0..n).map(|i| a.entries()[i] * l[(i, j)]).sum())
                .collect();
            for (b, cb) in &other.terms {
                let s: i64 = row.iter().zip(b.entries()).map(|(r, bj)| r * bj).sum();
                out.add_term(a + b, (ca * cb).shift(s));
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &VPoly) -> TorusElement {
        let mut out = TorusElement {
            ambient: self.ambient.clone(),
            terms: BTreeMap::new(),
        };
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x * c);
        }
        out
    }

    /// Multiplication by the central scalar `v^e`.
    pub fn shift_v(&self, e: i64) -> TorusElement {
        TorusElement {
            ambient: self.ambient.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.shift(e)))
                .collect(),
        }
    }

    /// `self^n` for `n >= 0`.
    pub fn pow(&self, n: u32) -> TorusElement {
        let mut acc = self.torus().one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The bar involution: `v -> v^-1` on coefficients, `X^a` fixed. It is an
    /// anti-automorphism of the torus.
    pub fn bar(&self) -> TorusElement {
        TorusElement {
            ambient: self.ambient.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.bar()))
                .collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.terms().all(|(e, x)| c.coeff(-e) == *x))
    }

    /// The unique `C` with `self · C = rhs`.
    ///
    /// Runs leading-term elimination in lexicographic order. Quotient
    /// exponents are confined to the box `[min(B) - min(A), max(B) - max(A)]`
    /// (coordinatewise), which holds for any exact quotient because the torus
    /// is a domain; leaving it means no exact quotient exists.
    pub fn divide_left_exact(&self, rhs: &TorusElement) -> Result<TorusElement> {
        self.check_ambient(rhs)?;
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let mut quot = self.torus().zero();
        if rhs.is_zero() {
            return Ok(quot);
        }
        let (lo_a, hi_a) = self.support_box();
        let (lo_b, hi_b) = rhs.support_box();
        let lo: Vec<i64> = lo_b.iter().zip(&lo_a).map(|(b, a)| b - a).collect();
        let hi: Vec<i64> = hi_b.iter().zip(&hi_a).map(|(b, a)| b - a).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::NotDivisible);
        }

        let (lead_a, lc_a) = self.leading_term().expect("nonzero divisor");
        let (lead_a, lc_a) = (lead_a.clone(), lc_a.clone());
        let mut rem = rhs.clone();
        while let Some((r, cr)) = rem.leading_term() {
            let c = r - &lead_a;
            let inside = c
                .entries()
                .iter()
                .zip(lo.iter().zip(&hi))
                .all(|(x, (l, h))| l <= x && x <= h);
            if !inside {
                return Err(Error::NotDivisible);
            }
            let s = bilinear(&self.ambient, &lead_a, &c);
            let x = cr.shift(-s).div_exact(&lc_a).ok_or(Error::NotDivisible)?;
            let step = self.torus().monomial_unchecked(c.clone(), x.clone());
            rem = rem.checked_sub(&self.checked_mul(&step)?)?;
            quot.add_term(c, x);
        }
        Ok(quot)
    }

    /// The unique `C` with `C · self = rhs`, via `bar(A)·bar(C) = bar(B)`.
    pub fn divide_right_exact(&self, rhs: &TorusElement) -> Result<TorusElement> {
        Ok(self.bar().divide_left_exact(&rhs.bar())?.bar())
    }

    /// The integer `c` with `self · other = q^c · other · self`, if any.
    pub fn qcommute(&self, other: &TorusElement) -> Result<Option<i64>> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(None);
        }
        let ab = self.checked_mul(other)?;
        let ba = other.checked_mul(self)?;
        let (Some((ea, ca)), Some((eb, cb))) = (ab.terms.iter().next(), ba.terms.iter().next())
        else {
            return Ok(None);
        };
        if ea != eb {
            return Ok(None);
        }
        let shift = ca.min_exp().unwrap() - cb.min_exp().unwrap();
        if shift % 2 != 0 {
            return Ok(None);
        }
        Ok((ab == ba.shift_v(shift)).then_some(shift / 2))
    }

    fn support_box(&self) -> (Vec<i64>, Vec<i64>) {
        let n = self.ambient.rows();
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for a in self.terms.keys() {
            for (i, &x) in a.entries().iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        (lo, hi)
    }

    /// Renders the element with each basis vector expanded into an ordered
    /// product of generators, `X^a = v^{Σ_{i>j} a_i a_j λ_ij} X_1^{a_1}...`.
    pub fn to_ordered_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let torus = self.torus();
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let coeff = c.shift(torus.ordering_exponent(a));
                let mono = ordered_monomial(a);
                format_term(&coeff, &mono)
            })
            .collect();
        parts.join(" + ")
    }
}

fn ordered_monomial(a: &ExponentVector) -> String {
    let factors: Vec<String> = a
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| match x {
            1 => format!("X{}", i + 1),
            x => format!("X{}^{}", i + 1, x),
        })
        .collect();
    factors.join("·")
}

fn format_term(c: &VPoly, mono: &str) -> String {
    let coeff = if c.len() == 1 {
        let (e, x) = c.terms().next().unwrap();
        match (x.to_string().as_str(), e) {
            ("1", 0) => String::new(),
            ("1", e) => q_power(e),
            ("-1", 0) if !mono.is_empty() => "-".to_string(),
            ("-1", e) => format!("-{}", q_power(e)),
            (x, _) => format!("{}{}", x, q_power(e)),
        }
    } else {
        format!("({c})")
    };
    match (coeff.is_empty(), mono.is_empty()) {
        (true, true) => "1".to_string(),
        (true, false) => mono.to_string(),
        (false, true) => coeff,
        (false, false) => format!("{coeff}·{mono}"),
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl std::hash::Hash for TorusElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl PartialOrd for TorusElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TorusElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms
            .cmp(&other.terms)
            .then_with(|| self.ambient.cmp(&other.ambient))
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Normalized-basis form: `c·X^[a_1,...,a_n] + ...`, largest exponent first.
impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| format_term(c, &format!("X^{:?}", a.entries())))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add<&TorusElement> for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.checked_add(rhs).expect("ambient mismatch")
    }
}

impl Sub<&TorusElement> for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.checked_sub(rhs).expect("ambient mismatch")
    }
}

impl Mul<&TorusElement> for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.checked_mul(rhs).expect("ambient mismatch")
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        TorusElement {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}
