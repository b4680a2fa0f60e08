//! The coefficient ring `Z[v, v^-1]` with `v = q^{1/2}`.
//!
//! Exponents are stored in units of `v`, so `q^m` is the exponent `2m`.
//! Coefficients are arbitrary-precision integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A Laurent polynomial in `v` with integer coefficients, kept in canonical
/// form (no zero coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl VPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_power(0)
    }

    /// `v^e`.
    pub fn v_power(e: i64) -> Self {
        Self::monomial(e, BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c.into())
    }

    /// `c * v^e`.
    pub fn monomial(e: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// True for `±v^e`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplication by `v^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect(),
        }
    }

    /// True iff every coefficient is positive; the zero polynomial counts as
    /// nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Specialization at `v = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient `self / divisor` in `Z[v^±1]`, if it exists.
    pub fn div_exact(&self, divisor: &VPoly) -> Option<VPoly> {
        let (&lead_e, lead_c) = divisor.terms.iter().next_back()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let floor = self.min_exp()? - divisor.min_exp()?;
        let mut rem = self.clone();
        let mut quot = VPoly::zero();
        while let Some((&re, rc)) = rem.terms.iter().next_back() {
            let qe = re - lead_e;
            if qe < floor {
                return None;
            }
            let (qc, r) = rc.div_rem(lead_c);
            if !r.is_zero() {
                return None;
            }
            let step = VPoly::monomial(qe, qc);
            rem = &rem - &(divisor * &step);
            quot += &step;
        }
        Some(quot)
    }

    /// Renders the polynomial in powers of `q`, with `v^m` shown as `q^{m/2}`.
    pub fn to_q_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let power = q_power(e);
            match (mag.is_one(), power.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&power),
                (false, true) => out.push_str(&mag.to_string()),
                (false, false) => {
                    out.push_str(&mag.to_string());
                    out.push_str(&power);
                }
            }
        }
        out
    }
}

/// `v^e` written as a power of `q`; empty for `e == 0`.
pub fn q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        2 => "q".to_string(),
        e if e % 2 == 0 => format!("q^{}", e / 2),
        e => format!("q^{{{}/2}}", e),
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_q_string())
    }
}

impl From<i64> for VPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&VPoly> for VPoly {
    fn add_assign(&mut self, rhs: &VPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Add<&VPoly> for &VPoly {
    type Output = VPoly;
    fn add(self, rhs: &VPoly) -> VPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for VPoly {
    type Output = VPoly;
    fn add(mut self, rhs: VPoly) -> VPoly {
        self += &rhs;
        self
    }
}

impl Neg for &VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        VPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        -&self
    }
}

impl Sub<&VPoly> for &VPoly {
    type Output = VPoly;
    fn sub(self, rhs: &VPoly) -> VPoly {
        self + &(-rhs)
    }
}

impl Sub for VPoly {
    type Output = VPoly;
    fn sub(self, rhs: VPoly) -> VPoly {
        &self - &rhs
    }
}

impl Mul<&VPoly> for &VPoly {
    type Output = VPoly;
    fn mul(self, rhs: &VPoly) -> VPoly {
        let mut out = VPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for VPoly {
    type Output = VPoly;
    fn mul(self, rhs: VPoly) -> VPoly {
        &self * &rhs
    }
}

// Wire form: [[v-exponent, "decimal coefficient"], ...] sorted by exponent.
impl Serialize for VPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(&e, c)| (e, c.to_string()))
            .collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(deserializer)?;
        let mut p = VPoly::zero();
        for (e, s) in pairs {
            let c: BigInt = s
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer coefficient {s:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vp(terms: &[(i64, i64)]) -> VPoly {
        VPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn add_disjoint_supports() {
        let p = &VPoly::v_power(2) + &VPoly::v_power(-2);
        assert_eq!(p, vp(&[(2, 1), (-2, 1)]));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn difference_of_squares() {
        let a = vp(&[(1, 1), (0, 1)]);
        let b = vp(&[(1, 1), (0, -1)]);
        assert_eq!(&a * &b, vp(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn bar_negates_exponents() {
        let p = vp(&[(3, 1), (0, 2)]);
        assert_eq!(p.bar(), vp(&[(-3, 1), (0, 2)]));
        assert!(VPoly::zero().bar().is_zero());
    }

    #[test]
    fn nonneg_examples() {
        assert!(vp(&[(2, 1), (-1, 3)]).is_nonneg());
        assert!(!vp(&[(1, 1), (0, -1)]).is_nonneg());
        assert!(VPoly::zero().is_nonneg());
    }

    #[test]
    fn cancellation_is_canonical() {
        let p = vp(&[(1, 3), (1, -3), (0, 1)]);
        assert_eq!(p, VPoly::one());
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = vp(&[(1, 1), (-1, 1)]);
        let b = vp(&[(3, 2), (0, -5), (-2, 7)]);
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!(vp(&[(0, 1)]).div_exact(&vp(&[(1, 1), (0, 1)])), None);
        assert_eq!(vp(&[(0, 3)]).div_exact(&vp(&[(0, 2)])), None);
        assert_eq!(b.div_exact(&VPoly::zero()), None);
    }

    #[test]
    fn q_rendering() {
        assert_eq!(vp(&[(3, 1), (2, -2), (0, 1), (-1, 1)]).to_q_string(), "q^{3/2} - 2q + 1 + q^{-1/2}");
        assert_eq!(vp(&[(-4, 1)]).to_q_string(), "q^-2");
        assert_eq!(VPoly::zero().to_q_string(), "0");
    }

    #[test]
    fn wire_form_is_sorted_pairs() {
        let p = vp(&[(2, 1), (-3, -12)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[[-3,"-12"],[2,"1"]]"#);
        let back: VPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    fn arb_vpoly() -> impl Strategy<Value = VPoly> {
        prop::collection::vec((-6i64..6, -20i64..20), 0..6).prop_map(VPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_vpoly(), b in arb_vpoly(), c in arb_vpoly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a * &VPoly::zero()).is_zero());
        }

        #[test]
        fn bar_is_ring_automorphism(a in arb_vpoly(), b in arb_vpoly()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!(a.bar().bar(), a.clone());
        }

        #[test]
        fn product_divides_back(a in arb_vpoly(), b in arb_vpoly()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&a), Some(b));
        }
    }
}
