//! Exact Laurent polynomials.
//!
//! [`LaurentPoly`] is a polynomial in one variable `t` whose exponents may be
//! half-integers; exponents are stored doubled so that all arithmetic stays on
//! integers. [`BiLaurent`] is a polynomial in `a` and `z` with integer
//! exponents of either sign. Coefficients are arbitrary-precision integers and
//! zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

mod parse;

pub use parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn insert_term<K: Ord>(terms: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn write_coeff_prefix(f: &mut fmt::Formatter<'_>, c: &BigInt, first: bool, has_var: bool) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else if neg {
        f.write_str(" - ")?;
    } else {
        f.write_str(" + ")?;
    }
    let abs = c.abs();
    if !has_var {
        write!(f, "{abs}")
    } else if abs.is_one() {
        Ok(())
    } else {
        write!(f, "{abs}*")
    }
}

// ---------------------------------------------------------------------------
// One variable, half-integer exponents.

/// Laurent polynomial in `t` with exponents in ½ℤ.
///
/// Keys are `2 × exponent`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

/// A coefficient and doubled `t`-exponent.
pub type JonesTerm = (BigInt, i32);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c · t^(t2/2)`.
    pub fn monomial(c: impl Into<BigInt>, t2: i32) -> Self {
        let mut p = Self::zero();
        insert_term(&mut p.terms, t2, c.into());
        p
    }

    /// Builds a polynomial from `(t2, coefficient)` pairs; repeated keys are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (k, c) in terms {
            insert_term(&mut p.terms, k, c.into());
        }
        p
    }

    /// Integer exponents, lowest first: `from_coeffs(-1, [1, -1])` is `t^-1 - 1`.
    pub fn from_coeffs<I, C>(lowest: i32, coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (2 * (lowest + i as i32), c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(t2, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, t2: i32) -> BigInt {
        self.terms.get(&t2).cloned().unwrap_or_default()
    }

    pub fn min_t2(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_t2(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `c · t^(t2/2)`.
    pub fn scale(&self, c: impl Into<BigInt>, t2: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + t2, v * &c)).collect(),
        }
    }

    /// Substitutes `t ↦ t⁻¹`.
    pub fn invert(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (-k, v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Highest minus lowest exponent, in units of ½.
    pub fn breadth_t2(&self) -> Result<i32, LaurentError> {
        match (self.min_t2(), self.max_t2()) {
            (Some(lo), Some(hi)) => Ok(hi - lo),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    /// Highest minus lowest exponent.
    pub fn breadth_t(&self) -> Result<Ratio<i64>, LaurentError> {
        self.breadth_t2().map(|b| Ratio::new(b as i64, 2))
    }

    /// Coefficients at the lowest and highest exponent.
    pub fn extreme_coefficients(&self) -> Result<(BigInt, BigInt), LaurentError> {
        match (self.terms.iter().next(), self.terms.iter().next_back()) {
            (Some((_, lo)), Some((_, hi))) => Ok((lo.clone(), hi.clone())),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    /// `[c_m t^m, c_n t^n]`: lowest and highest term as `(c, 2·exponent)`.
    pub fn bracket(&self) -> Result<(JonesTerm, JonesTerm), LaurentError> {
        match (self.terms.iter().next(), self.terms.iter().next_back()) {
            (Some((lk, lc)), Some((hk, hc))) => Ok(((lc.clone(), *lk), (hc.clone(), *hk))),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    /// True iff every exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    /// True iff every exponent lies in ½ + ℤ.
    pub fn has_half_integer_exponents(&self) -> bool {
        self.terms.keys().all(|k| k.rem_euclid(2) == 1)
    }

    /// Coefficients strictly alternate in sign over consecutive exponents
    /// with no gaps between the extremes.
    ///
    /// Returns false for the zero polynomial and for exponents that do not
    /// lie on one lattice of step 1.
    pub fn is_alternating(&self) -> bool {
        let (Some(lo), Some(hi)) = (self.min_t2(), self.max_t2()) else {
            return false;
        };
        if (hi - lo) % 2 != 0 || self.terms.len() as i32 != (hi - lo) / 2 + 1 {
            return false;
        }
        self.terms
            .values()
            .zip(self.terms.values().skip(1))
            .all(|(x, y)| x.is_negative() != y.is_negative())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            write_coeff_prefix(f, c, i == 0, *k != 0)?;
            match *k {
                0 => {}
                2 => f.write_str("t")?,
                k if k % 2 == 0 => write!(f, "t^{}", k / 2)?,
                k => write!(f, "t^({k}/2)")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(parse::parse_t(s)?)
    }
}

impl<'a> Add<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.terms {
            insert_term(&mut self.terms, *k, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.terms {
            insert_term(&mut self.terms, *k, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                insert_term(&mut out.terms, k1 + k2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

forward_owned!(LaurentPoly);
forward_owned!(BiLaurent);

#[derive(Serialize, Deserialize)]
struct TTermJson {
    t2: i32,
    c: String,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TTermJson> = self
            .terms
            .iter()
            .map(|(k, c)| TTermJson { t2: *k, c: c.to_string() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<TTermJson>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for t in v {
            let c: BigInt = t.c.parse().map_err(serde::de::Error::custom)?;
            if c.is_zero() {
                return Err(serde::de::Error::custom("zero coefficient"));
            }
            insert_term(&mut p.terms, t.t2, c);
        }
        Ok(p)
    }
}

// ---------------------------------------------------------------------------
// Two variables.

/// Laurent polynomial `Σ c · a^i z^j`.
///
/// Terms are keyed by `(a-exponent, z-exponent)`, which is also the order of
/// the canonical text rendering.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiLaurent {
    terms: BTreeMap<(i32, i32), BigInt>,
}

/// A single term `c · z^z · a^a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    #[serde(with = "bigint_string")]
    pub coeff: BigInt,
    pub z: i32,
    pub a: i32,
}

impl Monomial {
    pub fn new(coeff: impl Into<BigInt>, z: i32, a: i32) -> Self {
        Self { coeff: coeff.into(), z, a }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", BiLaurent::monomial(self.coeff.clone(), self.a, self.z))
    }
}

/// Lowest-z terms of the extreme `a`-degree coefficients: `[c₁ z^h a^m, c₂ z^k a^n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketForm {
    pub low: Monomial,
    pub high: Monomial,
}

impl BracketForm {
    pub fn breadth_a(&self) -> i32 {
        self.high.a - self.low.a
    }
}

impl fmt::Display for BracketForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.low, self.high)
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl BiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    /// `c · a^a · z^z`.
    pub fn monomial(c: impl Into<BigInt>, a: i32, z: i32) -> Self {
        let mut p = Self::zero();
        insert_term(&mut p.terms, (a, z), c.into());
        p
    }

    /// Builds a polynomial from `((a, z), coefficient)` pairs.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((i32, i32), C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (k, c) in terms {
            insert_term(&mut p.terms, k, c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `((a, z), coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, a: i32, z: i32) -> BigInt {
        self.terms.get(&(a, z)).cloned().unwrap_or_default()
    }

    pub fn min_a(&self) -> Option<i32> {
        self.terms.keys().next().map(|k| k.0)
    }

    pub fn max_a(&self) -> Option<i32> {
        self.terms.keys().next_back().map(|k| k.0)
    }

    /// The coefficient `f_i(z)` of `a^i`, as a map `z-exponent → coefficient`.
    pub fn a_coefficient(&self, i: i32) -> BTreeMap<i32, BigInt> {
        self.terms
            .range((i, i32::MIN)..=(i, i32::MAX))
            .map(|(k, c)| (k.1, c.clone()))
            .collect()
    }

    /// Multiplies by `c · a^a · z^z`.
    pub fn scale(&self, c: impl Into<BigInt>, a: i32, z: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| ((k.0 + a, k.1 + z), v * &c))
                .collect(),
        }
    }

    /// Multiplies by `a^a · z^z` without touching coefficients.
    pub fn shift(&self, a: i32, z: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| ((k.0 + a, k.1 + z), v.clone())).collect(),
        }
    }

    /// Substitutes `a ↦ a⁻¹`.
    pub fn invert_a(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| ((-k.0, k.1), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Highest minus lowest `a`-degree.
    pub fn breadth_a(&self) -> Result<i32, LaurentError> {
        match (self.min_a(), self.max_a()) {
            (Some(lo), Some(hi)) => Ok(hi - lo),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    pub fn bracket_form(&self) -> Result<BracketForm, LaurentError> {
        // Keys sort by (a, z): the first key has minimal a and, within it,
        // minimal z. For the top a-degree take the first key in that row.
        let ((la, lz), lc) = self.terms.iter().next().ok_or(LaurentError::ZeroPolynomial)?;
        let hi = self.max_a().ok_or(LaurentError::ZeroPolynomial)?;
        let ((ha, hz), hc) = self
            .terms
            .range((hi, i32::MIN)..)
            .next()
            .ok_or(LaurentError::ZeroPolynomial)?;
        Ok(BracketForm {
            low: Monomial::new(lc.clone(), *lz, *la),
            high: Monomial::new(hc.clone(), *hz, *ha),
        })
    }
}

impl fmt::Display for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((a, z), c)) in self.terms.iter().enumerate() {
            let has_var = *a != 0 || *z != 0;
            write_coeff_prefix(f, c, i == 0, has_var)?;
            let mut wrote = false;
            match *z {
                0 => {}
                1 => {
                    f.write_str("z")?;
                    wrote = true;
                }
                z => {
                    write!(f, "z^{z}")?;
                    wrote = true;
                }
            }
            if *a != 0 {
                if wrote {
                    f.write_str("*")?;
                }
                if *a == 1 {
                    f.write_str("a")?;
                } else {
                    write!(f, "a^{a}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiLaurent({self})")
    }
}

impl FromStr for BiLaurent {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(parse::parse_az(s)?)
    }
}

impl<'a> Add<&'a BiLaurent> for &BiLaurent {
    type Output = BiLaurent;
    fn add(self, rhs: &'a BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&BiLaurent> for BiLaurent {
    fn add_assign(&mut self, rhs: &BiLaurent) {
        for (k, c) in &rhs.terms {
            insert_term(&mut self.terms, *k, c.clone());
        }
    }
}

impl SubAssign<&BiLaurent> for BiLaurent {
    fn sub_assign(&mut self, rhs: &BiLaurent) {
        for (k, c) in &rhs.terms {
            insert_term(&mut self.terms, *k, -c);
        }
    }
}

impl<'a> Sub<&'a BiLaurent> for &BiLaurent {
    type Output = BiLaurent;
    fn sub(self, rhs: &'a BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &BiLaurent {
    type Output = BiLaurent;
    fn neg(self) -> BiLaurent {
        BiLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a BiLaurent> for &BiLaurent {
    type Output = BiLaurent;
    fn mul(self, rhs: &'a BiLaurent) -> BiLaurent {
        let mut out = BiLaurent::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                insert_term(&mut out.terms, (k1.0 + k2.0, k1.1 + k2.1), c1 * c2);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct AzTermJson {
    a: i32,
    z: i32,
    c: String,
}

impl Serialize for BiLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<AzTermJson> = self
            .terms
            .iter()
            .map(|((a, z), c)| AzTermJson { a: *a, z: *z, c: c.to_string() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<AzTermJson>::deserialize(d)?;
        let mut p = BiLaurent::zero();
        for t in v {
            let c: BigInt = t.c.parse().map_err(serde::de::Error::custom)?;
            if c.is_zero() {
                return Err(serde::de::Error::custom("zero coefficient"));
            }
            insert_term(&mut p.terms, (t.a, t.z), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn az(s: &str) -> BiLaurent {
        s.parse().unwrap()
    }

    fn tp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = BiLaurent::monomial(1, 1, 0);
        let q = BiLaurent::monomial(-1, 1, 0);
        assert!((&p + &q).is_zero());
        let z = BiLaurent::monomial(1, 0, 1);
        assert_eq!(&z + &z, BiLaurent::monomial(2, 0, 1));
    }

    #[test]
    fn multiplicative_identity_and_expansion() {
        let p = az("(z - 3z^3 + z^5)a^{-1} + (-z^{-1} + 3z^3)a^2 + 4z^2a^3");
        assert_eq!(&BiLaurent::one() * &p, p);
        let q = tp("t^{1/2} - t^{3/2}");
        assert_eq!(q.pow(2), tp("t - 2t^2 + t^3"));
    }

    #[test]
    fn breadths() {
        assert_eq!(BiLaurent::one().breadth_a(), Ok(0));
        assert_eq!(az("a^2 + a^-3").breadth_a(), Ok(5));
        assert_eq!(BiLaurent::zero().breadth_a(), Err(LaurentError::ZeroPolynomial));
        assert_eq!(tp("t^{1/2}").breadth_t(), Ok(Ratio::new(0, 1)));
        assert_eq!(LaurentPoly::zero().breadth_t2(), Err(LaurentError::ZeroPolynomial));
    }

    #[test]
    fn bracket_form_of_worked_example() {
        let p = az("(z - 3z^3 + z^5)a^{-1} + (-z^{-1} + 3z^3)a^2 + 4z^2a^3");
        let b = p.bracket_form().unwrap();
        assert_eq!(b.low, Monomial::new(1, 1, -1));
        assert_eq!(b.high, Monomial::new(4, 2, 3));
        assert_eq!(b.to_string(), "[z*a^-1, 4*z^2*a^3]");
        let c = BiLaurent::monomial(5, 0, 0).bracket_form().unwrap();
        assert_eq!(c.low, Monomial::new(5, 0, 0));
        assert_eq!(c.high, Monomial::new(5, 0, 0));
        assert!(BiLaurent::zero().bracket_form().is_err());
    }

    #[test]
    fn extreme_coefficients_and_alternation() {
        assert_eq!(
            LaurentPoly::one().extreme_coefficients().unwrap(),
            (BigInt::from(1), BigInt::from(1))
        );
        assert!(tp("1 - t + t^2").is_alternating());
        assert!(!tp("1 + t").is_alternating());
        assert!(!tp("1 - t^2").is_alternating());
        let v = tp("-2+5t-7t^2+11t^3-10t^4+10t^5-9t^6+5t^7-3t^8+t^9");
        assert_eq!(v.extreme_coefficients().unwrap(), (BigInt::from(-2), BigInt::from(1)));
        assert_eq!(v.breadth_t2(), Ok(18));
        // The printed coefficients do alternate in sign.
        assert!(v.is_alternating());
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(BiLaurent::monomial(-2, 5, 2).to_string(), "-2*z^2*a^5");
        assert_eq!(BiLaurent::monomial(1, -6, 3).to_string(), "z^3*a^-6");
        assert_eq!(az("a + a^-1 - z").to_string(), "a^-1 - z + a");
        assert_eq!(tp("t^{-1/2} - 3t^{1/2} + 2").to_string(), "t^(-1/2) + 2 - 3*t^(1/2)");
        assert_eq!(tp("-t^-8 + t").to_string(), "-t^-8 + t");
        assert_eq!(BiLaurent::zero().to_string(), "0");
    }

    #[test]
    fn json_shapes() {
        let p = az("-2z^2a^5");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"[{"a":5,"z":2,"c":"-2"}]"#);
        let v = tp("t^{1/2}");
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[{"t2":1,"c":"1"}]"#);
        let back: LaurentPoly = serde_json::from_str(r#"[{"t2":1,"c":"1"}]"#).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<BiLaurent>(r#"[{"a":1,"z":0,"c":"0"}]"#).is_err());
    }

    fn small_bi() -> impl Strategy<Value = BiLaurent> {
        prop::collection::vec(((-3i32..=3, -3i32..=3), -4i64..=4), 0..6)
            .prop_map(BiLaurent::from_terms)
    }

    fn small_t() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..=6, -4i64..=4), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(p in small_bi(), q in small_bi(), r in small_bi()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
        }

        #[test]
        fn breadth_is_additive_on_leading_monomials(p in small_bi(), i in -3i32..3, j in -3i32..3, c in 1i64..4) {
            prop_assume!(!p.is_zero());
            // A monomial never cancels extreme terms.
            let m = BiLaurent::monomial(c, i, j);
            prop_assert_eq!((&p * &m).breadth_a().unwrap(), p.breadth_a().unwrap());
            let q = &BiLaurent::monomial(1, i, 0) + &BiLaurent::monomial(1, i + 2, j);
            prop_assert_eq!((&p * &q).breadth_a().unwrap(), p.breadth_a().unwrap() + 2);
        }

        #[test]
        fn bracket_form_shifts_under_scaling(p in small_bi(), c in prop::sample::select(vec![-3i64, -1, 2, 5]), i in -4i32..4, j in -4i32..4) {
            prop_assume!(!p.is_zero());
            let b = p.bracket_form().unwrap();
            let s = p.scale(c, i, j).bracket_form().unwrap();
            prop_assert_eq!(s.low, Monomial::new(b.low.coeff * c, b.low.z + j, b.low.a + i));
            prop_assert_eq!(s.high, Monomial::new(b.high.coeff * c, b.high.z + j, b.high.a + i));
        }

        #[test]
        fn render_parse_round_trip(p in small_bi(), v in small_t()) {
            prop_assert_eq!(p.to_string().parse::<BiLaurent>().unwrap(), p);
            prop_assert_eq!(v.to_string().parse::<LaurentPoly>().unwrap(), v);
        }

        #[test]
        fn t_ring_axioms(p in small_t(), q in small_t()) {
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!((&p * &q).invert(), &p.invert() * &q.invert());
        }
    }
}
