//! Exact rationals, lattice vectors and the value group.
//!
//! Nothing in this crate uses floating point. Rationals are always kept in
//! lowest terms with a positive denominator (guaranteed by `BigRational`).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rat {
        let d = denom.into();
        assert!(!d.is_zero(), "zero denominator");
        Rat(BigRational::new(numer.into(), d))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// The integer value, if this rational is integral.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn as_bigrational(&self) -> &BigRational {
        &self.0
    }

    /// Lossy conversion, only for rendering (SVG coordinates).
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Rat {
        Rat(r)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::InvalidValue(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => BigInt::from_str(s).map(Rat::from_int).map_err(|_| bad()),
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rat::new(p, q))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"p/q\", \"p\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                Rat::from_str(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat::from_int(v))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);
rat_binop!(Div, div, /);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// The value group `(1/d)·Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ValueGroup {
    denominator_bound: u64,
}

impl ValueGroup {
    pub fn new(denominator_bound: u64) -> Result<ValueGroup> {
        if denominator_bound == 0 {
            return Err(Error::InvalidValue("value group denominator must be positive".into()));
        }
        Ok(ValueGroup { denominator_bound })
    }

    /// Gamma = Z.
    pub fn integers() -> ValueGroup {
        ValueGroup { denominator_bound: 1 }
    }

    pub fn denominator(&self) -> u64 {
        self.denominator_bound
    }

    /// The positive generator `1/d`.
    pub fn generator(&self) -> Rat {
        Rat::new(1, self.denominator_bound)
    }

    pub fn contains(&self, r: &Rat) -> bool {
        (r * Rat::from_int(self.denominator_bound)).is_integer()
    }

    /// Smallest value group of this form containing both.
    pub fn join(&self, other: &ValueGroup) -> ValueGroup {
        ValueGroup { denominator_bound: self.denominator_bound.lcm(&other.denominator_bound) }
    }

    /// Smallest value group of this form containing `self` and every given rational.
    pub fn enlarged_by<'a>(&self, values: impl IntoIterator<Item = &'a Rat>) -> ValueGroup {
        let mut d = BigInt::from(self.denominator_bound);
        for r in values {
            d = d.lcm(r.denom());
        }
        ValueGroup { denominator_bound: d.to_u64().expect("value group denominator overflow") }
    }
}

impl Default for ValueGroup {
    fn default() -> Self {
        ValueGroup::integers()
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator_bound == 1 {
            write!(f, "Z")
        } else {
            write!(f, "(1/{})Z", self.denominator_bound)
        }
    }
}

/// An integral vector: a character `u` in `M` or an integral point of `N`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> LatticeVector {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> LatticeVector {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> LatticeVector {
        LatticeVector(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> LatticeVector {
        let mut v = LatticeVector::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of all coordinates (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content; the zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticeVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn to_qvector(&self) -> QVector {
        QVector(self.0.iter().map(|c| Rat::from_int(c.clone())).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Sum of absolute values of the coordinates.
    pub fn l1(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).sum()
    }

    /// Drops the last coordinate.
    pub fn truncate_last(&self) -> LatticeVector {
        LatticeVector(self.0[..self.0.len() - 1].to_vec())
    }

    /// Appends a coordinate.
    pub fn extended(&self, last: BigInt) -> LatticeVector {
        let mut c = self.0.clone();
        c.push(last);
        LatticeVector(c)
    }

    pub fn last(&self) -> &BigInt {
        self.0.last().expect("empty lattice vector")
    }
}

impl std::ops::Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Rat> = Vec::deserialize(deserializer)?;
        raw.into_iter()
            .map(|r| r.to_integer().ok_or_else(|| de::Error::custom(format!("non-integer lattice coordinate {r}"))))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(LatticeVector)
    }
}

/// A rational point of `N_Q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(Vec<Rat>);

impl QVector {
    pub fn new(coords: Vec<Rat>) -> QVector {
        QVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> QVector {
        QVector(coords.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn zero(n: usize) -> QVector {
        QVector(vec![Rat::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> QVector {
        QVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &QVector) -> Rat {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_gamma_rational(&self, g: &ValueGroup) -> bool {
        self.0.iter().all(|c| g.contains(c))
    }

    /// Writes `self = ell * w` with `w` primitive integral and `ell > 0`.
    /// Returns `None` for the zero vector.
    pub fn primitive_decomposition(&self) -> Option<(Rat, LatticeVector)> {
        if self.is_zero() {
            return None;
        }
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = self.0.iter().map(|c| (c * Rat::from_int(l.clone())).to_integer().unwrap()).collect();
        let v = LatticeVector(scaled);
        let g = v.content();
        Some((Rat::new(g.clone(), l), LatticeVector(v.0.iter().map(|c| c / &g).collect())))
    }
}

impl std::ops::Index<usize> for QVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QVector {
    type Err = Error;

    /// Parses `"1/2,3"` or `"(1/2, 3)"`.
    fn from_str(s: &str) -> Result<QVector> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(QVector(Vec::new()));
        }
        s.split(',').map(Rat::from_str).collect::<Result<Vec<_>>>().map(QVector)
    }
}

/// The canonical pairing `<u, v> = sum u_i v_i`.
pub fn pairing(u: &LatticeVector, v: &QVector) -> Result<Rat> {
    if u.len() != v.len() {
        return Err(Error::Dimension { expected: u.len(), found: v.len() });
    }
    Ok(u.coords().iter().zip(v.coords()).map(|(a, b)| b * Rat::from_int(a.clone())).sum())
}

pub fn is_gamma_rational(v: &QVector, g: &ValueGroup) -> bool {
    v.is_gamma_rational(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn pairing_examples() {
        let u = LatticeVector::from_i64(&[1, 0]);
        let v = QVector::new(vec![q("3/2"), q("5")]);
        assert_eq!(pairing(&u, &v).unwrap(), q("3/2"));

        let zero = LatticeVector::zero(3);
        let w = QVector::new(vec![q("7/3"), q("-2"), q("11/5")]);
        assert_eq!(pairing(&zero, &w).unwrap(), Rat::zero());

        let u = LatticeVector::from_i64(&[1, 1]);
        let v = QVector::from_i64(&[-1, -1]);
        assert_eq!(pairing(&u, &v).unwrap(), q("-2"));
    }

    #[test]
    fn pairing_length_mismatch() {
        let u = LatticeVector::from_i64(&[1, 0]);
        let v = QVector::from_i64(&[1]);
        assert_eq!(pairing(&u, &v), Err(Error::Dimension { expected: 2, found: 1 }));
    }

    #[test]
    fn gamma_rationality() {
        let half = ValueGroup::new(2).unwrap();
        assert!(is_gamma_rational(&QVector::new(vec![q("1/2"), q("1")]), &half));
        assert!(!is_gamma_rational(&QVector::new(vec![q("1/3"), q("0")]), &ValueGroup::integers()));
        for d in 1..5 {
            assert!(is_gamma_rational(&QVector::zero(2), &ValueGroup::new(d).unwrap()));
        }
        assert!(ValueGroup::new(0).is_err());
    }

    #[test]
    fn rat_strings() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-4/2").to_string(), "-2");
        assert_eq!(q(" 5 ").to_string(), "5");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        let json = serde_json::to_string(&q("-7/3")).unwrap();
        assert_eq!(json, "\"-7/3\"");
        assert_eq!(serde_json::from_str::<Rat>("4").unwrap(), q("4"));
    }

    #[test]
    fn primitive_decomposition_of_rational_vector() {
        let v = QVector::new(vec![q("1/2"), q("-1")]);
        let (len, dir) = v.primitive_decomposition().unwrap();
        assert_eq!(len, q("1/2"));
        assert_eq!(dir, LatticeVector::from_i64(&[1, -2]));
        assert!(QVector::zero(2).primitive_decomposition().is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = Rat> {
            (-1000i64..1000, 1i64..60).prop_map(|(p, q)| Rat::new(p, q))
        }

        proptest! {
            #[test]
            fn pairing_is_additive(u in prop::collection::vec(-50i64..50, 3),
                                   v in prop::collection::vec(rat(), 3),
                                   w in prop::collection::vec(rat(), 3)) {
                let u = LatticeVector::from_i64(&u);
                let v = QVector::new(v);
                let w = QVector::new(w);
                let lhs = pairing(&u, &v.add(&w)).unwrap();
                let rhs = pairing(&u, &v).unwrap() + pairing(&u, &w).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn rat_string_round_trip(r in rat()) {
                let back: Rat = r.to_string().parse().unwrap();
                prop_assert_eq!(back, r);
            }
        }
    }
}
