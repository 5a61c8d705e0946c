//! Exact rationals extended by one formal positive infinitesimal `ε`.
//!
//! A [`PerturbedRational`] is `base + eps·ε`. Ordering is lexicographic on
//! `(base, eps)`, which agrees with the real ordering for every sufficiently
//! small `ε > 0`. Sums, differences and rational scalings are exact. Products
//! and quotients are only ever taken to first order in `ε`.
//!
//! This is how "irrational" ellipsoid parameters are represented: a ratio
//! like `13 / (13/2 + ε)` is not an integer, and the sign of its `ε` part
//! says on which side of `2` it sits.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` with decimal big integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// `"p/q"` text form; integers keep the `/1`.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PerturbedRepr", into = "PerturbedRepr")]
pub struct PerturbedRational {
    // field order matters: the derived Ord is lexicographic on (base, eps)
    base: Rational,
    eps: Rational,
}

impl PerturbedRational {
    pub fn new(base: Rational, eps: Rational) -> Self {
        Self { base, eps }
    }

    pub fn from_rational(base: Rational) -> Self {
        Self { base, eps: Rational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(integer(n))
    }

    /// `base + ε` with unit infinitesimal coefficient.
    pub fn plus_eps(base: Rational) -> Self {
        Self { base, eps: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn carries_eps(&self) -> bool {
        !self.eps.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.eps.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        self.cmp(&Self::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { base: &self.base * k, eps: &self.eps * k }
    }

    pub fn scale_int(&self, k: u64) -> Self {
        let k = Rational::from_integer(BigInt::from(k));
        self.scale(&k)
    }

    /// First-order product `(p + cε)(r + dε) = pr + (pd + cr)ε`.
    pub fn mul_first_order(&self, other: &Self) -> Self {
        Self { base: &self.base * &other.base, eps: &self.base * &other.eps + &self.eps * &other.base }
    }
}

/// `⌊x⌋` in the ε-model.
///
/// A non-integral base decides alone. An integral base moves down by one
/// when the ε part is negative; an exact integer is a [`Error::DegenerateTie`].
pub fn floor_perturbed(x: &PerturbedRational) -> Result<BigInt> {
    if !x.base.is_integer() {
        return Ok(x.base.floor().to_integer());
    }
    let n = x.base.to_integer();
    match x.eps.signum() {
        s if s.is_positive() => Ok(n),
        s if s.is_negative() => Ok(n - 1),
        _ => Err(Error::DegenerateTie(format!("floor of the exact integer {n}"))),
    }
}

/// First-order quotient `(p + cε)/(r + dε) = p/r + ((cr − pd)/r²)ε`.
///
/// At most one operand may carry ε. With both perturbed, the dropped ε²
/// term can decide comparisons against the result, which is reported as
/// [`Error::SecondOrderAmbiguity`].
pub fn divide(n: &PerturbedRational, d: &PerturbedRational) -> Result<PerturbedRational> {
    if !d.is_positive() {
        return Err(Error::NonPositiveDivisor(d.to_string()));
    }
    if n.carries_eps() && d.carries_eps() {
        return Err(Error::SecondOrderAmbiguity(format!("({n}) / ({d})")));
    }
    let r = &d.base;
    if r.is_zero() {
        // d = dε with d > 0: the quotient is not infinitesimally close to any rational.
        return Err(Error::SecondOrderAmbiguity(format!("({n}) / ({d}) has a purely infinitesimal divisor")));
    }
    let base = &n.base / r;
    let eps = (&n.eps * r - &n.base * &d.eps) / (r * r);
    Ok(PerturbedRational { base, eps })
}

/// Exact `⌊x / y⌋` for `y > 0`, decided by comparing `x` against `m·y`.
///
/// Both sides are linear in ε, so no truncation happens and either operand
/// may carry ε. Ties `x = m·y` are [`Error::DegenerateTie`].
pub fn floor_ratio(x: &PerturbedRational, y: &PerturbedRational) -> Result<BigInt> {
    if !y.is_positive() {
        return Err(Error::NonPositiveDivisor(y.to_string()));
    }
    if y.base.is_zero() {
        return Err(Error::SecondOrderAmbiguity(format!("({x}) / ({y}) has a purely infinitesimal divisor")));
    }
    let t = &x.base / &y.base;
    if !t.is_integer() {
        return Ok(t.floor().to_integer());
    }
    let m = t.to_integer();
    let my = y.scale(&Rational::from_integer(m.clone()));
    match x.cmp(&my) {
        Ordering::Greater => Ok(m),
        Ordering::Less => Ok(m - 1),
        Ordering::Equal => Err(Error::DegenerateTie(format!("({x}) / ({y}) = {m} exactly"))),
    }
}

impl Add for PerturbedRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { base: self.base + rhs.base, eps: self.eps + rhs.eps }
    }
}

impl<'a> Add<&'a PerturbedRational> for &'a PerturbedRational {
    type Output = PerturbedRational;
    fn add(self, rhs: Self) -> PerturbedRational {
        PerturbedRational { base: &self.base + &rhs.base, eps: &self.eps + &rhs.eps }
    }
}

impl Sub for PerturbedRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { base: self.base - rhs.base, eps: self.eps - rhs.eps }
    }
}

impl<'a> Sub<&'a PerturbedRational> for &'a PerturbedRational {
    type Output = PerturbedRational;
    fn sub(self, rhs: Self) -> PerturbedRational {
        PerturbedRational { base: &self.base - &rhs.base, eps: &self.eps - &rhs.eps }
    }
}

impl Neg for PerturbedRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { base: -self.base, eps: -self.eps }
    }
}

impl Sum for PerturbedRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl From<Rational> for PerturbedRational {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl fmt::Display for PerturbedRational {
    /// `5/2 + 2ε`, `1/2 - ε`, `3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if self.eps.is_zero() {
            return Ok(());
        }
        let sign = if self.eps.is_negative() { '-' } else { '+' };
        let mag = self.eps.abs();
        if mag.is_one() {
            write!(f, " {sign} ε")
        } else {
            write!(f, " {sign} {mag}ε")
        }
    }
}

impl FromStr for PerturbedRational {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) form and ASCII variants:
    /// `"13/2+e"`, `"2 - 3/4e"`, `"5"`, `"1/2 + ε"`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('ε', "e");
        if compact.is_empty() {
            return Err(Error::Parse("empty perturbed rational".into()));
        }
        if !compact.ends_with('e') {
            return Ok(Self::from_rational(parse_rational(&compact)?));
        }
        let body = &compact[..compact.len() - 1];
        // the sign that starts the ε term is the last '+' or '-' not at position 0
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (base, coeff) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let coeff = match coeff {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            c => parse_rational(c.strip_prefix('+').unwrap_or(c))?,
        };
        Ok(Self::new(parse_rational(base)?, coeff))
    }
}

#[derive(Serialize, Deserialize)]
struct PerturbedRepr {
    base: String,
    eps: String,
}

impl TryFrom<PerturbedRepr> for PerturbedRational {
    type Error = Error;
    fn try_from(r: PerturbedRepr) -> Result<Self> {
        Ok(Self::new(parse_rational(&r.base)?, parse_rational(&r.eps)?))
    }
}

impl From<PerturbedRational> for PerturbedRepr {
    fn from(x: PerturbedRational) -> Self {
        Self { base: rational_to_string(&x.base), eps: rational_to_string(&x.eps) }
    }
}

/// Serde helper writing big integers as JSON numbers when they fit in `i64`,
/// decimal strings otherwise. Reading accepts both.
pub mod json_int {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(BigInt::from(v)),
            Raw::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }
}
