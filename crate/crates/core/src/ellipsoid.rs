//! Ellipsoids `E(a, b)`, their two simple Reeb orbits and iterates, and the
//! action-ordered orbit spectrum.
//!
//! For `a < b` with `a/b` irrational, `∂E(a, b)` carries exactly two simple
//! closed Reeb orbits: the fast orbit `α` of period `a` and the slow orbit `β`
//! of period `b`. Their iterates have Conley–Zehnder indices
//!
//! ```text
//! CZ(αᵏ) = 2k + 2⌊ka/b⌋ + 1,    CZ(βᵏ) = 2k + 2⌊kb/a⌋ + 1.
//! ```
//!
//! Every odd integer `≥ 3` is the index of exactly one orbit, and ordering
//! orbits by action orders them by index.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{floor_ratio, PerturbedRational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    /// `α`, period `a`.
    #[serde(rename = "alpha")]
    Fast,
    /// `β`, period `b`.
    #[serde(rename = "beta")]
    Slow,
}

impl Generator {
    pub fn symbol(self) -> char {
        match self {
            Generator::Fast => 'α',
            Generator::Slow => 'β',
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alpha" | "a" | "fast" | "α" => Ok(Generator::Fast),
            "beta" | "b" | "slow" | "β" => Ok(Generator::Slow),
            other => Err(Error::Parse(format!("unknown generator {other:?}"))),
        }
    }
}

/// An iterate `αᵏ` or `βᵏ`, `k ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "OrbitRepr", into = "OrbitRepr")]
pub struct ReebOrbit {
    gen: Generator,
    mult: u64,
}

impl ReebOrbit {
    pub fn new(gen: Generator, mult: u64) -> Result<Self> {
        if mult == 0 {
            return Err(Error::InvalidArgument("orbit multiplicity must be at least 1".into()));
        }
        Ok(Self { gen, mult })
    }

    /// # Panics
    /// If `k == 0`.
    pub fn alpha(k: u64) -> Self {
        Self::new(Generator::Fast, k).expect("multiplicity must be at least 1")
    }

    /// # Panics
    /// If `k == 0`.
    pub fn beta(k: u64) -> Self {
        Self::new(Generator::Slow, k).expect("multiplicity must be at least 1")
    }

    pub fn generator(&self) -> Generator {
        self.gen
    }

    pub fn multiplicity(&self) -> u64 {
        self.mult
    }

    pub fn is_fast(&self) -> bool {
        self.gen == Generator::Fast
    }

    /// Same generator, multiplicity times `p`.
    pub fn iterate(&self, p: u64) -> Result<Self> {
        let mult =
            self.mult.checked_mul(p).ok_or_else(|| Error::MultiplicityOverflow(format!("{} * {p}", self.mult)))?;
        Self::new(self.gen, mult)
    }
}

impl fmt::Display for ReebOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.gen.symbol(), self.mult)
    }
}

impl FromStr for ReebOrbit {
    type Err = Error;

    /// `"alpha,13"`, `"beta,2"`, `"a,4"`.
    fn from_str(s: &str) -> Result<Self> {
        let (gen, mult) = s.split_once(',').ok_or_else(|| Error::Parse(format!("orbit {s:?} is not <gen>,<mult>")))?;
        let mult = mult.trim().parse::<u64>().map_err(|e| Error::Parse(format!("orbit multiplicity {mult:?}: {e}")))?;
        Self::new(gen.parse()?, mult)
    }
}

#[derive(Serialize, Deserialize)]
struct OrbitRepr {
    gen: Generator,
    mult: u64,
}

impl TryFrom<OrbitRepr> for ReebOrbit {
    type Error = Error;
    fn try_from(r: OrbitRepr) -> Result<Self> {
        Self::new(r.gen, r.mult)
    }
}

impl From<ReebOrbit> for OrbitRepr {
    fn from(o: ReebOrbit) -> Self {
        Self { gen: o.gen, mult: o.mult }
    }
}

/// `E(a, b)` with `0 < a < b` and `a/b` irrational in the ε-model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "EllipsoidRepr", into = "EllipsoidRepr")]
pub struct Ellipsoid {
    a: PerturbedRational,
    b: PerturbedRational,
}

impl Ellipsoid {
    /// Rejects `a/b` that is rational in the ε-model (some `k·a = m·b`
    /// exactly) with [`Error::DegenerateTie`], and anything violating
    /// `0 < a < b` with [`Error::InvalidEllipsoid`].
    pub fn new(a: PerturbedRational, b: PerturbedRational) -> Result<Self> {
        if !a.base().is_positive() {
            return Err(Error::InvalidEllipsoid(format!("a = {a} must have a positive rational part")));
        }
        if a >= b {
            return Err(Error::InvalidEllipsoid(format!("need a < b, got a = {a}, b = {b}")));
        }
        // k·a = m·b for integers k, m ≥ 1 iff the ε parts are proportional to the bases
        if a.eps() * b.base() == a.base() * b.eps() {
            return Err(Error::DegenerateTie(format!("a/b = ({a})/({b}) is rational; put ε on exactly one parameter")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &PerturbedRational {
        &self.a
    }

    pub fn b(&self) -> &PerturbedRational {
        &self.b
    }

    /// `c·E(a, b) = E(ca, cb)` for rational `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument(format!("scale factor {c} must be positive")));
        }
        Self::new(self.a.scale(c), self.b.scale(c))
    }

    pub fn period(&self, gen: Generator) -> &PerturbedRational {
        match gen {
            Generator::Fast => &self.a,
            Generator::Slow => &self.b,
        }
    }

    /// `k·a` for `αᵏ`, `k·b` for `βᵏ`.
    pub fn action(&self, orbit: &ReebOrbit) -> PerturbedRational {
        self.period(orbit.gen).scale_int(orbit.mult)
    }

    /// `k + ⌊ka/b⌋` for `αᵏ` (resp. `k + ⌊kb/a⌋` for `βᵏ`), i.e. `(CZ − 1)/2`,
    /// which is also the 1-based position of the orbit in the spectrum.
    pub fn spectral_rank(&self, orbit: &ReebOrbit) -> BigInt {
        let (num, den) = match orbit.gen {
            Generator::Fast => (&self.a, &self.b),
            Generator::Slow => (&self.b, &self.a),
        };
        let fl = floor_ratio(&num.scale_int(orbit.mult), den).expect("validated ellipsoid has an irrational ratio");
        BigInt::from(orbit.mult) + fl
    }

    pub fn cz_index(&self, orbit: &ReebOrbit) -> BigInt {
        self.spectral_rank(orbit) * 2 + BigInt::one()
    }

    pub fn spectrum_iter(&self) -> Spectrum<'_> {
        Spectrum { ellipsoid: self, next_fast: 1, next_slow: 1 }
    }

    /// The first `count` orbits in increasing order of action.
    pub fn spectrum(&self, count: usize) -> Vec<ReebOrbit> {
        self.spectrum_iter().take(count).collect()
    }

    /// All orbits with action `≤ bound`, in increasing order of action.
    pub fn orbits_up_to(&self, bound: &PerturbedRational) -> Vec<ReebOrbit> {
        self.spectrum_iter().take_while(|o| &self.action(o) <= bound).collect()
    }

    /// The unique orbit with `CZ = 2m + 1`.
    pub fn orbit_with_cz(&self, m: u64) -> Result<ReebOrbit> {
        if m == 0 {
            return Err(Error::InvalidArgument("CZ index 2m + 1 needs m ≥ 1".into()));
        }
        let skip = usize::try_from(m - 1).map_err(|_| Error::InvalidArgument(format!("m = {m} is out of range")))?;
        Ok(self.spectrum_iter().nth(skip).expect("the spectrum is infinite"))
    }

    /// Like [`orbit_with_cz`](Self::orbit_with_cz) but takes the odd index itself.
    pub fn orbit_with_index(&self, cz: &BigInt) -> Result<ReebOrbit> {
        let one = BigInt::one();
        if cz < &BigInt::from(3) || (cz - &one) % 2 != BigInt::zero() {
            return Err(Error::InvalidArgument(format!("{cz} is not an odd integer ≥ 3")));
        }
        let m: BigInt = (cz - one) / 2;
        let m = u64::try_from(m).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        self.orbit_with_cz(m)
    }
}

impl fmt::Display for Ellipsoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({}, {})", self.a, self.b)
    }
}

/// Two-pointer merge of the `α` and `β` iterate streams by action.
#[derive(Clone, Debug)]
pub struct Spectrum<'a> {
    ellipsoid: &'a Ellipsoid,
    next_fast: u64,
    next_slow: u64,
}

impl Iterator for Spectrum<'_> {
    type Item = ReebOrbit;

    fn next(&mut self) -> Option<ReebOrbit> {
        let fast = self.ellipsoid.a.scale_int(self.next_fast);
        let slow = self.ellipsoid.b.scale_int(self.next_slow);
        match fast.cmp(&slow) {
            Ordering::Less => {
                self.next_fast += 1;
                Some(ReebOrbit::alpha(self.next_fast - 1))
            }
            Ordering::Greater => {
                self.next_slow += 1;
                Some(ReebOrbit::beta(self.next_slow - 1))
            }
            Ordering::Equal => unreachable!("validated ellipsoid has no action ties"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EllipsoidRepr {
    a: PerturbedRational,
    b: PerturbedRational,
}

impl TryFrom<EllipsoidRepr> for Ellipsoid {
    type Error = Error;
    fn try_from(r: EllipsoidRepr) -> Result<Self> {
        Self::new(r.a, r.b)
    }
}

impl From<Ellipsoid> for EllipsoidRepr {
    fn from(e: Ellipsoid) -> Self {
        Self { a: e.a, b: e.b }
    }
}
