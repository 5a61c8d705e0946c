//! Asymptotic data of genus-zero punctured curves, in the symplectization of
//! one ellipsoid boundary or in the completed cobordism between two nested
//! ellipsoids.
//!
//! Only the combinatorics of the ends is modelled: which Reeb orbits the
//! positive and negative punctures are asymptotic to. From that we get the
//! Fredholm index
//!
//! ```text
//! index = (#ends − 2) + Σ CZ(positive ends) − Σ CZ(negative ends)
//! ```
//!
//! (always even), the action defect (the `dλ`/`ω`-area, which must be
//! nonnegative for a curve to exist), covers, and brute-force enumeration of
//! action-feasible data.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::PerturbedRational;
use crate::ellipsoid::{Ellipsoid, ReebOrbit};
use crate::error::{Error, Result};
use crate::par::{self, SearchOptions};

/// The region between `inner = E₁` and `outer = E₂`.
///
/// Built with [`CobordismData::new`] the pair must be nested componentwise,
/// `a₁ < a₂` and `b₁ < b₂`. Pairs realised only through a symplectic
/// embedding (not an inclusion) go through [`CobordismData::from_embedding`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CobordismRepr", into = "CobordismRepr")]
pub struct CobordismData {
    inner: Ellipsoid,
    outer: Ellipsoid,
    embedded: bool,
}

impl CobordismData {
    pub fn new(inner: Ellipsoid, outer: Ellipsoid) -> Result<Self> {
        if inner.a() >= outer.a() || inner.b() >= outer.b() {
            return Err(Error::InvalidCobordism(format!(
                "{inner} is not nested in {outer} (need a₁ < a₂ and b₁ < b₂)"
            )));
        }
        Ok(Self { inner, outer, embedded: false })
    }

    pub fn from_embedding(inner: Ellipsoid, outer: Ellipsoid) -> Self {
        Self { inner, outer, embedded: true }
    }

    pub fn inner(&self) -> &Ellipsoid {
        &self.inner
    }

    pub fn outer(&self) -> &Ellipsoid {
        &self.outer
    }

    pub fn is_embedded(&self) -> bool {
        self.embedded
    }
}

impl fmt::Display for CobordismData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊂ {}", self.inner, self.outer)
    }
}

#[derive(Serialize, Deserialize)]
struct CobordismRepr {
    inner: Ellipsoid,
    outer: Ellipsoid,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    embedded: bool,
}

impl TryFrom<CobordismRepr> for CobordismData {
    type Error = Error;
    fn try_from(r: CobordismRepr) -> Result<Self> {
        if r.embedded {
            Ok(Self::from_embedding(r.inner, r.outer))
        } else {
            Self::new(r.inner, r.outer)
        }
    }
}

impl From<CobordismData> for CobordismRepr {
    fn from(c: CobordismData) -> Self {
        Self { inner: c.inner, outer: c.outer, embedded: c.embedded }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Setting {
    Symplectization(Ellipsoid),
    Cobordism(CobordismData),
}

impl Setting {
    /// Boundary carrying the positive ends.
    pub fn positive_boundary(&self) -> &Ellipsoid {
        match self {
            Setting::Symplectization(e) => e,
            Setting::Cobordism(c) => &c.outer,
        }
    }

    /// Boundary carrying the negative ends.
    pub fn negative_boundary(&self) -> &Ellipsoid {
        match self {
            Setting::Symplectization(e) => e,
            Setting::Cobordism(c) => &c.inner,
        }
    }

    pub fn is_symplectization(&self) -> bool {
        matches!(self, Setting::Symplectization(_))
    }

    /// Fredholm index of a genus-zero curve with these ends.
    pub fn fredholm_index(&self, ends: &Punctures) -> BigInt {
        let pos_e = self.positive_boundary();
        let neg_e = self.negative_boundary();
        let cz_pos: BigInt = ends.pos.iter().map(|o| pos_e.cz_index(o)).sum();
        let cz_neg: BigInt = ends.neg.iter().map(|o| neg_e.cz_index(o)).sum();
        BigInt::from(ends.count()) - 2 + cz_pos - cz_neg
    }

    /// See [`AsymptoticData::admits_regular_simple_model`].
    pub fn admits_regular_simple_model(&self, ends: &Punctures) -> bool {
        let g = ends.multiplicity_gcd();
        (1..=g).filter(|p| g.is_multiple_of(*p)).any(|p| {
            let v = ends.divided(p).expect("p divides the gcd");
            !self.fredholm_index(&v).is_negative()
        })
    }

    /// `Σ action(positive ends) − Σ action(negative ends)`.
    pub fn action_defect(&self, ends: &Punctures) -> PerturbedRational {
        let pos_e = self.positive_boundary();
        let neg_e = self.negative_boundary();
        let top: PerturbedRational = ends.pos.iter().map(|o| pos_e.action(o)).sum();
        let bottom: PerturbedRational = ends.neg.iter().map(|o| neg_e.action(o)).sum();
        top - bottom
    }
}

/// Positive and negative ends, each kept sorted descending by
/// `(generator, multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "PuncturesRepr")]
pub struct Punctures {
    pos: Vec<ReebOrbit>,
    neg: Vec<ReebOrbit>,
}

#[derive(Deserialize)]
struct PuncturesRepr {
    #[serde(default)]
    pos: Vec<ReebOrbit>,
    #[serde(default)]
    neg: Vec<ReebOrbit>,
}

impl From<PuncturesRepr> for Punctures {
    fn from(r: PuncturesRepr) -> Self {
        Self::new(r.pos, r.neg)
    }
}

pub(crate) fn canonical(mut orbits: Vec<ReebOrbit>) -> Vec<ReebOrbit> {
    orbits.sort_unstable_by(|x, y| y.cmp(x));
    orbits
}

impl Punctures {
    pub fn new(pos: Vec<ReebOrbit>, neg: Vec<ReebOrbit>) -> Self {
        Self { pos: canonical(pos), neg: canonical(neg) }
    }

    pub fn trivial(orbit: ReebOrbit) -> Self {
        Self { pos: vec![orbit], neg: vec![orbit] }
    }

    pub fn positives(&self) -> &[ReebOrbit] {
        &self.pos
    }

    pub fn negatives(&self) -> &[ReebOrbit] {
        &self.neg
    }

    pub fn count(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    /// One positive end, one negative end, same orbit: a trivial cylinder
    /// (or an unbranched cover of one).
    pub fn is_trivial_cylinder(&self) -> bool {
        self.pos.len() == 1 && self.neg.len() == 1 && self.pos[0] == self.neg[0]
    }

    fn multiplicities(&self) -> impl Iterator<Item = u64> + '_ {
        self.pos.iter().chain(&self.neg).map(|o| o.multiplicity())
    }

    pub fn multiplicity_gcd(&self) -> u64 {
        self.multiplicities().fold(0, |g, m| g.gcd(&m))
    }

    pub fn scaled(&self, p: u64) -> Result<Self> {
        let up = |v: &[ReebOrbit]| v.iter().map(|o| o.iterate(p)).collect::<Result<Vec<_>>>();
        Ok(Self { pos: up(&self.pos)?, neg: up(&self.neg)? })
    }

    /// Exact division of every multiplicity by `p`, if `p` divides them all.
    pub fn divided(&self, p: u64) -> Option<Self> {
        if p == 0 || self.multiplicities().any(|m| m % p != 0) {
            return None;
        }
        let down =
            |v: &[ReebOrbit]| v.iter().map(|o| ReebOrbit::new(o.generator(), o.multiplicity() / p).unwrap()).collect();
        Some(Self { pos: down(&self.pos), neg: down(&self.neg) })
    }
}

impl fmt::Display for Punctures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[ReebOrbit]| v.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "{{{}}} → {{{}}}", join(&self.pos), join(&self.neg))
    }
}

/// Ends of a genus-zero curve together with where it lives. At least one
/// positive end: a curve without one has zero area by Stokes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DataRepr", into = "DataRepr")]
pub struct AsymptoticData {
    setting: Setting,
    ends: Punctures,
}

#[derive(Serialize, Deserialize)]
struct DataRepr {
    setting: Setting,
    #[serde(default)]
    pos: Vec<ReebOrbit>,
    #[serde(default)]
    neg: Vec<ReebOrbit>,
}

impl TryFrom<DataRepr> for AsymptoticData {
    type Error = Error;
    fn try_from(r: DataRepr) -> Result<Self> {
        Self::new(r.setting, r.pos, r.neg)
    }
}

impl From<AsymptoticData> for DataRepr {
    fn from(d: AsymptoticData) -> Self {
        Self { setting: d.setting, pos: d.ends.pos, neg: d.ends.neg }
    }
}

impl AsymptoticData {
    pub fn new(setting: Setting, pos: Vec<ReebOrbit>, neg: Vec<ReebOrbit>) -> Result<Self> {
        Self::from_ends(setting, Punctures::new(pos, neg))
    }

    pub fn from_ends(setting: Setting, ends: Punctures) -> Result<Self> {
        if ends.pos.is_empty() {
            return Err(Error::InvalidData("a curve needs at least one positive puncture".into()));
        }
        Ok(Self { setting, ends })
    }

    pub fn setting(&self) -> &Setting {
        &self.setting
    }

    pub fn ends(&self) -> &Punctures {
        &self.ends
    }

    pub fn positives(&self) -> &[ReebOrbit] {
        &self.ends.pos
    }

    pub fn negatives(&self) -> &[ReebOrbit] {
        &self.ends.neg
    }

    pub fn fredholm_index(&self) -> BigInt {
        self.setting.fredholm_index(&self.ends)
    }

    pub fn action_defect(&self) -> PerturbedRational {
        self.setting.action_defect(&self.ends)
    }

    pub fn is_action_feasible(&self) -> bool {
        !self.action_defect().is_negative()
    }

    /// Exactly one positive and one negative end on the same orbit, in a
    /// symplectization.
    pub fn is_trivial_cover(&self) -> bool {
        self.setting.is_symplectization() && self.ends.is_trivial_cylinder()
    }

    /// Zero-area data in a symplectization: every end is an iterate of one
    /// simple orbit and the multiplicities balance. This includes branched
    /// covers of a trivial cylinder, e.g. `{α²} → {α¹, α¹}`.
    pub fn covers_trivial_cylinder(&self) -> bool {
        if !self.setting.is_symplectization() || self.ends.neg.is_empty() {
            return false;
        }
        let gen = self.ends.pos[0].generator();
        let one_generator = self.ends.pos.iter().chain(&self.ends.neg).all(|o| o.generator() == gen);
        let total = |v: &[ReebOrbit]| v.iter().map(|o| o.multiplicity() as u128).sum::<u128>();
        one_generator && total(&self.ends.pos) == total(&self.ends.neg)
    }

    /// Degree-`p` cover with every end covered at full local multiplicity.
    pub fn cover(&self, p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("cover degree must be at least 1".into()));
        }
        Ok(Self { setting: self.setting.clone(), ends: self.ends.scaled(p)? })
    }

    /// Every way of writing `self` as `cover(v, p)`, by increasing `p`.
    pub fn simple_decompositions(&self) -> Vec<SimpleDecomposition> {
        let g = self.ends.multiplicity_gcd();
        (1..=g)
            .filter(|p| g.is_multiple_of(*p))
            .map(|p| SimpleDecomposition {
                underlying: Self {
                    setting: self.setting.clone(),
                    ends: self.ends.divided(p).expect("p divides the gcd"),
                },
                degree: p,
            })
            .collect()
    }

    /// Admitted when some decomposition `cover(v, p)` has `index(v) ≥ 0`:
    /// the combinatorial trace of "every simple curve is regular".
    pub fn admits_regular_simple_model(&self) -> bool {
        self.setting.admits_regular_simple_model(&self.ends)
    }
}

impl fmt::Display for AsymptoticData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ends.fmt(f)
    }
}

/// `covered = cover(underlying, degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleDecomposition {
    pub underlying: AsymptoticData,
    pub degree: u64,
}

impl SimpleDecomposition {
    pub fn covered(&self) -> Result<AsymptoticData> {
        self.underlying.cover(self.degree)
    }
}

pub fn fredholm_index(d: &AsymptoticData) -> BigInt {
    d.fredholm_index()
}

pub fn action_defect(d: &AsymptoticData) -> PerturbedRational {
    d.action_defect()
}

pub fn is_trivial_cover(d: &AsymptoticData) -> bool {
    d.is_trivial_cover()
}

pub fn cover(d: &AsymptoticData, p: u64) -> Result<AsymptoticData> {
    d.cover(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityCaps {
    pub max_negative_punctures: usize,
    pub max_total_multiplicity: u64,
}

impl Default for FeasibilityCaps {
    fn default() -> Self {
        Self { max_negative_punctures: 6, max_total_multiplicity: 12 }
    }
}

/// Search output. `cap_hit` is set when some extension that was still
/// admissible got cut by a cap, so the list may be incomplete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration<T> {
    pub items: Vec<T>,
    pub cap_hit: bool,
    pub interrupted: bool,
}

impl<T> Enumeration<T> {
    pub fn is_complete(&self) -> bool {
        !self.cap_hit && !self.interrupted
    }
}

/// A candidate orbit for a multiset search, with its action precomputed.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub orbit: ReebOrbit,
    pub action: PerturbedRational,
}

/// Orbits of `e` with action `≤ budget` and multiplicity `≤ max_mult`,
/// sorted ascending by `(generator, multiplicity)`.
pub fn candidates(e: &Ellipsoid, budget: &PerturbedRational, max_mult: u64) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = e
        .orbits_up_to(budget)
        .into_iter()
        .filter(|o| o.multiplicity() <= max_mult)
        .map(|orbit| Candidate { action: e.action(&orbit), orbit })
        .collect();
    out.sort_by_key(|c| c.orbit);
    out
}

/// All multisets drawn from `cands` (sorted ascending) with at most
/// `max_count` elements, total multiplicity `≤ max_mult` and, if given, total
/// action `≤ budget`. Each multiset is sorted descending; the list is in
/// lexicographic order starting with the empty multiset.
///
/// The returned flag reports whether a cap blocked some extension the budget
/// still allowed.
pub fn orbit_multisets(
    cands: &[Candidate],
    max_count: usize,
    max_mult: u64,
    budget: Option<&PerturbedRational>,
    exec: par::Execution,
) -> (Vec<Vec<ReebOrbit>>, bool) {
    struct Walk<'a> {
        cands: &'a [Candidate],
        max_count: usize,
        max_mult: u64,
        budget: Option<&'a PerturbedRational>,
        out: Vec<Vec<ReebOrbit>>,
        cap_hit: bool,
    }

    impl Walk<'_> {
        fn go(&mut self, stack: &mut Vec<ReebOrbit>, top: usize, mult: u64, action: &PerturbedRational) {
            self.out.push(stack.clone());
            for i in 0..=top {
                let c = &self.cands[i];
                let next_action = action + &c.action;
                if self.budget.is_some_and(|b| &next_action > b) {
                    continue;
                }
                let next_mult = mult + c.orbit.multiplicity();
                if stack.len() >= self.max_count || next_mult > self.max_mult {
                    self.cap_hit = true;
                    continue;
                }
                stack.push(c.orbit);
                self.go(stack, i, next_mult, &next_action);
                stack.pop();
            }
        }
    }

    let fresh = |stack: Vec<ReebOrbit>, top: usize, mult: u64, action: PerturbedRational| {
        let mut w = Walk { cands, max_count, max_mult, budget, out: Vec::new(), cap_hit: false };
        let mut stack = stack;
        w.go(&mut stack, top, mult, &action);
        (w.out, w.cap_hit)
    };

    if cands.is_empty() {
        return (vec![Vec::new()], false);
    }
    // the empty multiset, then one subtree per first (largest) element
    let mut out = vec![Vec::new()];
    let mut cap_hit = false;
    let firsts: Vec<usize> = (0..cands.len()).collect();
    let subtrees = par::map(exec, firsts, |i| {
        let c = &cands[i];
        if budget.is_some_and(|b| &c.action > b) {
            return (Vec::new(), false);
        }
        if max_count == 0 || c.orbit.multiplicity() > max_mult {
            return (Vec::new(), true);
        }
        fresh(vec![c.orbit], i, c.orbit.multiplicity(), c.action.clone())
    });
    for (items, hit) in subtrees {
        out.extend(items);
        cap_hit |= hit;
    }
    (out, cap_hit)
}

/// All data with the single positive end `positive`, negative ends within
/// `caps`, and nonnegative action defect, ordered lexicographically by the
/// negative multiset.
pub fn enumerate_feasible(
    setting: &Setting,
    positive: ReebOrbit,
    caps: FeasibilityCaps,
) -> Enumeration<AsymptoticData> {
    enumerate_feasible_with(setting, positive, caps, &SearchOptions::default())
}

pub fn enumerate_feasible_with(
    setting: &Setting,
    positive: ReebOrbit,
    caps: FeasibilityCaps,
    opts: &SearchOptions,
) -> Enumeration<AsymptoticData> {
    let budget = setting.positive_boundary().action(&positive);
    let cands = candidates(setting.negative_boundary(), &budget, u64::MAX);
    let (sets, cap_hit) = orbit_multisets(
        &cands,
        caps.max_negative_punctures,
        caps.max_total_multiplicity,
        Some(&budget),
        opts.execution,
    );
    let items = sets
        .into_iter()
        .map(|neg| AsymptoticData { setting: setting.clone(), ends: Punctures { pos: vec![positive], neg } })
        .collect();
    Enumeration { items, cap_hit, interrupted: opts.is_cancelled() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Execution;
    use num_traits::Zero;

    fn pr(s: &str) -> PerturbedRational {
        s.parse().unwrap()
    }

    fn ell(a: &str, b: &str) -> Ellipsoid {
        Ellipsoid::new(pr(a), pr(b)).unwrap()
    }

    fn symp(a: &str, b: &str) -> Setting {
        Setting::Symplectization(ell(a, b))
    }

    fn cob(inner: (&str, &str), outer: (&str, &str)) -> Setting {
        Setting::Cobordism(CobordismData::new(ell(inner.0, inner.1), ell(outer.0, outer.1)).unwrap())
    }

    use ReebOrbit as O;

    fn data(s: &Setting, pos: &[O], neg: &[O]) -> AsymptoticData {
        AsymptoticData::new(s.clone(), pos.to_vec(), neg.to_vec()).unwrap()
    }

    fn idx(d: &AsymptoticData) -> i64 {
        i64::try_from(d.fredholm_index()).unwrap()
    }

    #[test]
    fn index_examples() {
        let s = symp("1", "5/2 + e");
        assert_eq!(idx(&data(&s, &[O::alpha(1)], &[])), 2);
        assert_eq!(idx(&data(&s, &[O::alpha(2)], &[O::alpha(2)])), 0);
        let c = cob(("1", "5 + e"), ("2", "13 + e"));
        assert_eq!(idx(&data(&c, &[O::alpha(4)], &[O::alpha(4)])), 0);
        assert_eq!(idx(&data(&s, &[O::alpha(3)], &[O::alpha(1), O::alpha(1)])), 4);
        assert_eq!(idx(&data(&s, &[O::alpha(3)], &[O::beta(1)])), 2);
    }

    #[test]
    fn defect_examples() {
        let s = symp("1", "5/2 + e");
        assert_eq!(data(&s, &[O::alpha(3)], &[O::beta(1)]).action_defect(), pr("1/2 - e"));
        assert!(data(&s, &[O::alpha(7)], &[O::alpha(7)]).action_defect().is_zero());

        let emb = CobordismData::from_embedding(ell("1", "4 + e"), ell("2", "2 + e"));
        let d = data(&Setting::Cobordism(emb), &[O::beta(1); 5], &[O::alpha(12)]);
        assert_eq!(d.action_defect(), pr("-2 + 5e"));
        assert!(!d.is_action_feasible());
    }

    #[test]
    fn trivial_cover_examples() {
        let s = symp("1", "5/2 + e");
        assert!(data(&s, &[O::alpha(3)], &[O::alpha(3)]).is_trivial_cover());
        let branched = data(&s, &[O::alpha(3)], &[O::alpha(1), O::alpha(2)]);
        assert!(!branched.is_trivial_cover());
        assert!(branched.covers_trivial_cylinder());
        assert!(!data(&s, &[O::beta(2)], &[O::alpha(2)]).is_trivial_cover());
        let c = cob(("1", "5 + e"), ("2", "13 + e"));
        assert!(!data(&c, &[O::alpha(2)], &[O::alpha(2)]).is_trivial_cover());
    }

    #[test]
    fn cover_examples() {
        let c = cob(("1", "5 + e"), ("2", "13 + e"));
        let v = data(&c, &[O::alpha(2)], &[O::alpha(2)]);
        let u = v.cover(2).unwrap();
        assert_eq!(u, data(&c, &[O::alpha(4)], &[O::alpha(4)]));
        assert_eq!(v.cover(1).unwrap(), v);
        assert_eq!(u.fredholm_index() - v.fredholm_index() * 2, BigInt::zero());
        assert!(v.cover(0).is_err());

        let decs = u.simple_decompositions();
        assert_eq!(decs.iter().map(|d| d.degree).collect::<Vec<_>>(), vec![1, 2, 4]);
        for d in &decs {
            assert_eq!(d.covered().unwrap(), u);
        }
    }

    #[test]
    fn requires_a_positive_end() {
        let s = symp("1", "5/2 + e");
        assert!(matches!(AsymptoticData::new(s, vec![], vec![O::alpha(1)]), Err(Error::InvalidData(_))));
    }

    #[test]
    fn enumerate_examples() {
        let s = symp("1", "5/2 + e");
        let caps = FeasibilityCaps { max_negative_punctures: 4, max_total_multiplicity: 8 };
        let got = enumerate_feasible(&s, O::alpha(1), caps);
        assert_eq!(got.items, vec![data(&s, &[O::alpha(1)], &[]), data(&s, &[O::alpha(1)], &[O::alpha(1)])]);
        assert!(!got.cap_hit);

        let got = enumerate_feasible(&s, O::alpha(3), caps);
        let two_ones = data(&s, &[O::alpha(3)], &[O::alpha(1), O::alpha(1)]);
        let beta = data(&s, &[O::alpha(3)], &[O::beta(1)]);
        assert!(got.items.contains(&two_ones) && got.items.contains(&beta));
        assert_eq!(idx(&two_ones), 4);
        assert_eq!(idx(&beta), 2);

        let none = FeasibilityCaps { max_negative_punctures: 0, max_total_multiplicity: 99 };
        let got = enumerate_feasible(&s, O::alpha(1), none);
        assert_eq!(got.items, vec![data(&s, &[O::alpha(1)], &[])]);
        assert!(got.cap_hit);
    }

    #[test]
    fn enumeration_order_is_lexicographic_and_strategy_free() {
        let s = symp("1", "13/4 + e");
        let caps = FeasibilityCaps { max_negative_punctures: 5, max_total_multiplicity: 9 };
        let seq = enumerate_feasible_with(&s, O::alpha(7), caps, &SearchOptions::with_execution(Execution::Sequential));
        let par = enumerate_feasible_with(&s, O::alpha(7), caps, &SearchOptions::with_execution(Execution::Parallel));
        assert_eq!(seq, par);
        let negs: Vec<_> = seq.items.iter().map(|d| d.negatives().to_vec()).collect();
        let mut sorted = negs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(negs, sorted);
    }

    #[test]
    fn json_shape() {
        let c = cob(("1", "5 + e"), ("2", "13 + e"));
        let d = data(&c, &[O::alpha(4)], &[O::alpha(4)]);
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["pos"], serde_json::json!([{"gen": "alpha", "mult": 4}]));
        assert!(v["setting"]["cobordism"]["inner"]["a"].is_object());
        let back: AsymptoticData = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);

        let bad_nesting = r#"{"setting": {"cobordism": {
            "inner": {"a": {"base": "3", "eps": "0"}, "b": {"base": "5", "eps": "1"}},
            "outer": {"a": {"base": "2", "eps": "0"}, "b": {"base": "13", "eps": "1"}}}},
            "pos": [{"gen": "alpha", "mult": 1}], "neg": []}"#;
        assert!(serde_json::from_str::<AsymptoticData>(bad_nesting).is_err());
    }
}
