//! Multi-level building skeletons over a cobordism `E₁ ⊂ E₂`.
//!
//! A building is a stack of levels, bottom to top: symplectization levels of
//! `∂E₁`, one cobordism level, symplectization levels of `∂E₂`. Each level is
//! a multiset of curves given by their ends; consecutive levels match when the
//! negative ends of the upper one equal the positive ends of the lower one.
//!
//! When every curve has a single positive end, its index is
//! `2(rank(positive) − Σ rank(negatives))`, so the total index of a cylindrical
//! building telescopes to `CZ(top) − CZ(bottom)`. The search below therefore
//! prunes on whether the bottom orbit is still reachable rather than on index.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{json_int, PerturbedRational};
use crate::curve::{candidates, orbit_multisets, CobordismData, Enumeration, Punctures, Setting};
use crate::ellipsoid::ReebOrbit;
use crate::error::{Error, Result};
use crate::par::{self, Execution, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    Lower,
    Middle,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BuildingRepr", into = "BuildingRepr")]
pub struct Building {
    cobordism: CobordismData,
    lower_levels: Vec<Vec<Punctures>>,
    middle_level: Vec<Punctures>,
    upper_levels: Vec<Vec<Punctures>>,
    bottom: ReebOrbit,
    top: ReebOrbit,
}

fn sorted(mut level: Vec<Punctures>) -> Vec<Punctures> {
    level.sort();
    level
}

impl Building {
    /// `lower_levels` run bottom upward, `upper_levels` from the middle
    /// upward. Nothing is checked here; see [`validate`].
    pub fn new(
        cobordism: CobordismData,
        lower_levels: Vec<Vec<Punctures>>,
        middle_level: Vec<Punctures>,
        upper_levels: Vec<Vec<Punctures>>,
        bottom: ReebOrbit,
        top: ReebOrbit,
    ) -> Self {
        Self {
            cobordism,
            lower_levels: lower_levels.into_iter().map(sorted).collect(),
            middle_level: sorted(middle_level),
            upper_levels: upper_levels.into_iter().map(sorted).collect(),
            bottom,
            top,
        }
    }

    /// The one-level building made of the cylinder `top → bottom`.
    pub fn cylinder(cobordism: CobordismData, top: ReebOrbit, bottom: ReebOrbit) -> Self {
        let c = Punctures::new(vec![top], vec![bottom]);
        Self::new(cobordism, Vec::new(), vec![c], Vec::new(), bottom, top)
    }

    pub fn cobordism(&self) -> &CobordismData {
        &self.cobordism
    }

    pub fn lower_levels(&self) -> &[Vec<Punctures>] {
        &self.lower_levels
    }

    pub fn middle_level(&self) -> &[Punctures] {
        &self.middle_level
    }

    pub fn upper_levels(&self) -> &[Vec<Punctures>] {
        &self.upper_levels
    }

    pub fn bottom(&self) -> ReebOrbit {
        self.bottom
    }

    pub fn top(&self) -> ReebOrbit {
        self.top
    }

    /// All levels, bottom to top.
    pub fn levels(&self) -> Vec<(LevelKind, &[Punctures])> {
        let lower = self.lower_levels.iter().map(|l| (LevelKind::Lower, l.as_slice()));
        let middle = std::iter::once((LevelKind::Middle, self.middle_level.as_slice()));
        let upper = self.upper_levels.iter().map(|l| (LevelKind::Upper, l.as_slice()));
        lower.chain(middle).chain(upper).collect()
    }

    pub fn curves(&self) -> impl Iterator<Item = &Punctures> {
        self.lower_levels.iter().flatten().chain(&self.middle_level).chain(self.upper_levels.iter().flatten())
    }

    pub fn setting(&self, kind: LevelKind) -> Setting {
        match kind {
            LevelKind::Lower => Setting::Symplectization(self.cobordism.inner().clone()),
            LevelKind::Middle => Setting::Cobordism(self.cobordism.clone()),
            LevelKind::Upper => Setting::Symplectization(self.cobordism.outer().clone()),
        }
    }
}

impl fmt::Display for Building {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels = self.levels();
        for (i, (kind, curves)) in levels.iter().enumerate().rev() {
            let body = curves.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("  ");
            write!(f, "{kind:?}: {body}")?;
            if i > 0 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LevelRepr {
    kind: LevelKind,
    curves: Vec<Punctures>,
}

#[derive(Serialize, Deserialize)]
struct BuildingRepr {
    cobordism: CobordismData,
    levels: Vec<LevelRepr>,
    bottom: ReebOrbit,
    top: ReebOrbit,
}

impl TryFrom<BuildingRepr> for Building {
    type Error = Error;
    fn try_from(r: BuildingRepr) -> Result<Self> {
        let mut lower = Vec::new();
        let mut middle = None;
        let mut upper = Vec::new();
        for level in r.levels {
            match (level.kind, middle.is_some()) {
                (LevelKind::Lower, false) => lower.push(level.curves),
                (LevelKind::Middle, false) => middle = Some(level.curves),
                (LevelKind::Upper, true) => upper.push(level.curves),
                (kind, _) => {
                    return Err(Error::Parse(format!(
                        "levels must be lower…, one middle, upper… from bottom to top; unexpected {kind:?}"
                    )))
                }
            }
        }
        let middle = middle.ok_or_else(|| Error::Parse("building has no middle level".into()))?;
        Ok(Building::new(r.cobordism, lower, middle, upper, r.bottom, r.top))
    }
}

impl From<Building> for BuildingRepr {
    fn from(b: Building) -> Self {
        let mut levels: Vec<LevelRepr> =
            b.lower_levels.into_iter().map(|curves| LevelRepr { kind: LevelKind::Lower, curves }).collect();
        levels.push(LevelRepr { kind: LevelKind::Middle, curves: b.middle_level });
        levels.extend(b.upper_levels.into_iter().map(|curves| LevelRepr { kind: LevelKind::Upper, curves }));
        Self { cobordism: b.cobordism, levels, bottom: b.bottom, top: b.top }
    }
}

/// Levels are numbered bottom to top from 0, curves within a level in their
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoPositivePuncture {
        level: usize,
        curve: usize,
    },
    MultiplePositivePunctures {
        level: usize,
        curve: usize,
        count: usize,
    },
    ActionInfeasible {
        level: usize,
        curve: usize,
        defect: String,
    },
    /// Negative ends of `level + 1` differ from positive ends of `level`.
    LevelMismatch {
        level: usize,
    },
    TopMismatch,
    BottomMismatch,
    EmptyLevel {
        level: usize,
    },
    Disconnected {
        components: usize,
    },
    /// `Σ (2 − #punctures)` over all curves, which is `0` for a cylinder.
    NotCylindrical {
        euler_characteristic: i64,
    },
}

impl Violation {
    fn breaks_matching(&self) -> bool {
        matches!(
            self,
            Violation::LevelMismatch { .. }
                | Violation::TopMismatch
                | Violation::BottomMismatch
                | Violation::EmptyLevel { .. }
        )
    }

    fn breaks_topology(&self) -> bool {
        self.breaks_matching() || matches!(self, Violation::Disconnected { .. } | Violation::NotCylindrical { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPositivePuncture { level, curve } => {
                write!(f, "level {level}, curve {curve}: no positive puncture")
            }
            Violation::MultiplePositivePunctures { level, curve, count } => {
                write!(f, "level {level}, curve {curve}: {count} positive punctures")
            }
            Violation::ActionInfeasible { level, curve, defect } => {
                write!(f, "level {level}, curve {curve}: action infeasible (defect {defect})")
            }
            Violation::LevelMismatch { level } => write!(f, "levels {level} and {} do not match", level + 1),
            Violation::TopMismatch => f.write_str("top level does not end at the top orbit"),
            Violation::BottomMismatch => f.write_str("bottom level does not end at the bottom orbit"),
            Violation::EmptyLevel { level } => write!(f, "level {level} is empty"),
            Violation::Disconnected { components } => write!(f, "{components} connected components"),
            Violation::NotCylindrical { euler_characteristic } => {
                write!(f, "Euler characteristic {euler_characteristic}, not a cylinder")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveRecord {
    pub level: usize,
    pub kind: LevelKind,
    #[serde(flatten)]
    pub ends: Punctures,
    #[serde(with = "json_int")]
    pub index: BigInt,
    pub action_defect: PerturbedRational,
    pub trivial_cover: bool,
    pub generic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildingDiagnostics {
    pub curves: Vec<CurveRecord>,
    #[serde(with = "json_int")]
    pub total_index: BigInt,
    pub cylindrical: bool,
    pub violations: Vec<Violation>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        self.0[rx] = ry;
    }
}

pub fn validate(b: &Building) -> BuildingDiagnostics {
    let levels = b.levels();
    let mut violations = Vec::new();
    let mut curves = Vec::new();
    let mut euler: i64 = 0;

    for (li, (kind, level)) in levels.iter().enumerate() {
        if level.is_empty() {
            violations.push(Violation::EmptyLevel { level: li });
        }
        let setting = b.setting(*kind);
        for (ci, c) in level.iter().enumerate() {
            match c.positives().len() {
                0 => violations.push(Violation::NoPositivePuncture { level: li, curve: ci }),
                1 => {}
                count => violations.push(Violation::MultiplePositivePunctures { level: li, curve: ci, count }),
            }
            let action_defect = setting.action_defect(c);
            if action_defect.is_negative() {
                violations.push(Violation::ActionInfeasible {
                    level: li,
                    curve: ci,
                    defect: action_defect.to_string(),
                });
            }
            euler += 2 - c.count() as i64;
            curves.push(CurveRecord {
                level: li,
                kind: *kind,
                ends: c.clone(),
                index: setting.fredholm_index(c),
                action_defect,
                trivial_cover: *kind != LevelKind::Middle && c.is_trivial_cylinder(),
                generic: setting.admits_regular_simple_model(c),
            });
        }
    }

    let ends = |level: &[Punctures], positive: bool| {
        let mut v: Vec<ReebOrbit> =
            level.iter().flat_map(|c| if positive { c.positives() } else { c.negatives() }).copied().collect();
        v.sort();
        v
    };
    for i in 0..levels.len().saturating_sub(1) {
        if ends(levels[i].1, true) != ends(levels[i + 1].1, false) {
            violations.push(Violation::LevelMismatch { level: i });
        }
    }
    if ends(levels[0].1, false) != vec![b.bottom] {
        violations.push(Violation::BottomMismatch);
    }
    if ends(levels[levels.len() - 1].1, true) != vec![b.top] {
        violations.push(Violation::TopMismatch);
    }

    // glue equal orbits in canonical order
    let offsets: Vec<usize> = levels
        .iter()
        .scan(0, |acc, (_, l)| {
            let start = *acc;
            *acc += l.len();
            Some(start)
        })
        .collect();
    let total = curves.len();
    let mut uf = UnionFind((0..total).collect());
    for i in 0..levels.len().saturating_sub(1) {
        let tagged = |level: &[Punctures], offset: usize, positive: bool| {
            let mut v: Vec<(ReebOrbit, usize)> = level
                .iter()
                .enumerate()
                .flat_map(|(ci, c)| {
                    let e = if positive { c.positives() } else { c.negatives() };
                    e.iter().map(move |o| (*o, offset + ci))
                })
                .collect();
            v.sort();
            v
        };
        let below = tagged(levels[i].1, offsets[i], true);
        let above = tagged(levels[i + 1].1, offsets[i + 1], false);
        let mut by_orbit: HashMap<ReebOrbit, Vec<usize>> = HashMap::new();
        for (o, c) in above {
            by_orbit.entry(o).or_default().push(c);
        }
        let mut taken: HashMap<ReebOrbit, usize> = HashMap::new();
        for (o, c) in below {
            let k = taken.entry(o).or_insert(0);
            if let Some(&d) = by_orbit.get(&o).and_then(|v| v.get(*k)) {
                uf.union(c, d);
            }
            *k += 1;
        }
    }
    let components = (0..total).map(|x| uf.find(x)).collect::<HashSet<_>>().len();
    if components > 1 {
        violations.push(Violation::Disconnected { components });
    }
    if euler != 0 {
        violations.push(Violation::NotCylindrical { euler_characteristic: euler });
    }

    let total_index = curves.iter().map(|c| &c.index).sum();
    let cylindrical = total > 0 && !violations.iter().any(Violation::breaks_topology);
    BuildingDiagnostics { curves, total_index, cylindrical, violations }
}

/// Sum of the curve indices. Fails when the levels do not match up.
pub fn building_index(b: &Building) -> Result<BigInt> {
    let d = validate(b);
    if d.violations.iter().any(Violation::breaks_matching) {
        return Err(Error::InvalidBuilding(d.violations));
    }
    Ok(d.total_index)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingCaps {
    pub max_levels_per_side: usize,
    /// Bound on the total multiplicity of the negative ends of any one curve.
    pub max_multiplicity: u64,
}

impl Default for BuildingCaps {
    fn default() -> Self {
        Self { max_levels_per_side: 3, max_multiplicity: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Upper,
    Middle,
    Lower,
}

#[derive(Clone, Debug)]
struct Move {
    curve: Punctures,
    index: BigInt,
}

/// Nontrivial curve choices per (phase, positive orbit), and whether the
/// bottom orbit can still be reached from each orbit.
struct Catalog {
    moves: HashMap<(Phase, ReebOrbit), Vec<Move>>,
    truncated: HashSet<(Phase, ReebOrbit)>,
    reach: HashSet<(Phase, ReebOrbit)>,
}

impl Catalog {
    fn build(cob: &CobordismData, top: ReebOrbit, bottom: ReebOrbit, max_mult: u64) -> Self {
        let upper = Setting::Symplectization(cob.outer().clone());
        let middle = Setting::Cobordism(cob.clone());
        let lower = Setting::Symplectization(cob.inner().clone());
        let setting = |p: Phase| match p {
            Phase::Upper => &upper,
            Phase::Middle => &middle,
            Phase::Lower => &lower,
        };

        let mut moves = HashMap::new();
        let mut truncated = HashSet::new();
        let mut queue = vec![(Phase::Upper, top)];
        while let Some(key @ (phase, orbit)) = queue.pop() {
            if moves.contains_key(&key) {
                continue;
            }
            let s = setting(phase);
            let budget = s.positive_boundary().action(&orbit);
            let cands = candidates(s.negative_boundary(), &budget, u64::MAX);
            let (sets, cap_hit) = orbit_multisets(&cands, usize::MAX, max_mult, Some(&budget), Execution::Sequential);
            if cap_hit {
                truncated.insert(key);
            }
            let list: Vec<Move> = sets
                .into_iter()
                .map(|neg| Punctures::new(vec![orbit], neg))
                .filter(|c| phase == Phase::Middle || !c.is_trivial_cylinder())
                .filter(|c| s.admits_regular_simple_model(c))
                .map(|curve| Move { index: s.fredholm_index(&curve), curve })
                .collect();
            let next = match phase {
                Phase::Upper => {
                    queue.push((Phase::Middle, orbit));
                    Phase::Upper
                }
                Phase::Middle | Phase::Lower => Phase::Lower,
            };
            for m in &list {
                queue.extend(m.curve.negatives().iter().map(|&o| (next, o)));
            }
            moves.insert(key, list);
        }

        // nontrivial moves strictly lower the action, so settle orbits in
        // increasing action within each phase
        let mut reach = HashSet::new();
        for phase in [Phase::Lower, Phase::Middle, Phase::Upper] {
            let s = setting(phase);
            let mut keys: Vec<ReebOrbit> = moves.keys().filter(|(p, _)| *p == phase).map(|(_, o)| *o).collect();
            keys.sort_by_key(|o| s.positive_boundary().action(o));
            let child = if phase == Phase::Upper { Phase::Upper } else { Phase::Lower };
            for o in keys {
                let ok = (phase == Phase::Lower && o == bottom)
                    || (phase == Phase::Upper && reach.contains(&(Phase::Middle, o)))
                    || moves[&(phase, o)]
                        .iter()
                        .any(|m| m.curve.negatives().iter().any(|n| reach.contains(&(child, *n))));
                if ok {
                    reach.insert((phase, o));
                }
            }
        }
        Self { moves, truncated, reach }
    }

    fn moves(&self, phase: Phase, o: ReebOrbit) -> &[Move] {
        self.moves.get(&(phase, o)).map(Vec::as_slice).unwrap_or(&[])
    }
}

struct Extension {
    level: Vec<Punctures>,
    open: Vec<ReebOrbit>,
    index: BigInt,
}

#[derive(Clone, Default)]
struct Partial {
    upper: Vec<Vec<Punctures>>,
    middle: Vec<Punctures>,
    lower: Vec<Vec<Punctures>>,
    index: BigInt,
}

struct Search<'a> {
    cob: &'a CobordismData,
    cat: &'a Catalog,
    caps: BuildingCaps,
    top: ReebOrbit,
    bottom: ReebOrbit,
    opts: &'a SearchOptions,
    found: Vec<Building>,
    cap_hit: bool,
    interrupted: bool,
}

impl Search<'_> {
    /// Every level whose curves have positive ends `open`, with at least one
    /// nontrivial curve and some open end below it that can still reach the
    /// bottom.
    fn extensions(&mut self, phase: Phase, open: &[ReebOrbit]) -> Vec<Extension> {
        let mut groups: Vec<(ReebOrbit, usize)> = Vec::new();
        for &o in open {
            match groups.last_mut() {
                Some((g, n)) if *g == o => *n += 1,
                _ => groups.push((o, 1)),
            }
            if self.cat.truncated.contains(&(phase, o)) {
                self.cap_hit = true;
            }
        }
        let cat = self.cat;
        let trivial = phase != Phase::Middle;
        let reachable = |n: &ReebOrbit| match phase {
            Phase::Upper => cat.reach.contains(&(Phase::Upper, *n)),
            Phase::Middle | Phase::Lower => cat.reach.contains(&(Phase::Lower, *n)),
        };
        let mut out = Vec::new();
        let mut picks = Vec::with_capacity(open.len());
        pick(cat, phase, &groups, 0, 0, &mut picks, &mut |picks| {
            if trivial && picks.iter().all(|(_, m)| m.is_none()) {
                return;
            }
            let mut level = Vec::with_capacity(picks.len());
            let mut next = Vec::new();
            let mut index = BigInt::zero();
            for &(o, m) in picks {
                match m {
                    None => {
                        level.push(Punctures::trivial(o));
                        next.push(o);
                    }
                    Some(i) => {
                        let mv = &cat.moves(phase, o)[i];
                        level.push(mv.curve.clone());
                        next.extend_from_slice(mv.curve.negatives());
                        index += &mv.index;
                    }
                }
            }
            if next.iter().any(reachable) {
                next.sort_unstable_by(|x, y| y.cmp(x));
                out.push(Extension { level: sorted(level), open: next, index });
            }
        });
        out
    }

    fn cancelled(&mut self) -> bool {
        if self.opts.is_cancelled() {
            self.interrupted = true;
        }
        self.interrupted
    }

    fn upper(&mut self, open: &[ReebOrbit], partial: &Partial) {
        if self.cancelled() {
            return;
        }
        for ext in self.extensions(Phase::Middle, open) {
            let mut p = partial.clone();
            p.middle = ext.level;
            p.index += ext.index;
            self.lower(&ext.open, &p);
        }
        let exts = self.extensions(Phase::Upper, open);
        if partial.upper.len() >= self.caps.max_levels_per_side {
            self.cap_hit |= !exts.is_empty();
            return;
        }
        for ext in exts {
            let mut p = partial.clone();
            p.upper.push(ext.level);
            p.index += ext.index;
            self.upper(&ext.open, &p);
        }
    }

    fn lower(&mut self, open: &[ReebOrbit], partial: &Partial) {
        if self.cancelled() {
            return;
        }
        if open == [self.bottom] && partial.index.is_zero() {
            self.found.push(Building::new(
                self.cob.clone(),
                partial.lower.iter().rev().cloned().collect(),
                partial.middle.clone(),
                partial.upper.iter().rev().cloned().collect(),
                self.bottom,
                self.top,
            ));
        }
        let exts = self.extensions(Phase::Lower, open);
        if partial.lower.len() >= self.caps.max_levels_per_side {
            self.cap_hit |= !exts.is_empty();
            return;
        }
        for ext in exts {
            let mut p = partial.clone();
            p.lower.push(ext.level);
            p.index += ext.index;
            self.lower(&ext.open, &p);
        }
    }
}

type Pick = (ReebOrbit, Option<usize>);

/// Multisets of choices per group of equal orbits: `None` is the trivial
/// cylinder (symplectization phases only), `Some(i)` the i-th nontrivial
/// move. Within a group the choices are nondecreasing.
fn pick(
    cat: &Catalog,
    phase: Phase,
    groups: &[(ReebOrbit, usize)],
    g: usize,
    from: usize,
    picks: &mut Vec<Pick>,
    emit: &mut dyn FnMut(&[Pick]),
) {
    let Some(&(orbit, count)) = groups.get(g) else {
        emit(picks);
        return;
    };
    if picks.iter().filter(|(o, _)| *o == orbit).count() == count {
        pick(cat, phase, groups, g + 1, 0, picks, emit);
        return;
    }
    let offset = usize::from(phase != Phase::Middle);
    let n = cat.moves(phase, orbit).len() + offset;
    for choice in from..n {
        let m = if choice < offset { None } else { Some(choice - offset) };
        picks.push((orbit, m));
        pick(cat, phase, groups, g, choice, picks, emit);
        picks.pop();
    }
}

/// Every cylindrical building of total index 0 from `α₂^ℓ` down to `α₁ᵏ`
/// within `caps`, with no all-trivial levels, every curve action feasible and
/// admitting a regular simple model. Sorted.
pub fn enumerate_cylindrical(cob: &CobordismData, k: u64, l: u64, caps: BuildingCaps) -> Result<Vec<Building>> {
    Ok(enumerate_cylindrical_with(cob, k, l, caps, &SearchOptions::default())?.items)
}

pub fn enumerate_cylindrical_with(
    cob: &CobordismData,
    k: u64,
    l: u64,
    caps: BuildingCaps,
    opts: &SearchOptions,
) -> Result<Enumeration<Building>> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument(format!("k = {k} and ℓ = {l} must both be at least 1")));
    }
    let top = ReebOrbit::alpha(l);
    let bottom = ReebOrbit::alpha(k);
    let cat = Catalog::build(cob, top, bottom, caps.max_multiplicity);
    let search =
        || Search { cob, cat: &cat, caps, top, bottom, opts, found: Vec::new(), cap_hit: false, interrupted: false };

    // the first level below the top orbit fans out across workers
    let mut root = search();
    let middle_first = root.extensions(Phase::Middle, &[top]);
    let upper_first = root.extensions(Phase::Upper, &[top]);
    if caps.max_levels_per_side == 0 && !upper_first.is_empty() {
        root.cap_hit = true;
    }
    let mut branches: Vec<(Phase, Extension)> = middle_first.into_iter().map(|e| (Phase::Middle, e)).collect();
    if caps.max_levels_per_side > 0 {
        branches.extend(upper_first.into_iter().map(|e| (Phase::Upper, e)));
    }
    let results = par::map(opts.execution, branches, |(phase, ext)| {
        let mut s = search();
        let mut p = Partial { index: ext.index, ..Partial::default() };
        match phase {
            Phase::Middle => {
                p.middle = ext.level;
                s.lower(&ext.open, &p);
            }
            _ => {
                p.upper.push(ext.level);
                s.upper(&ext.open, &p);
            }
        }
        (s.found, s.cap_hit, s.interrupted)
    });

    let mut items = Vec::new();
    let mut cap_hit = root.cap_hit;
    let mut interrupted = false;
    for (found, hit, stop) in results {
        items.extend(found);
        cap_hit |= hit;
        interrupted |= stop;
    }
    items.sort();
    items.dedup();
    Ok(Enumeration { items, cap_hit, interrupted: interrupted || opts.is_cancelled() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellipsoid::Ellipsoid;
    use crate::par::CancelToken;
    use ReebOrbit as O;

    fn ell(a: &str, b: &str) -> Ellipsoid {
        Ellipsoid::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    fn cob() -> CobordismData {
        CobordismData::new(ell("1", "5 + e"), ell("2", "13 + e")).unwrap()
    }

    fn curve(pos: &[O], neg: &[O]) -> Punctures {
        Punctures::new(pos.to_vec(), neg.to_vec())
    }

    #[test]
    fn single_cylinder() {
        let b = Building::cylinder(cob(), O::alpha(4), O::alpha(4));
        assert_eq!(building_index(&b).unwrap(), BigInt::zero());
        let d = validate(&b);
        assert!(d.cylindrical);
        assert!(d.violations.is_empty());
        assert_eq!(d.curves.len(), 1);
        assert!(!d.curves[0].trivial_cover);
    }

    #[test]
    fn trivial_lower_level_adds_nothing() {
        let lower = vec![vec![Punctures::trivial(O::alpha(4))]];
        let b =
            Building::new(cob(), lower, vec![curve(&[O::alpha(4)], &[O::alpha(4)])], vec![], O::alpha(4), O::alpha(4));
        assert_eq!(building_index(&b).unwrap(), BigInt::zero());
        let d = validate(&b);
        assert!(d.cylindrical && d.violations.is_empty());
        assert!(d.curves[0].trivial_cover);
    }

    #[test]
    fn unmatched_ends_are_rejected() {
        let lower = vec![vec![curve(&[O::alpha(3)], &[])]];
        let b =
            Building::new(cob(), lower, vec![curve(&[O::alpha(4)], &[O::alpha(3)])], vec![], O::alpha(4), O::alpha(4));
        let Err(Error::InvalidBuilding(v)) = building_index(&b) else { panic!("expected InvalidBuilding") };
        assert!(v.contains(&Violation::BottomMismatch));
    }

    #[test]
    fn per_curve_violations() {
        let middle = vec![curve(&[], &[O::alpha(4)])];
        let d = validate(&Building::new(cob(), vec![], middle, vec![], O::alpha(4), O::alpha(4)));
        assert!(d.violations.contains(&Violation::NoPositivePuncture { level: 0, curve: 0 }));
        assert!(!d.cylindrical);

        let lower = vec![vec![curve(&[O::alpha(1)], &[O::alpha(2)])]];
        let b =
            Building::new(cob(), lower, vec![curve(&[O::alpha(4)], &[O::alpha(1)])], vec![], O::alpha(2), O::alpha(4));
        let d = validate(&b);
        assert!(matches!(d.violations[..], [Violation::ActionInfeasible { level: 0, curve: 0, .. }]));
        assert!(d.cylindrical);
    }

    #[test]
    fn euler_characteristic_and_connectivity() {
        // pair of pants capped by a plane: still a cylinder
        let lower = vec![vec![curve(&[O::alpha(1)], &[]), Punctures::trivial(O::alpha(2))]];
        let middle = vec![curve(&[O::alpha(2)], &[O::alpha(2), O::alpha(1)])];
        let b = Building::new(cob(), lower, middle, vec![], O::alpha(2), O::alpha(2));
        let d = validate(&b);
        assert!(d.cylindrical, "{:?}", d.violations);
        assert_eq!(d.total_index, d.curves.iter().map(|c| &c.index).sum::<BigInt>());

        // two disjoint cylinders cannot share one top and one bottom
        let middle = vec![curve(&[O::alpha(2)], &[O::alpha(2)]), curve(&[O::alpha(1)], &[O::alpha(1)])];
        let d = validate(&Building::new(cob(), vec![], middle, vec![], O::alpha(2), O::alpha(2)));
        assert!(d.violations.contains(&Violation::Disconnected { components: 2 }));
        assert!(d.violations.contains(&Violation::TopMismatch));
    }

    #[test]
    fn classification_instance() {
        let caps = BuildingCaps { max_levels_per_side: 3, max_multiplicity: 12 };
        for exec in [Execution::Sequential, Execution::Parallel] {
            let got = enumerate_cylindrical_with(&cob(), 4, 4, caps, &SearchOptions::with_execution(exec)).unwrap();
            assert_eq!(got.items, vec![Building::cylinder(cob(), O::alpha(4), O::alpha(4))]);
            assert!(got.is_complete());
        }
    }

    #[test]
    fn minimal_action_instance() {
        let got = enumerate_cylindrical(&cob(), 1, 1, BuildingCaps::default()).unwrap();
        assert_eq!(got, vec![Building::cylinder(cob(), O::alpha(1), O::alpha(1))]);
    }

    #[test]
    fn zero_caps_give_nothing() {
        let caps = BuildingCaps { max_levels_per_side: 0, max_multiplicity: 0 };
        let got = enumerate_cylindrical_with(&cob(), 4, 4, caps, &SearchOptions::default()).unwrap();
        assert!(got.items.is_empty());
        assert!(got.cap_hit);
    }

    #[test]
    fn mismatched_indices_give_nothing() {
        assert!(enumerate_cylindrical(&cob(), 3, 4, BuildingCaps::default()).unwrap().is_empty());
        assert!(enumerate_cylindrical(&cob(), 0, 4, BuildingCaps::default()).is_err());
    }

    #[test]
    fn cancelled_search_reports_interruption() {
        let token = CancelToken::new();
        token.cancel();
        let opts = SearchOptions::default().cancel_with(token);
        let got = enumerate_cylindrical_with(&cob(), 4, 4, BuildingCaps::default(), &opts).unwrap();
        assert!(got.interrupted);
    }

    #[test]
    fn json_round_trip() {
        let lower = vec![vec![Punctures::trivial(O::alpha(4))]];
        let b =
            Building::new(cob(), lower, vec![curve(&[O::alpha(4)], &[O::alpha(4)])], vec![], O::alpha(4), O::alpha(4));
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["levels"][0]["kind"], "lower");
        assert_eq!(v["levels"][1]["kind"], "middle");
        assert_eq!(v["top"], serde_json::json!({"gen": "alpha", "mult": 4}));
        assert_eq!(serde_json::from_value::<Building>(v).unwrap(), b);

        let bad = serde_json::json!({
            "cobordism": serde_json::to_value(cob()).unwrap(),
            "levels": [{"kind": "upper", "curves": []}, {"kind": "middle", "curves": []}],
            "bottom": {"gen": "alpha", "mult": 1},
            "top": {"gen": "alpha", "mult": 1}
        });
        assert!(serde_json::from_value::<Building>(bad).is_err());
    }
}
