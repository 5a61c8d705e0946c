#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reeb_core::arith::{divide, floor_perturbed, rational, PerturbedRational, Rational};
use reeb_core::{CobordismData, Ellipsoid, Generator, Punctures, ReebOrbit, Setting};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rational(rng.random_range(1..=max_num), rng.random_range(1..=max_den))
}

/// `E(a, b)` with rational `a < b` and an ε term on exactly one of them.
pub fn random_ellipsoid(rng: &mut ChaCha8Rng) -> Ellipsoid {
    loop {
        let a = random_rational(rng, 20, 9);
        let b = &a + &a * random_rational(rng, 40, 9);
        let coeff = [rational(1, 1), rational(-1, 1), rational(1, 2), rational(3, 1)][rng.random_range(0..4)].clone();
        let zero = Rational::from_integer(0.into());
        let (ea, eb) = if rng.random_bool(0.5) { (coeff, zero) } else { (zero, coeff) };
        if let Ok(e) = Ellipsoid::new(PerturbedRational::new(a, ea), PerturbedRational::new(b, eb)) {
            return e;
        }
    }
}

pub fn random_cobordism(rng: &mut ChaCha8Rng) -> CobordismData {
    loop {
        let inner = random_ellipsoid(rng);
        let grow_a = PerturbedRational::from_rational(random_rational(rng, 30, 7));
        let grow_b = PerturbedRational::from_rational(random_rational(rng, 60, 7));
        let Ok(outer) = Ellipsoid::new(inner.a() + &grow_a, inner.b() + &grow_b) else { continue };
        if let Ok(c) = CobordismData::new(inner, outer) {
            return c;
        }
    }
}

/// `#{orbits with action ≤ action(γ)}` by direct counting.
pub fn rank_by_count(e: &Ellipsoid, orbit: &ReebOrbit) -> BigInt {
    let bound = e.action(orbit);
    let count = |period: &PerturbedRational| {
        let mut n = 0u64;
        while period.scale_int(n + 1) <= bound {
            n += 1;
        }
        n
    };
    BigInt::from(count(e.a()) + count(e.b()))
}

pub fn cz_by_count(e: &Ellipsoid, orbit: &ReebOrbit) -> BigInt {
    rank_by_count(e, orbit) * 2 + 1
}

/// `2k + 2⌊k·a/b⌋ + 1` through the first-order quotient.
pub fn cz_by_division(e: &Ellipsoid, orbit: &ReebOrbit) -> BigInt {
    let k = orbit.multiplicity();
    let (num, den) = match orbit.generator() {
        Generator::Fast => (e.a(), e.b()),
        Generator::Slow => (e.b(), e.a()),
    };
    let q = divide(&num.scale_int(k), den).expect("one side carries no ε");
    BigInt::from(2 * k + 1) + floor_perturbed(&q).expect("irrational ratio") * 2
}

/// `(#ends − 2) + Σ CZ⁺ − Σ CZ⁻` with CZ from direct counting.
pub fn index_by_count(setting: &Setting, ends: &Punctures) -> BigInt {
    let pos: BigInt = ends.positives().iter().map(|o| cz_by_count(setting.positive_boundary(), o)).sum();
    let neg: BigInt = ends.negatives().iter().map(|o| cz_by_count(setting.negative_boundary(), o)).sum();
    BigInt::from(ends.count()) - 2 + pos - neg
}

/// Every orbit of `e` up to multiplicity `max_mult`, sorted by action.
pub fn spectrum_by_sorting(e: &Ellipsoid, max_mult: u64) -> Vec<ReebOrbit> {
    let mut all: Vec<ReebOrbit> = (1..=max_mult).flat_map(|k| [ReebOrbit::alpha(k), ReebOrbit::beta(k)]).collect();
    all.sort_by_key(|o| e.action(o));
    all
}
