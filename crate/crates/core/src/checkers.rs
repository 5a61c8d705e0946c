//! Hypothesis checks for the cylinder and building existence results, the
//! odd-index Fibonacci family of nested ellipsoids, and the five-ended area
//! obstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::arith::{floor_ratio, integer, json_int, rational_to_string, PerturbedRational, Rational};
use crate::curve::{AsymptoticData, CobordismData, Setting};
use crate::ellipsoid::{Ellipsoid, ReebOrbit};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub l: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reason {
    pub id: String,
    pub holds: bool,
    pub values: Map<String, Value>,
}

impl Reason {
    fn new(id: &str, holds: bool, values: Value) -> Self {
        let Value::Object(values) = values else { unreachable!("reason values are objects") };
        Self { id: id.to_owned(), holds, values }
    }
}

/// Every condition is evaluated and recorded; `applicable` is their
/// conjunction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub applicable: bool,
    pub witness: Option<Witness>,
    pub reasons: Vec<Reason>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<Reason>, l: Option<u64>) -> Self {
        let applicable = reasons.iter().all(|r| r.holds);
        let witness = l.filter(|_| applicable).map(|l| Witness { l });
        Self { applicable, witness, reasons }
    }

    pub fn reason(&self, id: &str) -> Option<&Reason> {
        self.reasons.iter().find(|r| r.id == id)
    }
}

/// Cylinder `α₂^ℓ → α₁ᵏ`: needs `k·a₁ < b₁` and the orbit of `∂E₂` with
/// `CZ = 2k + 1` to be an iterate `α₂^ℓ` of the fast orbit. Also records the
/// consequence `k = ℓ + ⌊ℓa₂/b₂⌋`.
pub fn check_theorem_main(cob: &CobordismData, k: u64) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let (inner, outer) = (cob.inner(), cob.outer());
    let ka1 = inner.a().scale_int(k);
    let below_b = &ka1 < inner.b();
    let r_below_b = Reason::new(
        "k_below_b1_over_a1",
        below_b,
        json!({"k": k, "k_a1": ka1.to_string(), "b1": inner.b().to_string()}),
    );

    let matching = outer.orbit_with_cz(k)?;
    let r_fast = Reason::new(
        "matching_orbit_fast",
        matching.is_fast(),
        json!({
            "cz": 2 * u128::from(k) + 1,
            "cz_inner": int(&inner.cz_index(&ReebOrbit::alpha(k))),
            "orbit": matching,
        }),
    );

    let l = matching.is_fast().then(|| matching.multiplicity());
    let r_lk = match l {
        Some(l) => {
            let fl = floor_ratio(&outer.a().scale_int(l), outer.b())?;
            let holds = BigInt::from(k) == BigInt::from(l) + &fl;
            Reason::new("k_equals_l_plus_floor", holds, json!({"k": k, "l": l, "floor_l_a2_over_b2": int(&fl)}))
        }
        None => Reason::new("k_equals_l_plus_floor", false, json!({"k": k, "l": Value::Null})),
    };
    Ok(Verdict::from_reasons(vec![r_below_b, r_fast, r_lk], l))
}

/// Building version: needs `CZ(α₁ᵏ) = CZ(α₁ᵏ⁻¹) + 2` and an `ℓ` with
/// `CZ(α₂^ℓ) = CZ(α₁ᵏ)`.
pub fn check_theorem_alt(cob: &CobordismData, k: u64) -> Result<Verdict> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let (inner, outer) = (cob.inner(), cob.outer());
    let cz_k = inner.cz_index(&ReebOrbit::alpha(k));
    let cz_prev = inner.cz_index(&ReebOrbit::alpha(k - 1));
    let r_step = Reason::new(
        "cz_step_is_two",
        &cz_k - &cz_prev == BigInt::from(2),
        json!({"cz_k": int(&cz_k), "cz_k_minus_1": int(&cz_prev)}),
    );
    let matching = outer.orbit_with_index(&cz_k)?;
    let r_match = Reason::new("matching_orbit_fast", matching.is_fast(), json!({"cz": int(&cz_k), "orbit": matching}));
    let l = matching.is_fast().then(|| matching.multiplicity());
    Ok(Verdict::from_reasons(vec![r_step, r_match], l))
}

pub fn check_main_batch(pairs: &[(CobordismData, u64)], exec: Execution) -> Vec<Result<Verdict>> {
    par::map(exec, pairs.iter().collect(), |(cob, k)| check_theorem_main(cob, *k))
}

pub fn check_alt_batch(pairs: &[(CobordismData, u64)], exec: Execution) -> Vec<Result<Verdict>> {
    par::map(exec, pairs.iter().collect(), |(cob, k)| check_theorem_alt(cob, *k))
}

/// `g₀ = g₁ = 1`, `g_{n+2} = 3g_{n+1} − g_n`: the odd-index Fibonacci numbers
/// 1, 1, 2, 5, 13, 34, 89, …
pub fn fib_odd(n: u64) -> BigInt {
    let (mut g, mut h) = (BigInt::one(), BigInt::one());
    for _ in 0..n {
        let next = &h * 3 - &g;
        g = std::mem::replace(&mut h, next);
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NopeInstance {
    pub n: u64,
    pub c1: String,
    pub inner: Ellipsoid,
    pub outer: Ellipsoid,
    pub inner_orbit: ReebOrbit,
    pub outer_orbit: ReebOrbit,
    #[serde(with = "json_int")]
    pub cz_inner: BigInt,
    #[serde(with = "json_int")]
    pub cz_outer: BigInt,
    pub hypothesis_g_odd: bool,
    pub cz_equal: bool,
    /// The absence of cylinders between the two orbits is a known result,
    /// not something computed here.
    pub nonexistence_verified: bool,
}

/// `E₁ = c₁E(1, (g_{n+2} − g_n)/(2g_n) + ε) ⊂ E₂ = E(1, g_{n+2}/g_n + ε)` with
/// the orbit pair `α₁^{g_{n+2} − g_n}`, `α₂^{g_{n+2}}`.
pub fn proposition_nope_instance(n: u64, c1: &Rational) -> Result<NopeInstance> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n}; need n ≥ 2")));
    }
    if !c1.is_positive() || c1 >= &Rational::one() {
        return Err(Error::InvalidArgument(format!("c₁ = {c1} must lie in (0, 1)")));
    }
    let g_n = fib_odd(n);
    let g_n1 = fib_odd(n + 1);
    let g_n2 = fib_odd(n + 2);
    let plus_eps = |num: BigInt, den: BigInt| PerturbedRational::plus_eps(Rational::new(num, den));
    let one = PerturbedRational::from_integer(1);
    let inner = Ellipsoid::new(one.clone(), plus_eps(&g_n2 - &g_n, &g_n * 2))?.scaled(c1)?;
    let outer = Ellipsoid::new(one, plus_eps(g_n2.clone(), g_n.clone()))?;
    let mult = |v: BigInt| v.to_u64().ok_or_else(|| Error::MultiplicityOverflow(v.to_string()));
    let inner_orbit = ReebOrbit::alpha(mult(&g_n2 - &g_n)?);
    let outer_orbit = ReebOrbit::alpha(mult(g_n2)?);
    let cz_inner = inner.cz_index(&inner_orbit);
    let cz_outer = outer.cz_index(&outer_orbit);
    Ok(NopeInstance {
        n,
        c1: rational_to_string(c1),
        inner,
        outer,
        inner_orbit,
        outer_orbit,
        cz_equal: cz_inner == cz_outer,
        cz_inner,
        cz_outer,
        hypothesis_g_odd: g_n1.is_odd(),
        nonexistence_verified: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaObstruction {
    pub c: String,
    pub data: AsymptoticData,
    pub defect: PerturbedRational,
    pub obstructed: bool,
}

/// Five positive ends on `β` of `∂E(c, c+ε)`, one negative end on `α¹²` of
/// `∂E(1, 4+ε)`. Negative defect means the curve cannot exist, which happens
/// exactly when `5c < 12`.
pub fn answer1_area_obstruction(c: &Rational) -> Result<AreaObstruction> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument(format!("c = {c} must be positive")));
    }
    let outer = Ellipsoid::new(PerturbedRational::from_rational(c.clone()), PerturbedRational::plus_eps(c.clone()))?;
    let inner = Ellipsoid::new(PerturbedRational::from_integer(1), PerturbedRational::plus_eps(integer(4)))?;
    let setting = Setting::Cobordism(CobordismData::from_embedding(inner, outer));
    let data = AsymptoticData::new(setting, vec![ReebOrbit::beta(1); 5], vec![ReebOrbit::alpha(12)])?;
    let defect = data.action_defect();
    Ok(AreaObstruction { c: rational_to_string(c), obstructed: defect.is_negative(), defect, data })
}
