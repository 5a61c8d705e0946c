//! Reeb dynamics on irrational ellipsoids in ℝ⁴: exact ε-perturbed actions,
//! Conley–Zehnder and Fredholm indices, action-feasible punctured curves,
//! cylindrical building skeletons and checkers for embedding obstructions.
//!
//! ```
//! use reeb_core::{check_theorem_main, enumerate_cylindrical, BuildingCaps, CobordismData, Ellipsoid, ReebOrbit};
//!
//! let e = |a: &str, b: &str| Ellipsoid::new(a.parse().unwrap(), b.parse().unwrap()).unwrap();
//! let inner = e("1", "5 + e");
//! let outer = e("2", "13 + e");
//! assert_eq!(inner.cz_index(&ReebOrbit::alpha(4)), 9.into());
//!
//! let cob = CobordismData::new(inner, outer).unwrap();
//! let verdict = check_theorem_main(&cob, 4).unwrap();
//! assert_eq!(verdict.witness.unwrap().l, 4);
//!
//! let found = enumerate_cylindrical(&cob, 4, 4, BuildingCaps::default()).unwrap();
//! assert_eq!(found.len(), 1);
//! ```

pub mod arith;
pub mod building;
pub mod checkers;
pub mod curve;
pub mod ellipsoid;
pub mod error;
pub mod par;

pub use num_bigint::BigInt;

pub use arith::{divide, floor_perturbed, floor_ratio, PerturbedRational, Rational};
pub use building::{
    building_index, enumerate_cylindrical, enumerate_cylindrical_with, validate, Building, BuildingCaps,
    BuildingDiagnostics, LevelKind, Violation,
};
pub use checkers::{
    answer1_area_obstruction, check_theorem_alt, check_theorem_main, fib_odd, proposition_nope_instance, Verdict,
};
pub use curve::{
    action_defect, cover, enumerate_feasible, enumerate_feasible_with, fredholm_index, is_trivial_cover,
    AsymptoticData, CobordismData, Enumeration, FeasibilityCaps, Punctures, Setting,
};
pub use ellipsoid::{Ellipsoid, Generator, ReebOrbit};
pub use error::{Error, Result};
pub use par::{CancelToken, Execution, SearchOptions};
