use thiserror::Error;

use crate::building::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An exact integer was reached where the ε-model requires a strict side.
    /// Almost always means a rational-ratio ellipsoid was supplied.
    #[error("degenerate tie: {0}")]
    DegenerateTie(String),

    /// A quotient of two ε-carrying values was requested; its first-order
    /// truncation cannot decide every comparison against it.
    #[error("second-order ambiguity: {0}")]
    SecondOrderAmbiguity(String),

    #[error("non-positive divisor {0}")]
    NonPositiveDivisor(String),

    #[error("invalid ellipsoid: {0}")]
    InvalidEllipsoid(String),

    #[error("invalid cobordism: {0}")]
    InvalidCobordism(String),

    #[error("invalid asymptotic data: {0}")]
    InvalidData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid building ({} violation(s))", .0.len())]
    InvalidBuilding(Vec<Violation>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("multiplicity {0} does not fit in 64 bits")]
    MultiplicityOverflow(String),
}
