//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("the zero polynomial has no roots or valuation")]
    ZeroPolynomial,
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("function has a pole at {0}")]
    Pole(String),
    #[error("unsupported place {0}: only places rational over F9 are handled")]
    UnsupportedPlace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("classification failed: {0}")]
    Classification(String),
    #[error("invalid lattice label: {0}")]
    InvalidLabel(String),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("neighbor step failed: {0}")]
    Neighbor(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}
