use thiserror::Error;

use crate::quantum::QuantumProfile;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A market parameter violates the named constraint.
    #[error("invalid market parameters: {0} violated")]
    InvalidParams(&'static str),

    #[error("negative quantity {0}")]
    NegativeQuantity(f64),

    #[error("negative strategy {0}")]
    NegativeStrategy(f64),

    #[error("squeezing parameter must be finite and >= 0, got {0}")]
    InvalidEntanglement(f64),

    #[error("equilibrium is not interior: {0}")]
    NonInteriorEquilibrium(String),

    #[error("common margin k must be positive, got {0}")]
    NonPositiveMargin(f64),

    #[error("closed form requires k1 = k2, got k1 = {k1}, k2 = {k2}")]
    AsymmetricMargins { k1: f64, k2: f64 },

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("expected a single sign change on [{lo}, {hi}], found {count}")]
    MultipleRoots { lo: f64, hi: f64, count: usize },

    #[error("no bracketing interval found below gamma = {0}")]
    NoBracket(f64),

    #[error("empty search interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("best-response dynamics did not converge in {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        last: QuantumProfile,
    },

    #[error("finite-difference step {h} is invalid at gamma = {gamma}")]
    StepOutOfDomain { gamma: f64, h: f64 },
}
