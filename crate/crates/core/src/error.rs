use thiserror::Error;

/// Errors reported by the analysis kernels.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument was outside the documented domain (non-finite entries,
    /// negative tolerance, squeeze factor ≤ 0, t outside [0, 1], ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Bisection was asked to search an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    Bracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    /// A matrix that must describe a quantum state failed a structural
    /// requirement (e.g. a mode block is not positive definite).
    #[error("not a state: {0}")]
    NotAState(String),

    /// The state violates the uncertainty principle.
    #[error("not physical: {0}")]
    NotPhysical(String),

    /// Evaluation at the pole r1 = n of X(r1).
    #[error("X(r1) has a pole at r1 = n = {n}")]
    Pole { n: f64 },

    /// The branch discriminant went negative (possible only for m > n).
    #[error("branch discriminant negative: {0}")]
    Branch(String),

    /// A square-root argument left its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The root-search preconditions fail, i.e. the state does not satisfy
    /// the separability-derived bound that guarantees a bracketed root.
    #[error("no bracketed root: {0}")]
    NoBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;
