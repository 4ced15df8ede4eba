use thiserror::Error;

/// Errors reported by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The problem definition violates a structural requirement.
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// Eigenvalue or root bracketing failed after all window expansions.
    #[error("bracketing failed for index {index} on [{lo}, {hi}]")]
    Bracket { index: usize, lo: f64, hi: f64 },

    /// A driving frequency sits on top of an undamped resonance.
    #[error("frequency {omega} is within relative {rel:e} of resonance omega_{mode} = {omega_n}")]
    Resonance {
        omega: f64,
        mode: usize,
        omega_n: f64,
        rel: f64,
    },

    /// The requested combination of options has no implementation.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A query exceeds the precomputed range of a table.
    #[error("{what} = {value} exceeds the limit {limit}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        limit: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
