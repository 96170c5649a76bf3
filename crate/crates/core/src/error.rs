use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Gamma factor (or a quantity built from one) hit a pole.
    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected dim {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("least-squares system is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    /// Two expansion exponents coincide or differ by an integer.
    #[error("exceptional parameters: {0}")]
    Exceptional(String),

    #[error("ordering precondition violated: {0}")]
    Ordering(String),
}

pub type Result<T> = std::result::Result<T, Error>;
