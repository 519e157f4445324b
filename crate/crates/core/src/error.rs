use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A denominator or Pochhammer base vanished. The string names the factor.
    #[error("pole: {0} vanishes")]
    Pole(String),

    /// The two-series representation is undefined (zero lower parameter or
    /// vanishing prefactor); evaluate through the recurrence instead.
    #[error("normalization undefined: {0}")]
    Normalization(String),

    #[error("degree ({n1},{n2}) outside the simplex n1+n2 <= {max}")]
    Degree { n1: usize, n2: usize, max: usize },

    #[error("inadmissible truncation: {0}")]
    Inadmissible(String),

    #[error("interpolation residual: {0}")]
    Interpolation(String),

    #[error("precision exhausted: {lost:.1} bits cancelled at P = {precision} (limit {limit})")]
    Precision { lost: f64, precision: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    /// A request that is well formed but cannot be carried out as given.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
