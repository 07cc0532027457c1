use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A coherent state at the requested truncation lost more norm than allowed.
    #[error("truncation adequacy guard failed: |alpha| = {amplitude:.6}, dim = {dim}, norm deficit {deficit:.3e} exceeds {limit:.1e}")]
    TruncationAdequacy {
        amplitude: f64,
        dim: usize,
        deficit: f64,
        limit: f64,
    },

    #[error("memory guard: two-mode workspace with dim = {dim} exceeds the cap of {cap}")]
    MemoryGuard { dim: usize, cap: usize },

    #[error("numerical guard failed: {0}")]
    NumericalGuard(String),
}

impl Error {
    /// True for failures caused by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TruncationAdequacy { .. } | Error::MemoryGuard { .. } | Error::NumericalGuard(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
