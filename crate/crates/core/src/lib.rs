//! Optimal unambiguous receiver for two coherent states.
//!
//! The crate builds the receiver's four-outcome POVM on a truncated Fock
//! space in two independent ways (a closed normally-ordered form and an
//! explicit beam-splitter plus vacuum-ancilla reduction), evaluates outcome
//! probabilities, samples detector clicks, and simulates a time-multiplexed
//! two-state key-distribution link built from unbalanced interferometers.
//!
//! All numerics are generic over [`Real`]; the aliases at the crate root fix
//! the scalar to `f64`, which is what the tolerances are calibrated for.

pub mod discrimination;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod montecarlo;
pub mod multiplex;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Numerical tolerances shared across modules.
pub mod tolerance {
    /// Completeness, Hermiticity and other structural checks.
    pub const STRUCTURAL: f64 = 1e-9;
    /// Agreement between independently computed quantities.
    pub const CROSS_ORACLE: f64 = 1e-8;
    /// Eigenvalues in `[-EIGEN_FLOOR, 0)` count as zero in positivity checks.
    pub const EIGEN_FLOOR: f64 = 1e-10;
    /// Probability mass below this is zeroed before sampling.
    pub const SAMPLING_FLOOR: f64 = 1e-9;
    /// Clamping a probability by more than this is logged.
    pub const PROBABILITY_RESIDUE: f64 = 1e-10;
    /// Largest norm deficit `1 - |<alpha|alpha>|^(1/2)` tolerated for a truncated coherent state.
    pub const ADEQUACY_NORM_DEFICIT: f64 = 1e-8;
    /// Largest per-mode dimension for which dense `dim^2 x dim^2` matrices are formed.
    pub const MAX_DENSE_TWO_MODE_DIM: usize = 64;
    /// Largest per-mode dimension accepted by the ancilla POVM construction.
    pub const MAX_ANCILLA_DIM: usize = 128;
}

pub type ComplexAmplitude = hilbert::ComplexAmplitude<f64>;
pub type TruncatedState = hilbert::TruncatedState<f64>;
pub type TruncatedOperator = hilbert::TruncatedOperator<f64>;
pub type ReceiverConfig = discrimination::ReceiverConfig<f64>;
pub type PovmSet = discrimination::PovmSet<f64>;
pub type OutcomeDistribution = discrimination::OutcomeDistribution<f64>;
pub type MultiplexConfig = multiplex::MultiplexConfig<f64>;

pub use discrimination::Outcome;
pub use hilbert::FockDim;
