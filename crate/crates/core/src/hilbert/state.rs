use num_complex::Complex;
use num_traits::{One, Zero};

use super::{FockDim, Modes};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance;

/// Pure state on a truncated one- or two-mode Fock space.
///
/// Truncation may lose norm but a state never carries more than unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState<T> {
    dim: FockDim,
    modes: Modes,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> TruncatedState<T> {
    pub fn new(dim: FockDim, modes: Modes, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let expected = modes.space_len(dim);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "state with {} mode(s) at dim {dim} needs {expected} amplitudes, got {}",
                modes.count(),
                amplitudes.len()
            )));
        }
        let state = Self {
            dim,
            modes,
            amplitudes,
        };
        let norm = state.norm();
        if !norm.is_finite() || norm > T::one() + T::lit(tolerance::STRUCTURAL) {
            return Err(Error::InvalidInput(format!(
                "state norm {norm} exceeds 1 (truncation can only lose norm)"
            )));
        }
        Ok(state)
    }

    /// Number state `|index>` (two-mode index follows the slow-first convention).
    pub fn basis(dim: FockDim, modes: Modes, index: usize) -> Result<Self> {
        let len = modes.space_len(dim);
        if index >= len {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for length {len}"
            )));
        }
        let mut amplitudes = vec![Complex::zero(); len];
        amplitudes[index] = Complex::one();
        Ok(Self {
            dim,
            modes,
            amplitudes,
        })
    }

    pub fn vacuum(dim: FockDim, modes: Modes) -> Self {
        Self::basis(dim, modes, 0).expect("index 0 always exists")
    }

    pub fn dim(&self) -> FockDim {
        self.dim
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_compatible(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// `self ⊗ other`; `self` becomes the slow (first) mode.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.modes != Modes::One || other.modes != Modes::One {
            return Err(Error::InvalidInput(
                "tensor product needs two single-mode states".into(),
            ));
        }
        self.check_compatible(other)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| *a * *b))
            .collect();
        Ok(Self {
            dim: self.dim,
            modes: Modes::Two,
            amplitudes,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm())))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.modes != other.modes {
            return Err(Error::DimensionMismatch(format!(
                "states differ: dim {} / {} modes vs dim {} / {} modes",
                self.dim,
                self.modes.count(),
                other.dim,
                other.modes.count()
            )));
        }
        Ok(())
    }

    /// Crate-internal constructor for vectors already known to be valid.
    pub(crate) fn from_parts(dim: FockDim, modes: Modes, amplitudes: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), modes.space_len(dim));
        Self {
            dim,
            modes,
            amplitudes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> FockDim {
        FockDim::new(n).unwrap()
    }

    #[test]
    fn vacuum_tensor_vacuum_is_two_mode_vacuum() {
        let v = TruncatedState::<f64>::vacuum(d(5), Modes::One);
        let vv = v.tensor(&v).unwrap();
        assert_eq!(vv.modes(), Modes::Two);
        assert_eq!(vv.amplitudes().len(), 25);
        assert_eq!(vv.amplitudes()[0], Complex::new(1.0, 0.0));
        assert!(vv.amplitudes()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn rejects_norm_gain() {
        let amps = vec![Complex::new(1.0, 0.0), Complex::new(0.5, 0.0)];
        assert!(TruncatedState::new(d(2), Modes::One, amps).is_err());
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let a = TruncatedState::<f64>::vacuum(d(4), Modes::One);
        let b = TruncatedState::<f64>::vacuum(d(5), Modes::One);
        assert!(matches!(a.inner(&b), Err(Error::DimensionMismatch(_))));
        assert!(a.tensor(&b).is_err());
    }
}
