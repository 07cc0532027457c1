use num_complex::Complex;
use num_traits::Zero;

use super::{FockDim, Modes, TruncatedState};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::scalar::Real;

/// Dense operator on a truncated one- or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator<T> {
    dim: FockDim,
    modes: Modes,
    matrix: CMatrix<T>,
    hermitian: bool,
}

impl<T: Real> TruncatedOperator<T> {
    pub fn new(dim: FockDim, modes: Modes, matrix: CMatrix<T>) -> Result<Self> {
        let len = modes.space_len(dim);
        if matrix.rows() != len || matrix.cols() != len {
            return Err(Error::DimensionMismatch(format!(
                "operator with {} mode(s) at dim {dim} needs a {len}x{len} matrix, got {}x{}",
                modes.count(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NumericalGuard("operator has non-finite entries".into()));
        }
        Ok(Self {
            dim,
            modes,
            matrix,
            hermitian: false,
        })
    }

    pub fn identity(dim: FockDim, modes: Modes) -> Self {
        Self {
            dim,
            modes,
            matrix: CMatrix::identity(modes.space_len(dim)),
            hermitian: true,
        }
    }

    pub fn zero(dim: FockDim, modes: Modes) -> Self {
        let len = modes.space_len(dim);
        Self {
            dim,
            modes,
            matrix: CMatrix::zeros(len, len),
            hermitian: true,
        }
    }

    /// `|psi><psi|`.
    pub fn projector(state: &TruncatedState<T>) -> Self {
        Self {
            dim: state.dim(),
            modes: state.modes(),
            matrix: CMatrix::outer(state.amplitudes(), state.amplitudes()),
            hermitian: true,
        }
    }

    /// Set the Hermitian flag after checking `max|M - M^dagger| <= tol`.
    pub fn into_hermitian(mut self, tol: T) -> Result<Self> {
        let defect = self.matrix.hermitian_defect();
        if defect > tol {
            return Err(Error::NumericalGuard(format!(
                "operator flagged Hermitian has defect {defect:e} > {tol:e}"
            )));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> FockDim {
        self.dim
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            modes: self.modes,
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            modes: self.modes,
            matrix: self.matrix.add(&other.matrix),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            modes: self.modes,
            matrix: self.matrix.sub(&other.matrix),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            modes: self.modes,
            matrix: self.matrix.scale(Complex::new(s, T::zero())),
            hermitian: self.hermitian,
        }
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            modes: self.modes,
            matrix: self.matrix.matmul(&other.matrix),
            hermitian: false,
        })
    }

    /// `self ⊗ other`; `self` acts on the slow (first) mode.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.modes != Modes::One || other.modes != Modes::One {
            return Err(Error::InvalidInput(
                "tensor product needs two single-mode operators".into(),
            ));
        }
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            modes: Modes::Two,
            matrix: self.matrix.kron(&other.matrix),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// `self |psi>`. The result may exceed unit norm for non-contractive operators,
    /// so it is returned as a raw amplitude vector.
    pub fn apply(&self, state: &TruncatedState<T>) -> Result<Vec<Complex<T>>> {
        if self.dim != state.dim() || self.modes != state.modes() {
            return Err(Error::DimensionMismatch(format!(
                "operator (dim {}, {} modes) applied to state (dim {}, {} modes)",
                self.dim,
                self.modes.count(),
                state.dim(),
                state.modes().count()
            )));
        }
        Ok(self.matrix.mul_vec(state.amplitudes()))
    }

    /// `<psi| self |psi>`.
    pub fn expectation(&self, state: &TruncatedState<T>) -> Result<Complex<T>> {
        let applied = self.apply(state)?;
        Ok(state
            .amplitudes()
            .iter()
            .zip(&applied)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// `<left| self |right>`.
    pub fn matrix_element(&self, left: &TruncatedState<T>, right: &TruncatedState<T>) -> Result<Complex<T>> {
        let applied = self.apply(right)?;
        if left.dim() != self.dim || left.modes() != self.modes {
            return Err(Error::DimensionMismatch("bra does not match operator".into()));
        }
        Ok(left
            .amplitudes()
            .iter()
            .zip(&applied)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self.matrix.max_abs_diff(&other.matrix))
    }

    /// Max-norm of `self - I`.
    pub fn identity_defect(&self) -> T {
        self.matrix.identity_defect()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Top-left block on the first `n` Fock levels of a single-mode operator.
    pub fn leading_block(&self, n: FockDim) -> Result<Self> {
        if self.modes != Modes::One || n > self.dim {
            return Err(Error::InvalidInput(format!(
                "cannot take a {n}-level block of a dim {} operator with {} mode(s)",
                self.dim,
                self.modes.count()
            )));
        }
        Ok(Self {
            dim: n,
            modes: Modes::One,
            matrix: self.matrix.leading_block(n.get()),
            hermitian: self.hermitian,
        })
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.modes != other.modes {
            return Err(Error::DimensionMismatch(format!(
                "operators differ: dim {} / {} modes vs dim {} / {} modes",
                self.dim,
                self.modes.count(),
                other.dim,
                other.modes.count()
            )));
        }
        Ok(())
    }

    pub(crate) fn from_parts(dim: FockDim, modes: Modes, matrix: CMatrix<T>, hermitian: bool) -> Self {
        debug_assert_eq!(matrix.rows(), modes.space_len(dim));
        Self {
            dim,
            modes,
            matrix,
            hermitian,
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
    fn identity_tensor_identity() {
        let i = TruncatedOperator::<f64>::identity(d(6), Modes::One);
        let ii = i.tensor(&i).unwrap();
        assert_eq!(ii, TruncatedOperator::identity(d(6), Modes::Two));
    }

    #[test]
    fn hermitian_flag_is_verified() {
        let mut m = CMatrix::<f64>::identity(3);
        m[(0, 1)] = Complex::new(0.0, 1.0);
        let op = TruncatedOperator::new(d(3), Modes::One, m).unwrap();
        assert!(op.clone().into_hermitian(1e-9).is_err());
        let fixed = op.checked_add(&op.adjoint()).unwrap();
        assert!(fixed.into_hermitian(1e-9).unwrap().is_hermitian());
    }

    #[test]
    fn mixed_dimension_arithmetic_rejected() {
        let a = TruncatedOperator::<f64>::identity(d(3), Modes::One);
        let b = TruncatedOperator::<f64>::identity(d(4), Modes::One);
        assert!(matches!(a.checked_add(&b), Err(Error::DimensionMismatch(_))));
        assert!(a.compose(&b).is_err());
        let two = TruncatedOperator::<f64>::identity(d(3), Modes::Two);
        assert!(a.checked_sub(&two).is_err());
    }

    #[test]
    fn wrong_shape_rejected() {
        let m = CMatrix::<f64>::identity(5);
        assert!(TruncatedOperator::new(d(4), Modes::One, m).is_err());
    }
}
