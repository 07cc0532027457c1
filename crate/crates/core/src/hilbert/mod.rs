//! Truncated Fock-space linear algebra for one or two bosonic modes.
//!
//! Two-mode objects use the ordering `index = n1 * dim + n2`: the first mode
//! (the `b1` slot of the receiver, or the signal mode `a`) varies slowest.

mod operator;
mod optics;
mod state;

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use operator::TruncatedOperator;
pub use optics::{
    beam_splitter_unitary, coherent_state, displacement_operator, normally_ordered_gaussian,
    normally_ordered_product, sandwich_product, vacuum_expectation, BeamSplitter, Unitary,
};
pub use state::TruncatedState;

pub(crate) use optics::check_adequacy;

/// Number of Fock levels kept per mode, `|0>..|n-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockDim(usize);

impl FockDim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "Fock dimension must be at least 2, got {n}"
            )));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Default truncation for amplitudes up to `max_abs`:
    /// `max(16, ceil(|a|^2 + 8|a| + 12))`.
    pub fn for_amplitude<T: Real>(max_abs: T) -> Self {
        let a = max_abs.abs().as_f64();
        let n = (a * a + 8.0 * a + 12.0).ceil();
        let n = if n.is_finite() { n as usize } else { usize::MAX };
        Self(n.max(16))
    }
}

impl fmt::Display for FockDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modes {
    One,
    Two,
}

impl Modes {
    pub fn count(self) -> usize {
        match self {
            Modes::One => 1,
            Modes::Two => 2,
        }
    }

    /// Length of a state vector with this many modes.
    pub fn space_len(self, dim: FockDim) -> usize {
        match self {
            Modes::One => dim.get(),
            Modes::Two => dim.get() * dim.get(),
        }
    }
}

/// Complex coherent-state amplitude; `|alpha|^2` is the mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAmplitude<T>(Complex<T>);

impl<T: Real> ComplexAmplitude<T> {
    pub fn new(re: T, im: T) -> Result<Self> {
        Self::from_complex(Complex::new(re, im))
    }

    pub fn real(re: T) -> Result<Self> {
        Self::new(re, T::zero())
    }

    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "complex amplitude must be finite, got {} + {}i",
                z.re, z.im
            )));
        }
        Ok(Self(z))
    }

    pub fn zero() -> Self {
        Self(Complex::new(T::zero(), T::zero()))
    }

    pub fn value(self) -> Complex<T> {
        self.0
    }

    pub fn re(self) -> T {
        self.0.re
    }

    pub fn im(self) -> T {
        self.0.im
    }

    pub fn norm(self) -> T {
        self.0.norm()
    }

    pub fn norm_sqr(self) -> T {
        self.0.norm_sqr()
    }

    /// Multiply by a real factor, re-checking finiteness.
    pub fn scaled(self, s: T) -> Result<Self> {
        Self::from_complex(self.0 * s)
    }
}

impl<T: Real> fmt::Display for ComplexAmplitude<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.0.re, self.0.im)
    }
}
