//! Optical states and operators on the truncated Fock space.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{ComplexAmplitude, FockDim, Modes, TruncatedOperator, TruncatedState};
use crate::error::{Error, Result};
use crate::linalg::{expm, CMatrix};
use crate::scalar::Real;
use crate::tolerance;

/// A unitary built on a truncated space together with its measured leak,
/// `max(|U^dagger U - I|, |U U^dagger - I|)` in max-norm.
#[derive(Debug, Clone)]
pub struct Unitary<T> {
    pub operator: TruncatedOperator<T>,
    pub leak: T,
}

impl<T: Real> Unitary<T> {
    fn measured(operator: TruncatedOperator<T>) -> Self {
        let m = operator.matrix();
        let adj = m.adjoint();
        let leak = adj.matmul(m).identity_defect().max(m.matmul(&adj).identity_defect());
        Self { operator, leak }
    }
}

/// `ln n!` for `n < len`, accumulated as a running sum of logarithms.
#[derive(Debug, Clone)]
struct LogFactorials<T>(Vec<T>);

impl<T: Real> LogFactorials<T> {
    fn new(len: usize) -> Self {
        let mut table = Vec::with_capacity(len.max(1));
        let mut acc = T::zero();
        table.push(acc);
        for k in 1..len {
            acc += T::from_usize_lossy(k).ln();
            table.push(acc);
        }
        Self(table)
    }

    fn get(&self, n: usize) -> T {
        self.0[n]
    }

    fn ln_binomial(&self, n: usize, k: usize) -> T {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// Fock amplitudes `exp(-|a|^2/2) a^n / sqrt(n!)` of a coherent state,
/// truncated to `dim` levels, and the norm actually retained.
pub fn coherent_state<T: Real>(
    alpha: ComplexAmplitude<T>,
    dim: FockDim,
) -> Result<(TruncatedState<T>, T)> {
    let a = alpha.value();
    let n = dim.get();
    let mut amps = Vec::with_capacity(n);
    // c_k = c_{k-1} * a / sqrt(k) keeps every intermediate bounded
    let mut c = Complex::new((-alpha.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    amps.push(c);
    for k in 1..n {
        c = c * a / T::from_usize_lossy(k).sqrt();
        amps.push(c);
    }
    let state = TruncatedState::from_parts(dim, Modes::One, amps);
    let norm = state.norm();
    Ok((state, norm))
}

/// Fails when the coherent state `|alpha>` loses more than the adequacy
/// tolerance of its norm at this truncation.
pub(crate) fn check_adequacy<T: Real>(alpha: ComplexAmplitude<T>, dim: FockDim) -> Result<()> {
    let (_, norm) = coherent_state(alpha, dim)?;
    let deficit = (T::one() - norm).as_f64();
    if deficit > tolerance::ADEQUACY_NORM_DEFICIT {
        return Err(Error::TruncationAdequacy {
            amplitude: alpha.norm().as_f64(),
            dim: dim.get(),
            deficit,
            limit: tolerance::ADEQUACY_NORM_DEFICIT,
        });
    }
    Ok(())
}

/// `D(alpha) = exp(alpha a^dagger - alpha^* a)`, exponentiated densely on the
/// truncated space.
///
/// The truncated generator is anti-Hermitian, so the result is unitary to
/// roundoff; it agrees with the true displacement only on levels well below
/// the cutoff.
pub fn displacement_operator<T: Real>(
    alpha: ComplexAmplitude<T>,
    dim: FockDim,
) -> Result<Unitary<T>> {
    let a = alpha.value();
    let n = dim.get();
    let mut generator = CMatrix::zeros(n, n);
    for k in 1..n {
        let s = T::from_usize_lossy(k).sqrt();
        generator[(k, k - 1)] = a * s;
        generator[(k - 1, k)] = -a.conj() * s;
    }
    let op = TruncatedOperator::new(dim, Modes::One, expm(&generator))?;
    Ok(Unitary::measured(op))
}

/// Two-mode beam splitter with power transmission `t` in the real orthogonal
/// convention
///
/// ```text
/// b1 =  sqrt(t) a + sqrt(1-t) v
/// b2 = sqrt(1-t) a -  sqrt(t) v
/// ```
///
/// which at `t = 1/2` is `(1/sqrt 2) [[1, 1], [1, -1]]`. The matrix is its own
/// inverse. Input kets are written in the `(a, v)` number basis, outputs in the
/// `(b1, b2)` number basis.
#[derive(Debug, Clone)]
pub struct BeamSplitter<T> {
    transmission: T,
    dim: FockDim,
    log_fact: LogFactorials<T>,
}

impl<T: Real> BeamSplitter<T> {
    pub fn new(power_transmission: T, dim: FockDim) -> Result<Self> {
        if !(power_transmission >= T::zero() && power_transmission <= T::one()) {
            return Err(Error::InvalidInput(format!(
                "beam-splitter transmission must lie in [0, 1], got {power_transmission}"
            )));
        }
        let log_fact = LogFactorials::new(2 * dim.get());
        Ok(Self {
            transmission: power_transmission,
            dim,
            log_fact,
        })
    }

    pub fn transmission(&self) -> T {
        self.transmission
    }

    /// Image of the input number state `|m>_a |n>_v`, dropping output
    /// components at or above the cutoff.
    ///
    /// Photon number is conserved, so for `m + n < dim` the image is exact.
    pub fn column(&self, m: usize, n: usize) -> Vec<Complex<T>> {
        let d = self.dim.get();
        let lf = &self.log_fact;
        let st = self.transmission.sqrt();
        let sr = (T::one() - self.transmission).sqrt();
        let mut out = vec![Complex::zero(); d * d];
        let total = m + n;
        for i in 0..=m {
            for k in 0..=n {
                let p = i + k;
                let q = total - p;
                if p >= d || q >= d {
                    continue;
                }
                let ln_mag = lf.ln_binomial(m, i) + lf.ln_binomial(n, k)
                    + T::lit(0.5) * (lf.get(p) + lf.get(q) - lf.get(m) - lf.get(n));
                let mut coef = ln_mag.exp()
                    * st.powi((i + n - k) as i32)
                    * sr.powi((m - i + k) as i32);
                if (n - k) % 2 == 1 {
                    coef = -coef;
                }
                out[p * d + q] += Complex::new(coef, T::zero());
            }
        }
        out
    }

    /// `U |psi>` for a two-mode state in the `(a, v)` basis.
    pub fn apply(&self, state: &TruncatedState<T>) -> Result<TruncatedState<T>> {
        if state.modes() != Modes::Two || state.dim() != self.dim {
            return Err(Error::DimensionMismatch(
                "beam splitter acts on two-mode states of its own dimension".into(),
            ));
        }
        let d = self.dim.get();
        let mut out = vec![Complex::zero(); d * d];
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            if amp.is_zero() {
                continue;
            }
            let col = self.column(idx / d, idx % d);
            for (o, c) in out.iter_mut().zip(col) {
                *o += *amp * c;
            }
        }
        Ok(TruncatedState::from_parts(self.dim, Modes::Two, out))
    }

    /// Dense `dim^2 x dim^2` unitary, guarded by the two-mode memory cap.
    pub fn unitary(&self) -> Result<Unitary<T>> {
        let d = self.dim.get();
        if d > tolerance::MAX_DENSE_TWO_MODE_DIM {
            return Err(Error::MemoryGuard {
                dim: d,
                cap: tolerance::MAX_DENSE_TWO_MODE_DIM,
            });
        }
        let mut matrix = CMatrix::zeros(d * d, d * d);
        for m in 0..d {
            for n in 0..d {
                let col = self.column(m, n);
                for (row, c) in col.into_iter().enumerate() {
                    if !c.is_zero() {
                        matrix[(row, m * d + n)] = c;
                    }
                }
            }
        }
        let op = TruncatedOperator::new(self.dim, Modes::Two, matrix)?;
        Ok(Unitary::measured(op))
    }
}

pub fn beam_splitter_unitary<T: Real>(power_transmission: T, dim: FockDim) -> Result<Unitary<T>> {
    BeamSplitter::new(power_transmission, dim)?.unitary()
}

/// `:exp(-kappa (a^dagger - alpha^*)(a - alpha)):` on the truncated space.
///
/// Expanding `e^{-kappa|alpha|^2} e^{kappa alpha a^dagger} (1-kappa)^n e^{kappa alpha^* a}`
/// gives a finite sum per entry,
///
/// ```text
/// <m|Q|n> = e^{-kappa|alpha|^2} sum_{j<=min(m,n)} (1-kappa)^j (kappa alpha)^{m-j} (kappa alpha^*)^{n-j}
///           sqrt(m! n!) / (j! (m-j)! (n-j)!)
/// ```
///
/// so every retained entry equals the untruncated one. All terms of an entry
/// share the phase `e^{i(m-n) arg alpha}`; magnitudes are summed in log space.
/// At `kappa = 1` the operator is the coherent projector `|alpha><alpha|`.
pub fn normally_ordered_gaussian<T: Real>(
    kappa: T,
    alpha: ComplexAmplitude<T>,
    dim: FockDim,
) -> Result<TruncatedOperator<T>> {
    if !(kappa > T::zero() && kappa <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "normal-ordering weight kappa must lie in (0, 1], got {kappa}"
        )));
    }
    Ok(gaussian_matrix(kappa, alpha.value(), T::one(), dim))
}

/// Normally ordered product `:G_1 G_2 ... :` of Gaussians
/// `G_i = exp(-kappa_i (a^dagger - alpha_i^*)(a - alpha_i))`.
///
/// Exponents add under normal ordering. Completing the square,
/// `sum_i kappa_i |z - alpha_i|^2 = K |z - c|^2 + sum_i kappa_i |alpha_i|^2 - K |c|^2`
/// with `K = sum kappa_i` and `c = sum kappa_i alpha_i / K`, so the product is
/// a single Gaussian of weight `K` centred at `c` times a real scalar.
/// Weights may be zero; the total must not exceed 1.
pub fn normally_ordered_product<T: Real>(
    factors: &[(T, ComplexAmplitude<T>)],
    dim: FockDim,
) -> Result<TruncatedOperator<T>> {
    let mut total = T::zero();
    let mut weighted = Complex::<T>::zero();
    let mut weighted_sq = T::zero();
    for &(kappa, alpha) in factors {
        if !(kappa >= T::zero() && kappa <= T::one()) {
            return Err(Error::InvalidInput(format!(
                "normal-ordering weight must lie in [0, 1], got {kappa}"
            )));
        }
        total += kappa;
        weighted += alpha.value() * kappa;
        weighted_sq += kappa * alpha.norm_sqr();
    }
    if total > T::one() + T::epsilon() {
        return Err(Error::InvalidInput(format!(
            "total normal-ordering weight {total} exceeds 1"
        )));
    }
    let total = total.min(T::one());
    if total == T::zero() {
        return Ok(TruncatedOperator::identity(dim, Modes::One));
    }
    let center = weighted / total;
    let scalar = (total * center.norm_sqr() - weighted_sq).min(T::zero()).exp();
    Ok(gaussian_matrix(total, center, scalar, dim))
}

fn gaussian_matrix<T: Real>(kappa: T, alpha: Complex<T>, scalar: T, dim: FockDim) -> TruncatedOperator<T> {
    let n = dim.get();
    let lf = LogFactorials::<T>::new(n);
    let keep = T::one() - kappa;
    let shift = kappa * alpha.norm();
    let phase = if alpha.norm() > T::zero() {
        alpha / alpha.norm()
    } else {
        Complex::one()
    };
    let prefactor = scalar * (-kappa * alpha.norm_sqr()).exp();
    let ln_shift = shift.ln();

    let mut matrix = CMatrix::zeros(n, n);
    for m in 0..n {
        for col in m..n {
            let mut sum = T::zero();
            for j in 0..=m {
                let weight = keep.powi(j as i32);
                if weight == T::zero() {
                    continue;
                }
                let power = m + col - 2 * j;
                let magnitude = if power == 0 {
                    T::one()
                } else if shift == T::zero() {
                    continue;
                } else {
                    (T::from_usize_lossy(power) * ln_shift
                        + T::lit(0.5) * (lf.get(m) + lf.get(col))
                        - lf.get(j)
                        - lf.get(m - j)
                        - lf.get(col - j))
                    .exp()
                };
                sum += weight * magnitude;
            }
            // phase e^{i(m-col) arg alpha}
            let rel = if col >= m {
                phase.conj().powu((col - m) as u32)
            } else {
                phase.powu((m - col) as u32)
            };
            let entry = rel * (prefactor * sum);
            matrix[(m, col)] = entry;
            matrix[(col, m)] = entry.conj();
        }
    }
    TruncatedOperator::from_parts(dim, Modes::One, matrix, true)
}

/// `<0| op |0>` on one slot of a two-mode operator: entries
/// `<m, 0| op |n, 0>` when `vacuum_mode == 2`, `<0, m| op |0, n>` when it is 1.
pub fn vacuum_expectation<T: Real>(
    op: &TruncatedOperator<T>,
    vacuum_mode: usize,
) -> Result<TruncatedOperator<T>> {
    if op.modes() != Modes::Two {
        return Err(Error::InvalidInput(
            "vacuum expectation needs a two-mode operator".into(),
        ));
    }
    let d = op.dim().get();
    let index: fn(usize, usize) -> usize = match vacuum_mode {
        1 => |_d, m| m,
        2 => |d, m| m * d,
        other => {
            return Err(Error::InvalidInput(format!(
                "vacuum mode index must be 1 or 2, got {other}"
            )))
        }
    };
    let matrix = CMatrix::from_fn(d, d, |m, n| op.entry(index(d, m), index(d, n)));
    Ok(TruncatedOperator::from_parts(
        op.dim(),
        Modes::One,
        matrix,
        op.is_hermitian(),
    ))
}

/// Matrix `M[m][n] = <k_m| (first ⊗ second) |k_n>` over a list of two-mode
/// kets, without forming the `dim^2 x dim^2` Kronecker product.
///
/// With kets `U|n>|0>` this is the vacuum reduction of `U^dagger (A ⊗ B) U`.
pub fn sandwich_product<T: Real>(
    first: &TruncatedOperator<T>,
    second: &TruncatedOperator<T>,
    kets: &[TruncatedState<T>],
) -> Result<CMatrix<T>> {
    first.check_compatible(second)?;
    if first.modes() != Modes::One {
        return Err(Error::InvalidInput("sandwich factors must be single-mode".into()));
    }
    let d = first.dim().get();
    if kets.iter().any(|k| k.modes() != Modes::Two || k.dim() != first.dim()) {
        return Err(Error::DimensionMismatch(
            "sandwich kets must be two-mode at the factors' dimension".into(),
        ));
    }
    let a = first.matrix();
    let bt = second.matrix().transpose();
    let images: Vec<CMatrix<T>> = kets
        .iter()
        .map(|ket| {
            let x = CMatrix::from_fn(d, d, |i, j| ket.amplitudes()[i * d + j]);
            a.matmul(&x).matmul(&bt)
        })
        .collect();
    Ok(CMatrix::from_fn(kets.len(), kets.len(), |m, n| {
        kets[m]
            .amplitudes()
            .iter()
            .zip(images[n].as_slice())
            .fold(Complex::zero(), |acc, (bra, y)| acc + bra.conj() * *y)
    }))
}
