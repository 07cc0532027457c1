//! The two-coherent-state receiver: POVM construction, outcome probabilities
//! and the comparison with the overlap bound.
//!
//! The receiver splits the incoming mode `a` on a 50:50 beam splitter with a
//! vacuum `v` in the other port, displaces each output `b_i` by `-beta_i` with
//! `beta_i = alpha_i / sqrt 2`, and counts clicks on two on/off detectors.
//! Outcome `kl` means detector 1 reported `k` and detector 2 reported `l`
//! (1 = click).

use std::fmt;

use crate::error::{Error, Result};
use crate::hilbert::{
    coherent_state, normally_ordered_product, sandwich_product, BeamSplitter, ComplexAmplitude,
    FockDim, Modes, TruncatedOperator, TruncatedState,
};
use crate::scalar::Real;
use crate::tolerance;

/// Which of the two signal states was sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SentState {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverConfig<T> {
    alpha1: ComplexAmplitude<T>,
    alpha2: ComplexAmplitude<T>,
    dim: FockDim,
    eta: T,
}

impl<T: Real> ReceiverConfig<T> {
    /// `dim = None` picks the default truncation for the larger amplitude.
    pub fn new(
        alpha1: ComplexAmplitude<T>,
        alpha2: ComplexAmplitude<T>,
        dim: Option<FockDim>,
        eta: T,
    ) -> Result<Self> {
        if alpha1 == alpha2 {
            return Err(Error::InvalidInput(
                "alpha1 and alpha2 coincide; identical states cannot be discriminated".into(),
            ));
        }
        if !(eta >= T::zero() && eta <= T::one()) {
            return Err(Error::InvalidInput(format!(
                "detector efficiency must lie in [0, 1], got {eta}"
            )));
        }
        let dim = dim.unwrap_or_else(|| FockDim::for_amplitude(alpha1.norm().max(alpha2.norm())));
        Ok(Self {
            alpha1,
            alpha2,
            dim,
            eta,
        })
    }

    pub fn alpha1(&self) -> ComplexAmplitude<T> {
        self.alpha1
    }

    pub fn alpha2(&self) -> ComplexAmplitude<T> {
        self.alpha2
    }

    pub fn alpha(&self, sent: SentState) -> ComplexAmplitude<T> {
        match sent {
            SentState::First => self.alpha1,
            SentState::Second => self.alpha2,
        }
    }

    /// Displacement amplitude on output arm 1, always `alpha1 / sqrt 2`.
    pub fn beta1(&self) -> ComplexAmplitude<T> {
        halve_power(self.alpha1)
    }

    pub fn beta2(&self) -> ComplexAmplitude<T> {
        halve_power(self.alpha2)
    }

    pub fn dim(&self) -> FockDim {
        self.dim
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    /// Same configuration with the amplitudes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            ..*self
        }
    }
}

fn halve_power<T: Real>(a: ComplexAmplitude<T>) -> ComplexAmplitude<T> {
    ComplexAmplitude::from_complex(a.value() / T::lit(2.0).sqrt())
        .expect("scaling a finite amplitude down stays finite")
}

/// Detector record: `d1`, `d2` are true when that detector clicked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    pub d1: bool,
    pub d2: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    ConclusiveState1,
    ConclusiveState2,
    Inconclusive,
    Anomalous,
}

impl Outcome {
    pub const NONE: Outcome = Outcome { d1: false, d2: false };
    pub const D2_ONLY: Outcome = Outcome { d1: false, d2: true };
    pub const D1_ONLY: Outcome = Outcome { d1: true, d2: false };
    pub const BOTH: Outcome = Outcome { d1: true, d2: true };

    /// Fixed ordering 00, 01, 10, 11 used by distributions and samplers.
    pub const ALL: [Outcome; 4] = [Self::NONE, Self::D2_ONLY, Self::D1_ONLY, Self::BOTH];

    pub fn index(self) -> usize {
        (self.d1 as usize) * 2 + self.d2 as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        ["00", "01", "10", "11"][self.index()]
    }

    /// A click on D2 alone can only come from the first state, on D1 alone only
    /// from the second.
    pub fn classify(self) -> Classification {
        match (self.d1, self.d2) {
            (false, true) => Classification::ConclusiveState1,
            (true, false) => Classification::ConclusiveState2,
            (false, false) => Classification::Inconclusive,
            (true, true) => Classification::Anomalous,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    Analytic,
    Ancilla,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Analytic => "analytic",
            Construction::Ancilla => "ancilla",
        }
    }
}

/// Four-outcome POVM on the signal mode, indexed by [`Outcome`].
#[derive(Debug, Clone)]
pub struct PovmSet<T> {
    elements: [TruncatedOperator<T>; 4],
    construction: Construction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmDiagnostics<T> {
    /// `max|sum_kl A_kl - I|`.
    pub completeness_residual: T,
    /// Smallest eigenvalue across all four elements.
    pub min_eigenvalue: T,
    /// Largest `max|A - A^dagger|` across elements.
    pub hermitian_defect: T,
}

impl<T: Real> PovmDiagnostics<T> {
    pub fn passes(&self) -> bool {
        self.completeness_residual <= T::lit(tolerance::STRUCTURAL)
            && self.min_eigenvalue >= -T::lit(tolerance::EIGEN_FLOOR)
            && self.hermitian_defect <= T::lit(tolerance::STRUCTURAL)
    }
}

impl<T: Real> PovmSet<T> {
    pub fn element(&self, outcome: Outcome) -> &TruncatedOperator<T> {
        &self.elements[outcome.index()]
    }

    pub fn elements(&self) -> &[TruncatedOperator<T>; 4] {
        &self.elements
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn dim(&self) -> FockDim {
        self.elements[0].dim()
    }

    pub fn diagnostics(&self) -> PovmDiagnostics<T> {
        let mut sum = TruncatedOperator::zero(self.dim(), Modes::One);
        let mut min_eig = T::infinity();
        let mut herm = T::zero();
        for e in &self.elements {
            sum = sum.checked_add(e).expect("elements share one dimension");
            min_eig = min_eig.min(e.min_eigenvalue());
            herm = herm.max(e.matrix().hermitian_defect());
        }
        PovmDiagnostics {
            completeness_residual: sum.identity_defect(),
            min_eigenvalue: min_eig,
            hermitian_defect: herm,
        }
    }

    /// Diagnostics, or a numerical-guard error naming the failed check.
    pub fn validate(&self) -> Result<PovmDiagnostics<T>> {
        let d = self.diagnostics();
        if d.completeness_residual > T::lit(tolerance::STRUCTURAL) {
            return Err(Error::NumericalGuard(format!(
                "POVM completeness residual {:e} exceeds {:e}",
                d.completeness_residual,
                tolerance::STRUCTURAL
            )));
        }
        if d.min_eigenvalue < -T::lit(tolerance::EIGEN_FLOOR) {
            return Err(Error::NumericalGuard(format!(
                "POVM positivity: eigenvalue {:e} below -{:e}",
                d.min_eigenvalue,
                tolerance::EIGEN_FLOOR
            )));
        }
        if d.hermitian_defect > T::lit(tolerance::STRUCTURAL) {
            return Err(Error::NumericalGuard(format!(
                "POVM Hermiticity defect {:e}",
                d.hermitian_defect
            )));
        }
        Ok(d)
    }

    /// Largest element-wise difference over all four outcomes.
    pub fn max_discrepancy(&self, other: &Self) -> Result<T> {
        let mut worst = T::zero();
        for (a, b) in self.elements.iter().zip(&other.elements) {
            worst = worst.max(a.max_abs_diff(b)?);
        }
        Ok(worst)
    }
}

fn check_inputs<T: Real>(cfg: &ReceiverConfig<T>) -> Result<()> {
    crate::hilbert::check_adequacy(cfg.alpha1, cfg.dim)?;
    crate::hilbert::check_adequacy(cfg.alpha2, cfg.dim)
}

/// POVM from the closed normally ordered form.
///
/// With `Q_i = exp(-(eta/2)(a^dagger - alpha_i^*)(a - alpha_i))`:
/// `A00 = :Q1 Q2:`, `A01 = :Q1: - :Q1 Q2:`, `A10 = :Q2: - :Q1 Q2:`,
/// `A11 = I - :Q1: - :Q2: + :Q1 Q2:`. The weight `eta/2` folds in detector
/// efficiency by scaling every field reaching a detector by `sqrt(eta)`.
pub fn povm_analytic<T: Real>(cfg: &ReceiverConfig<T>) -> Result<PovmSet<T>> {
    check_inputs(cfg)?;
    let dim = cfg.dim;
    let kappa = cfg.eta / T::lit(2.0);
    let q1 = normally_ordered_product(&[(kappa, cfg.alpha1)], dim)?;
    let q2 = normally_ordered_product(&[(kappa, cfg.alpha2)], dim)?;
    let q12 = normally_ordered_product(&[(kappa, cfg.alpha1), (kappa, cfg.alpha2)], dim)?;
    let id = TruncatedOperator::identity(dim, Modes::One);

    let a01 = q1.checked_sub(&q12)?;
    let a10 = q2.checked_sub(&q12)?;
    let a11 = id.checked_sub(&q1)?.checked_sub(&q2)?.checked_add(&q12)?;
    Ok(PovmSet {
        elements: [q12, a01, a10, a11],
        construction: Construction::Analytic,
    })
}

/// POVM from the two-mode projective measurement reduced over the vacuum port.
///
/// Each detector's no-click element is the normally ordered Gaussian of weight
/// `eta` centred on `beta_i` (the coherent projector at `eta = 1`). The four
/// two-mode products are conjugated by the 50:50 beam splitter and the vacuum
/// slot is traced out: `A_kl[m][n] = <m,0| U^dagger B_kl U |n,0>`.
pub fn povm_ancilla<T: Real>(cfg: &ReceiverConfig<T>) -> Result<PovmSet<T>> {
    check_inputs(cfg)?;
    let dim = cfg.dim;
    if dim.get() > tolerance::MAX_ANCILLA_DIM {
        return Err(Error::MemoryGuard {
            dim: dim.get(),
            cap: tolerance::MAX_ANCILLA_DIM,
        });
    }
    let id = TruncatedOperator::identity(dim, Modes::One);
    let no_click1 = normally_ordered_product(&[(cfg.eta, cfg.beta1())], dim)?;
    let no_click2 = normally_ordered_product(&[(cfg.eta, cfg.beta2())], dim)?;
    let click1 = id.checked_sub(&no_click1)?;
    let click2 = id.checked_sub(&no_click2)?;

    let splitter = BeamSplitter::new(T::lit(0.5), dim)?;
    let kets: Vec<TruncatedState<T>> = (0..dim.get())
        .map(|n| TruncatedState::new(dim, Modes::Two, splitter.column(n, 0)))
        .collect::<Result<_>>()?;

    let mut elements = Vec::with_capacity(4);
    for outcome in Outcome::ALL {
        let f1 = if outcome.d1 { &click1 } else { &no_click1 };
        let f2 = if outcome.d2 { &click2 } else { &no_click2 };
        let m = sandwich_product(f1, f2, &kets)?;
        elements.push(TruncatedOperator::new(dim, Modes::One, m)?.into_hermitian(T::lit(tolerance::STRUCTURAL))?);
    }
    let elements: [TruncatedOperator<T>; 4] = elements
        .try_into()
        .map_err(|_| Error::NumericalGuard("expected four POVM elements".into()))?;
    Ok(PovmSet {
        elements,
        construction: Construction::Ancilla,
    })
}

/// Probabilities of the four outcomes, ordered 00, 01, 10, 11.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution<T> {
    probs: [T; 4],
}

impl<T: Real> OutcomeDistribution<T> {
    /// Requires every entry in `[0, 1]` and a total within the structural tolerance of 1.
    pub fn new(probs: [T; 4]) -> Result<Self> {
        if probs.iter().any(|p| !(*p >= T::zero() && *p <= T::one())) {
            return Err(Error::InvalidInput(format!(
                "outcome probabilities must lie in [0, 1]: {probs:?}"
            )));
        }
        let total = probs.iter().fold(T::zero(), |a, p| a + *p);
        if (total - T::one()).abs() > T::lit(tolerance::STRUCTURAL) {
            return Err(Error::InvalidInput(format!(
                "outcome probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probability(&self, outcome: Outcome) -> T {
        self.probs[outcome.index()]
    }

    pub fn as_array(&self) -> [T; 4] {
        self.probs
    }

    pub fn inconclusive(&self) -> T {
        self.probability(Outcome::NONE)
    }

    pub fn conclusive(&self) -> T {
        self.probability(Outcome::D2_ONLY) + self.probability(Outcome::D1_ONLY)
    }
}

/// `p_kl = <sent| A_kl |sent>`.
///
/// Values are checked for a negligible imaginary part, clamped into `[0, 1]`
/// (clamps larger than the residue tolerance are logged), and must sum to one.
pub fn outcome_probabilities<T: Real>(
    cfg: &ReceiverConfig<T>,
    sent: ComplexAmplitude<T>,
    povm: &PovmSet<T>,
) -> Result<OutcomeDistribution<T>> {
    if povm.dim() != cfg.dim {
        return Err(Error::DimensionMismatch(format!(
            "POVM built at dim {} but configuration uses dim {}",
            povm.dim(),
            cfg.dim
        )));
    }
    let (state, _) = coherent_state(sent, cfg.dim)?;
    let residue = T::lit(tolerance::PROBABILITY_RESIDUE);
    let mut probs = [T::zero(); 4];
    for outcome in Outcome::ALL {
        let value = povm.element(outcome).expectation(&state)?;
        if value.im.abs() > residue {
            return Err(Error::NumericalGuard(format!(
                "probability of outcome {outcome} has imaginary part {:e}",
                value.im
            )));
        }
        let clamped = value.re.max(T::zero()).min(T::one());
        if (clamped - value.re).abs() > residue {
            log::warn!(
                "outcome {outcome}: clamped probability {} to {}",
                value.re,
                clamped
            );
        }
        probs[outcome.index()] = clamped;
    }
    let total = probs.iter().fold(T::zero(), |a, p| a + *p);
    if (total - T::one()).abs() > T::lit(tolerance::STRUCTURAL) {
        return Err(Error::NumericalGuard(format!(
            "outcome probabilities sum to {total}; the sent state is not resolved at dim {}",
            cfg.dim
        )));
    }
    OutcomeDistribution::new(probs)
}

/// Closed-form inconclusive probability `exp(-|alpha1 - alpha2|^2 / 2)`.
pub fn inconclusive_rate<T: Real>(alpha1: ComplexAmplitude<T>, alpha2: ComplexAmplitude<T>) -> T {
    (-(alpha1.value() - alpha2.value()).norm_sqr() / T::lit(2.0)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityReport<T> {
    /// Inconclusive probability from the POVM, averaged over equal priors.
    pub numeric_inconclusive: T,
    /// `|<alpha1|alpha2>|` from truncated coherent states.
    pub quantum_bound: T,
    pub gap: T,
    /// `|gap|` within the cross-oracle tolerance.
    pub optimal: bool,
}

pub fn optimality_check<T: Real>(
    cfg: &ReceiverConfig<T>,
    povm: &PovmSet<T>,
) -> Result<OptimalityReport<T>> {
    let p1 = outcome_probabilities(cfg, cfg.alpha1, povm)?.inconclusive();
    let p2 = outcome_probabilities(cfg, cfg.alpha2, povm)?.inconclusive();
    let numeric = (p1 + p2) / T::lit(2.0);
    let (s1, _) = coherent_state(cfg.alpha1, cfg.dim)?;
    let (s2, _) = coherent_state(cfg.alpha2, cfg.dim)?;
    let bound = s1.inner(&s2)?.norm();
    let gap = numeric - bound;
    Ok(OptimalityReport {
        numeric_inconclusive: numeric,
        quantum_bound: bound,
        gap,
        optimal: gap.abs() <= T::lit(tolerance::CROSS_ORACLE),
    })
}

/// Sum of the four elements, for completeness checks by callers.
pub fn element_sum<T: Real>(povm: &PovmSet<T>) -> TruncatedOperator<T> {
    povm.elements()
        .iter()
        .fold(TruncatedOperator::zero(povm.dim(), Modes::One), |acc, e| {
            acc.checked_add(e).expect("elements share one dimension")
        })
}

impl<T: Real> Default for OutcomeDistribution<T> {
    /// Everything on the inconclusive outcome.
    fn default() -> Self {
        let mut probs = [T::zero(); 4];
        probs[0] = T::one();
        Self { probs }
    }
}
