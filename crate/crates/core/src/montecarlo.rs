//! Sampling detector outcomes and checking tallies against closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::discrimination::{
    outcome_probabilities, povm_analytic, Outcome, OutcomeDistribution, ReceiverConfig, SentState,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance;

/// Generator behind [`RngStream`], recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha), 64-bit seed, stream = stream_id";

/// Seeded, splittable random stream.
///
/// `(seed, stream_id)` fully determines the sequence; different stream ids on
/// the same seed select disjoint ChaCha20 streams.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Fresh stream on the same seed.
    pub fn substream(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        // p == 0 never fires, p == 1 always does
        self.uniform() < p
    }

    pub fn bit(&mut self) -> bool {
        self.rng.random::<bool>()
    }
}

/// Inverse-CDF table over the fixed outcome order 00, 01, 10, 11.
///
/// Mass below the sampling floor is zeroed and the rest renormalised, so
/// outcomes with probability that is roundoff dust are never drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingTable {
    probs: [f64; 4],
    cumulative: [f64; 4],
}

impl SamplingTable {
    pub fn new<T: Real>(dist: &OutcomeDistribution<T>) -> Result<Self> {
        let mut probs = dist.as_array().map(Real::as_f64);
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tolerance::STRUCTURAL {
            return Err(Error::InvalidInput(format!(
                "distribution sums to {total}, not 1"
            )));
        }
        for p in probs.iter_mut() {
            if *p < tolerance::SAMPLING_FLOOR {
                *p = 0.0;
            }
        }
        let kept: f64 = probs.iter().sum();
        if kept <= 0.0 {
            return Err(Error::InvalidInput("distribution has no mass".into()));
        }
        let mut cumulative = [0.0; 4];
        let mut acc = 0.0;
        for (i, p) in probs.iter_mut().enumerate() {
            *p /= kept;
            acc += *p;
            cumulative[i] = acc;
        }
        // pin the top of the table so every u < 1 lands somewhere
        let last = probs.iter().rposition(|p| *p > 0.0).unwrap_or(3);
        for c in cumulative.iter_mut().skip(last) {
            *c = 1.0;
        }
        Ok(Self { probs, cumulative })
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.probs[outcome.index()]
    }

    pub fn sample(&self, rng: &mut RngStream) -> Outcome {
        let u = rng.uniform();
        let idx = self.cumulative.iter().position(|c| u < *c).unwrap_or(3);
        Outcome::ALL[idx]
    }
}

pub fn sample_outcome<T: Real>(dist: &OutcomeDistribution<T>, rng: &mut RngStream) -> Result<Outcome> {
    Ok(SamplingTable::new(dist)?.sample(rng))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialTally {
    counts: [u64; 4],
    n_trials: u64,
}

impl TrialTally {
    pub fn record(&mut self, outcome: Outcome) {
        self.counts[outcome.index()] += 1;
        self.n_trials += 1;
    }

    pub fn count(&self, outcome: Outcome) -> u64 {
        self.counts[outcome.index()]
    }

    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn frequency(&self, outcome: Outcome) -> f64 {
        if self.n_trials == 0 {
            0.0
        } else {
            self.count(outcome) as f64 / self.n_trials as f64
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        Self {
            counts,
            n_trials: self.n_trials + other.n_trials,
        }
    }
}

/// Tallies split by which state was sent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialTallies {
    pub first: TrialTally,
    pub second: TrialTally,
}

impl TrialTallies {
    pub fn get(&self, sent: SentState) -> &TrialTally {
        match sent {
            SentState::First => &self.first,
            SentState::Second => &self.second,
        }
    }

    /// Conclusive outcomes naming the wrong state.
    pub fn wrong_conclusive(&self) -> u64 {
        self.first.count(Outcome::D1_ONLY) + self.second.count(Outcome::D2_ONLY)
    }

    pub fn both_clicks(&self) -> u64 {
        self.first.count(Outcome::BOTH) + self.second.count(Outcome::BOTH)
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self {
            first: self.first.merge(&other.first),
            second: self.second.merge(&other.second),
        }
    }
}

/// Sample one outcome per entry of `sent_sequence` from the analytic POVM.
pub fn run_trials<T: Real>(
    cfg: &ReceiverConfig<T>,
    sent_sequence: &[SentState],
    rng: &mut RngStream,
) -> Result<TrialTallies> {
    if sent_sequence.is_empty() {
        return Err(Error::InvalidInput("trial sequence is empty".into()));
    }
    let povm = povm_analytic(cfg)?;
    let first = SamplingTable::new(&outcome_probabilities(cfg, cfg.alpha1(), &povm)?)?;
    let second = SamplingTable::new(&outcome_probabilities(cfg, cfg.alpha2(), &povm)?)?;
    let mut tallies = TrialTallies::default();
    for sent in sent_sequence {
        match sent {
            SentState::First => tallies.first.record(first.sample(rng)),
            SentState::Second => tallies.second.record(second.sample(rng)),
        }
    }
    Ok(tallies)
}

/// Sequence of `n` sends drawn uniformly from the two states.
pub fn random_sequence(n: usize, rng: &mut RngStream) -> Vec<SentState> {
    (0..n)
        .map(|_| if rng.bit() { SentState::Second } else { SentState::First })
        .collect()
}

/// `expected ± k sigma` band on a binomial count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialBand {
    pub expected: f64,
    pub sigma: f64,
    pub lo: f64,
    pub hi: f64,
}

impl BinomialBand {
    pub fn new(p: f64, n: u64, sigmas: f64) -> Self {
        let n = n as f64;
        let expected = n * p;
        let sigma = (n * p * (1.0 - p)).max(0.0).sqrt();
        Self {
            expected,
            sigma,
            lo: expected - sigmas * sigma,
            hi: expected + sigmas * sigma,
        }
    }

    pub fn contains(&self, count: u64) -> bool {
        let c = count as f64;
        c >= self.lo && c <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
}

impl ChiSquareResult {
    /// Passes when the statistic is at most the upper `significance` quantile.
    /// A single category leaves nothing to test and always passes unless a
    /// zero-probability outcome was observed.
    pub fn passes(&self, significance: f64) -> bool {
        if !self.statistic.is_finite() {
            return false;
        }
        if self.dof == 0 {
            return true;
        }
        self.statistic <= chi_square_critical(self.dof, significance)
    }
}

/// Pearson statistic of a tally against a sampling table. Observing an
/// outcome the table forbids gives an infinite statistic.
pub fn chi_square(tally: &TrialTally, table: &SamplingTable) -> ChiSquareResult {
    let n = tally.n_trials() as f64;
    let mut statistic = 0.0;
    let mut categories = 0usize;
    for outcome in Outcome::ALL {
        let expected = n * table.probability(outcome);
        let observed = tally.count(outcome) as f64;
        if expected > 0.0 {
            categories += 1;
            statistic += (observed - expected).powi(2) / expected;
        } else if observed > 0.0 {
            statistic = f64::INFINITY;
        }
    }
    ChiSquareResult {
        statistic,
        dof: categories.saturating_sub(1),
    }
}

pub fn chi_square_critical(dof: usize, significance: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .map(|d| d.inverse_cdf(1.0 - significance))
        .unwrap_or(f64::INFINITY)
}
