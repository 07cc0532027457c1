//! Time-multiplexed two-state key distribution over a single fibre.
//!
//! Alice's unequal-path interferometer turns an input pulse `gamma` into a
//! weak signal (short path, early slot, shutter-controlled) followed by a
//! strong reference (long path, late slot). Every unbalanced splitter has
//! power transmission `T`. Bob's interferometer delays the signal by one slot
//! so it meets the reference at `U2`:
//!
//! ```text
//! signal   : Alice  sqrt T * sqrt T        -> T gamma          (bit 1; 0 when the shutter is closed)
//! reference: Alice  sqrt(1-T) * sqrt(1-T)  -> (1-T) gamma
//! Bob long : signal * sqrt(1-T), then BS (transmission tau): D1 gets sqrt(1-tau), U2 gets sqrt tau
//! U2       : signal reflects sqrt(1-T) into D2; reference (short arm, gain g) transmits sqrt T
//! ```
//!
//! `g` is calibrated so the D2 port is dark when the signal is present, and
//! `tau = 1/(2-T)` makes the two conclusive events equally likely. Every
//! splitter uses the real orthogonal convention with no reflection phase.

use num_complex::Complex;

use crate::discrimination::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::hilbert::ComplexAmplitude;
use crate::montecarlo::{RngStream, SamplingTable};
use crate::scalar::Real;

/// Stream ids inside one protocol run.
const ALICE_STREAM: u64 = 0;
const BOB_STREAM: u64 = 1;
const DIAGNOSTIC_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplexConfig<T> {
    gamma: ComplexAmplitude<T>,
    transmission: T,
    eta: T,
    channel_transmission: T,
    rounds: u64,
    seed: u64,
}

impl<T: Real> MultiplexConfig<T> {
    pub fn new(
        gamma: ComplexAmplitude<T>,
        transmission: T,
        eta: T,
        channel_transmission: T,
        rounds: u64,
        seed: u64,
    ) -> Result<Self> {
        if !(transmission > T::zero() && transmission < T::one()) {
            return Err(Error::InvalidInput(format!(
                "splitter transmission T must lie in (0, 1), got {transmission}"
            )));
        }
        if !(eta >= T::zero() && eta <= T::one()) {
            return Err(Error::InvalidInput(format!(
                "detector efficiency must lie in [0, 1], got {eta}"
            )));
        }
        if !(channel_transmission > T::zero() && channel_transmission <= T::one()) {
            return Err(Error::InvalidInput(format!(
                "channel transmission must lie in (0, 1], got {channel_transmission}"
            )));
        }
        if rounds == 0 {
            return Err(Error::InvalidInput("rounds must be at least 1".into()));
        }
        Ok(Self {
            gamma,
            transmission,
            eta,
            channel_transmission,
            rounds,
            seed,
        })
    }

    pub fn gamma(&self) -> ComplexAmplitude<T> {
        self.gamma
    }

    pub fn transmission(&self) -> T {
        self.transmission
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn channel_transmission(&self) -> T {
        self.channel_transmission
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Set outside the weak-splitter regime (`T > 0.2`).
    pub fn high_transmission_warning(&self) -> bool {
        self.transmission > T::lit(0.2)
    }

    /// Transmission of Bob's extraction splitter, `1/(2-T)`.
    pub fn tau(&self) -> T {
        T::one() / (T::lit(2.0) - self.transmission)
    }

    pub fn with_gamma(&self, gamma: ComplexAmplitude<T>) -> Result<Self> {
        Self::new(gamma, self.transmission, self.eta, self.channel_transmission, self.rounds, self.seed)
    }

    pub fn with_transmission(&self, t: T) -> Result<Self> {
        Self::new(self.gamma, t, self.eta, self.channel_transmission, self.rounds, self.seed)
    }

    pub fn with_eta(&self, eta: T) -> Result<Self> {
        Self::new(self.gamma, self.transmission, eta, self.channel_transmission, self.rounds, self.seed)
    }

    pub fn with_rounds(&self, rounds: u64) -> Result<Self> {
        Self::new(self.gamma, self.transmission, self.eta, self.channel_transmission, rounds, self.seed)
    }

    pub fn derived(&self) -> MultiplexDerived<T> {
        let t = self.transmission;
        let one = T::one();
        let g2 = self.gamma.norm_sqr();
        let mean = self.channel_transmission * (one - t).powi(2) * t * t * g2 / (T::lit(2.0) - t);
        MultiplexDerived {
            alice_signal_amp: self.gamma.value() * t,
            alice_aux_amp: self.gamma.value() * (one - t),
            tau: self.tau(),
            detector_mean_photons: mean,
            state_overlap: (-t * t * g2 / T::lit(2.0)).exp(),
            inconclusive_probability: (-self.eta * mean).exp(),
        }
    }
}

/// Closed-form quantities of the scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplexDerived<T> {
    /// `T gamma`.
    pub alice_signal_amp: Complex<T>,
    /// `(1-T) gamma`.
    pub alice_aux_amp: Complex<T>,
    /// `1/(2-T)`.
    pub tau: T,
    /// `c (1-T)^2 T^2 |gamma|^2 / (2-T)` with channel transmission `c`.
    pub detector_mean_photons: T,
    /// `|<0|T gamma>| = exp(-T^2 |gamma|^2 / 2)`.
    pub state_overlap: T,
    /// `exp(-eta * detector_mean_photons)`.
    pub inconclusive_probability: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Early,
    Late,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulsePair<T> {
    pub signal_amplitude: ComplexAmplitude<T>,
    pub auxiliary_amplitude: ComplexAmplitude<T>,
    pub signal_slot: Slot,
    pub auxiliary_slot: Slot,
}

/// Bit 1 opens the shutter (signal `T gamma`), bit 0 sends vacuum; the
/// reference `(1-T) gamma` follows in the late slot either way.
pub fn alice_emit<T: Real>(bit: bool, cfg: &MultiplexConfig<T>) -> PulsePair<T> {
    let d = cfg.derived();
    let signal = if bit {
        d.alice_signal_amp
    } else {
        Complex::new(T::zero(), T::zero())
    };
    PulsePair {
        signal_amplitude: ComplexAmplitude::from_complex(signal).expect("finite"),
        auxiliary_amplitude: ComplexAmplitude::from_complex(d.alice_aux_amp).expect("finite"),
        signal_slot: Slot::Early,
        auxiliary_slot: Slot::Late,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorAmplitudes<T> {
    pub d1: Complex<T>,
    pub d2: Complex<T>,
}

/// Arrival windows at Bob's detectors, in time order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    /// Signal through Bob's short arm.
    Early,
    /// Signal through the long arm overlapping the reference: the measurement.
    Measurement,
    /// Reference through the long arm.
    Late,
}

/// Gain of Bob's programmable short arm that darkens D2 for the bit-1 pulse.
fn short_arm_gain<T: Real>(cfg: &MultiplexConfig<T>, tau: T) -> Complex<T> {
    let t = cfg.transmission;
    let d = cfg.derived();
    let signal_at_d2 = d.alice_signal_amp * ((T::one() - t) * tau.sqrt());
    let reference_at_d2 = d.alice_aux_amp * t;
    signal_at_d2 / reference_at_d2
}

fn propagate<T: Real>(pulses: &PulsePair<T>, cfg: &MultiplexConfig<T>, tau: T) -> [(Window, DetectorAmplitudes<T>); 3] {
    let t = cfg.transmission;
    let one = T::one();
    let c = cfg.channel_transmission.sqrt();
    let signal = pulses.signal_amplitude.value() * c;
    let reference = pulses.auxiliary_amplitude.value() * c;
    let gain = short_arm_gain(cfg, tau);
    let zero = Complex::new(T::zero(), T::zero());

    let signal_long = signal * (one - t).sqrt();
    let measurement = DetectorAmplitudes {
        d1: signal_long * (one - tau).sqrt(),
        d2: signal_long * (tau.sqrt() * (one - t).sqrt()) - reference * gain * t,
    };
    let early = DetectorAmplitudes {
        d1: zero,
        d2: -(signal * gain * t),
    };
    let reference_long = reference * (one - t).sqrt();
    let late = DetectorAmplitudes {
        d1: reference_long * (one - tau).sqrt(),
        d2: reference_long * (tau.sqrt() * (one - t).sqrt()),
    };
    [
        (Window::Early, early),
        (Window::Measurement, measurement),
        (Window::Late, late),
    ]
}

/// Detector amplitudes inside the measurement window.
pub fn propagate_bob<T: Real>(pulses: &PulsePair<T>, cfg: &MultiplexConfig<T>) -> DetectorAmplitudes<T> {
    propagate_bob_with_tau(pulses, cfg, cfg.tau())
}

/// As [`propagate_bob`] with Bob's extraction splitter set to `tau`.
pub fn propagate_bob_with_tau<T: Real>(
    pulses: &PulsePair<T>,
    cfg: &MultiplexConfig<T>,
    tau: T,
) -> DetectorAmplitudes<T> {
    propagate(pulses, cfg, tau)[1].1
}

/// Amplitudes in all three arrival windows.
pub fn propagate_bob_all_windows<T: Real>(
    pulses: &PulsePair<T>,
    cfg: &MultiplexConfig<T>,
) -> [(Window, DetectorAmplitudes<T>); 3] {
    propagate(pulses, cfg, cfg.tau())
}

/// Click statistics of two independent on/off detectors fed coherent light:
/// `p(click_k) = 1 - exp(-eta |amp_k|^2)`.
pub fn click_probabilities<T: Real>(
    amps: &DetectorAmplitudes<T>,
    eta: T,
) -> Result<OutcomeDistribution<T>> {
    if !(eta >= T::zero() && eta <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "detector efficiency must lie in [0, 1], got {eta}"
        )));
    }
    let dark1 = (-eta * amps.d1.norm_sqr()).exp();
    let dark2 = (-eta * amps.d2.norm_sqr()).exp();
    if !(dark1.is_finite() && dark2.is_finite()) {
        return Err(Error::InvalidInput("detector amplitudes must be finite".into()));
    }
    let one = T::one();
    OutcomeDistribution::new([
        dark1 * dark2,
        dark1 * (one - dark2),
        (one - dark1) * dark2,
        (one - dark1) * (one - dark2),
    ])
}

/// One detection record with its timing flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowedClicks {
    pub d1: bool,
    pub d2: bool,
    pub in_window: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport<T> {
    pub tau: T,
    /// Mean photon number at D1 in the window when bit 1 is sent.
    pub bit1_d1_mean: T,
    /// Mean photon number at D2 in the window when bit 0 is sent.
    pub bit0_d2_mean: T,
    pub imbalance: T,
}

/// Compares the two conclusive channels; `tau = None` uses `1/(2-T)`.
pub fn balance_check<T: Real>(cfg: &MultiplexConfig<T>, tau: Option<T>) -> Result<BalanceReport<T>> {
    let tau = tau.unwrap_or_else(|| cfg.tau());
    if !(tau >= T::zero() && tau <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "extraction splitter transmission must lie in [0, 1], got {tau}"
        )));
    }
    let one = propagate_bob_with_tau(&alice_emit(true, cfg), cfg, tau);
    let zero = propagate_bob_with_tau(&alice_emit(false, cfg), cfg, tau);
    let a = one.d1.norm_sqr();
    let b = zero.d2.norm_sqr();
    Ok(BalanceReport {
        tau,
        bit1_d1_mean: a,
        bit0_d2_mean: b,
        imbalance: a - b,
    })
}

/// Outcome of a full protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyReport {
    pub rounds: u64,
    pub sent_bits: Vec<bool>,
    /// Rounds with exactly one in-window click.
    pub sifted_positions: Vec<usize>,
    /// Bob's bits at the sifted positions.
    pub sifted_key: Vec<bool>,
    /// Sifted rounds over all rounds.
    pub sifted_key_rate: f64,
    pub bit_errors: u64,
    /// `bit_errors / sifted length`, zero for an empty key.
    pub bit_error_rate: f64,
    pub inconclusive_count: u64,
    pub inconclusive_rate_empirical: f64,
    /// Both detectors clicked in the window; excluded from the key.
    pub anomalous_count: u64,
    /// Rounds with a click outside the measurement window (diagnostic only).
    pub out_of_window_rounds: u64,
    /// Closed-form per-round inconclusive probability.
    pub expected_inconclusive: f64,
}

/// Run the protocol: uniform bits from Alice, windowed clicks at Bob, sifting
/// on single in-window clicks (D1 alone reads 1, D2 alone reads 0).
pub fn run_protocol<T: Real>(cfg: &MultiplexConfig<T>) -> Result<KeyReport> {
    let mut alice = RngStream::new(cfg.seed, ALICE_STREAM);
    let mut bob = RngStream::new(cfg.seed, BOB_STREAM);
    let mut diag = RngStream::new(cfg.seed, DIAGNOSTIC_STREAM);

    let tables = |bit: bool| -> Result<[SamplingTable; 3]> {
        let windows = propagate_bob_all_windows(&alice_emit(bit, cfg), cfg);
        let mut out = Vec::with_capacity(3);
        for (_, amps) in windows {
            out.push(SamplingTable::new(&click_probabilities(&amps, cfg.eta)?)?);
        }
        Ok([out[0], out[1], out[2]])
    };
    let per_bit = [tables(false)?, tables(true)?];

    let rounds = usize::try_from(cfg.rounds)
        .map_err(|_| Error::InvalidInput("round count exceeds addressable memory".into()))?;
    let mut report = KeyReport {
        rounds: cfg.rounds,
        sent_bits: Vec::with_capacity(rounds),
        sifted_positions: Vec::new(),
        sifted_key: Vec::new(),
        sifted_key_rate: 0.0,
        bit_errors: 0,
        bit_error_rate: 0.0,
        inconclusive_count: 0,
        inconclusive_rate_empirical: 0.0,
        anomalous_count: 0,
        out_of_window_rounds: 0,
        expected_inconclusive: cfg.derived().inconclusive_probability.as_f64(),
    };

    for round in 0..rounds {
        let bit = alice.bit();
        report.sent_bits.push(bit);
        let [early, measurement, late] = &per_bit[bit as usize];

        let clicks = measurement.sample(&mut bob);
        let record = WindowedClicks {
            d1: clicks.d1,
            d2: clicks.d2,
            in_window: true,
        };
        match (record.d1, record.d2) {
            (true, false) | (false, true) => {
                let bob_bit = record.d1;
                report.sifted_positions.push(round);
                report.sifted_key.push(bob_bit);
                if bob_bit != bit {
                    report.bit_errors += 1;
                }
            }
            (false, false) => report.inconclusive_count += 1,
            (true, true) => report.anomalous_count += 1,
        }

        let stray = [early.sample(&mut diag), late.sample(&mut diag)];
        if stray.iter().any(|o| o.d1 || o.d2) {
            report.out_of_window_rounds += 1;
        }
    }

    let n = cfg.rounds as f64;
    report.sifted_key_rate = report.sifted_key.len() as f64 / n;
    report.inconclusive_rate_empirical = report.inconclusive_count as f64 / n;
    report.bit_error_rate = if report.sifted_key.is_empty() {
        0.0
    } else {
        report.bit_errors as f64 / report.sifted_key.len() as f64
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::{inconclusive_rate, Outcome};

    fn cfg(gamma: f64, t: f64, eta: f64) -> MultiplexConfig<f64> {
        MultiplexConfig::new(ComplexAmplitude::real(gamma).unwrap(), t, eta, 1.0, 1000, 1).unwrap()
    }

    #[test]
    fn config_validation() {
        let g = ComplexAmplitude::real(1.0).unwrap();
        assert!(MultiplexConfig::new(g, 0.0, 1.0, 1.0, 1, 0).is_err());
        assert!(MultiplexConfig::new(g, 1.0, 1.0, 1.0, 1, 0).is_err());
        assert!(MultiplexConfig::new(g, 0.1, 1.1, 1.0, 1, 0).is_err());
        assert!(MultiplexConfig::new(g, 0.1, 1.0, 0.0, 1, 0).is_err());
        assert!(MultiplexConfig::new(g, 0.1, 1.0, 1.0, 0, 0).is_err());
        assert!(!cfg(1.0, 0.2, 1.0).high_transmission_warning());
        assert!(cfg(1.0, 0.25, 1.0).high_transmission_warning());
    }

    #[test]
    fn shutter_closed_sends_vacuum() {
        let p = alice_emit(false, &cfg(10.0, 0.05, 1.0));
        assert_eq!(p.signal_amplitude.norm(), 0.0);
        assert_eq!(p.signal_slot, Slot::Early);
        assert_eq!(p.auxiliary_slot, Slot::Late);
    }

    #[test]
    fn open_shutter_amplitudes() {
        let c = cfg(10.0, 0.05, 1.0);
        let p = alice_emit(true, &c);
        assert!((p.signal_amplitude.re() - 0.5).abs() < 1e-15);
        assert!((p.auxiliary_amplitude.re() - 9.5).abs() < 1e-14);
        let overlap = (-p.signal_amplitude.norm_sqr() / 2.0).exp();
        assert!((overlap - (-0.125f64).exp()).abs() < 1e-15);
        assert!((c.derived().state_overlap - (-0.125f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn window_amplitudes_for_each_bit() {
        let c = cfg(10.0, 0.05, 1.0);
        let mean = 0.95f64.powi(2) * 0.25 / 1.95;
        let one = propagate_bob(&alice_emit(true, &c), &c);
        assert_eq!(one.d2.norm(), 0.0);
        assert!((one.d1.norm_sqr() - mean).abs() < 1e-14);
        let zero = propagate_bob(&alice_emit(false, &c), &c);
        assert_eq!(zero.d1.norm(), 0.0);
        assert!((zero.d2.norm_sqr() - mean).abs() < 1e-14);
        // (1-T)(1-tau) = (1-T)^2/(2-T)
        let (t, tau) = (0.05f64, c.tau());
        assert!(((1.0 - t) * (1.0 - tau) - (1.0 - t).powi(2) / (2.0 - t)).abs() < 1e-15);
    }

    #[test]
    fn vanishing_transmission_extracts_nothing() {
        let c = cfg(10.0, 1e-9, 1.0);
        for bit in [false, true] {
            let a = propagate_bob(&alice_emit(bit, &c), &c);
            assert!(a.d1.norm() < 1e-7 && a.d2.norm() < 1e-7);
        }
    }

    #[test]
    fn click_probability_values() {
        let dark = DetectorAmplitudes {
            d1: Complex::new(0.0, 0.0),
            d2: Complex::new(0.0, 0.0),
        };
        let d = click_probabilities(&dark, 1.0).unwrap();
        assert_eq!(d.inconclusive(), 1.0);
        assert!(click_probabilities(&dark, 1.5).is_err());

        let c = cfg(10.0, 0.05, 1.0);
        let one = propagate_bob(&alice_emit(true, &c), &c);
        let d = click_probabilities(&one, 1.0).unwrap();
        let expected = (-(0.95f64.powi(2)) * 0.25 / 1.95).exp();
        assert!((d.inconclusive() - expected).abs() < 1e-14);
    }

    #[test]
    fn weak_splitters_approach_the_overlap_bound() {
        let signal = 0.5; // |gamma| T held fixed
        let mut previous = f64::INFINITY;
        for t in [0.1, 0.05, 0.01, 0.001, 1e-5] {
            let c = cfg(signal / t, t, 1.0);
            let d = c.derived();
            let ratio = d.inconclusive_probability / d.state_overlap;
            assert!(ratio >= 1.0 && ratio <= previous);
            previous = ratio;
        }
        assert!((previous - 1.0).abs() < 1e-4);
    }

    #[test]
    fn balance_at_design_tau() {
        for (g, t) in [(5.0, 0.01), (10.0, 0.1), (20.0, 0.2), (3.0, 0.6)] {
            let r = balance_check(&cfg(g, t, 1.0), None).unwrap();
            assert!(r.imbalance.abs() <= 1e-12);
        }
    }

    #[test]
    fn balance_off_design_tau() {
        let r = balance_check(&cfg(10.0, 0.1, 1.0), Some(0.5)).unwrap();
        // T^2|g|^2 (1-T) (1 - tau (2-T)) = 1 * 0.9 * 0.05
        assert!((r.imbalance - 0.045).abs() < 1e-12);
    }

    #[test]
    fn zero_transmission_limit_is_fifty_fifty() {
        assert!((cfg(10.0, 1e-12, 1.0).tau() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn blind_detectors_give_an_empty_key() {
        let r = run_protocol(&cfg(10.0, 0.05, 0.0)).unwrap();
        assert_eq!(r.inconclusive_count, r.rounds);
        assert!(r.sifted_key.is_empty());
        assert_eq!(r.bit_error_rate, 0.0);
    }

    #[test]
    fn ideal_protocol_has_no_errors() {
        let c = MultiplexConfig::new(ComplexAmplitude::new(3.0, 4.0).unwrap(), 0.1, 0.8, 1.0, 20_000, 9).unwrap();
        let r = run_protocol(&c).unwrap();
        assert_eq!(r.bit_errors, 0);
        assert_eq!(r.anomalous_count, 0);
        assert_eq!(r.sifted_positions.len(), r.sifted_key.len());
        for (pos, bit) in r.sifted_positions.iter().zip(&r.sifted_key) {
            assert_eq!(r.sent_bits[*pos], *bit);
        }
        // the strong reference through the long arm almost always fires
        assert!(r.out_of_window_rounds as f64 > 0.99 * r.rounds as f64);
    }

    #[test]
    fn channel_loss_keeps_the_receiver_matched() {
        let c = MultiplexConfig::new(ComplexAmplitude::real(10.0).unwrap(), 0.05, 1.0, 0.3, 10_000, 4).unwrap();
        let one = propagate_bob(&alice_emit(true, &c), &c);
        assert!(one.d2.norm() < 1e-15);
        let r = run_protocol(&c).unwrap();
        assert_eq!(r.bit_errors, 0);
        assert!(c.derived().inconclusive_probability > cfg(10.0, 0.05, 1.0).derived().inconclusive_probability);
    }

    #[test]
    fn protocol_is_reproducible() {
        let c = cfg(10.0, 0.05, 1.0);
        assert_eq!(run_protocol(&c).unwrap(), run_protocol(&c).unwrap());
    }

    #[test]
    fn inconclusive_rate_is_monotone() {
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let p = cfg(10.0, 0.05, i as f64 / 20.0).derived().inconclusive_probability;
            assert!(p < prev || i == 0);
            prev = p;
        }
        let mut prev = f64::INFINITY;
        for g in 1..=30 {
            let p = cfg(g as f64, 0.05, 1.0).derived().inconclusive_probability;
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn never_both_click_in_window() {
        for bit in [false, true] {
            let c = cfg(7.0, 0.15, 0.9);
            let d = click_probabilities(&propagate_bob(&alice_emit(bit, &c), &c), c.eta()).unwrap();
            assert_eq!(d.probability(Outcome::BOTH), 0.0);
        }
    }

    #[test]
    fn window_pair_matches_single_mode_receiver() {
        // the window realises the two-state receiver for the pair (0, A)
        // with |A|^2 / 2 equal to the detector mean photon number
        let c = cfg(12.0, 0.07, 0.85);
        let d = c.derived();
        let a = (2.0 * c.eta() * d.detector_mean_photons).sqrt();
        let zero = ComplexAmplitude::zero();
        let pair = inconclusive_rate(zero, ComplexAmplitude::real(a).unwrap());
        assert!((pair - d.inconclusive_probability).abs() <= 1e-10);
    }
}
