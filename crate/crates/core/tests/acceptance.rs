//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use usd_core::discrimination::{
    optimality_check, outcome_probabilities, povm_analytic, povm_ancilla, Outcome, SentState,
};
use usd_core::hilbert::FockDim;
use usd_core::montecarlo::{run_trials, BinomialBand, RngStream};
use usd_core::multiplex::{alice_emit, balance_check, propagate_bob, run_protocol};
use usd_core::{ComplexAmplitude, MultiplexConfig, ReceiverConfig};

const SEED: u64 = 20_240_117;
const PAIRS: usize = 20;
const MAX_AMPLITUDE: f64 = 1.5;
const DIM: usize = 32;

const POVM_AGREEMENT: f64 = 1e-8;
const COMPLETENESS: f64 = 1e-9;
const EIGEN_FLOOR: f64 = -1e-10;
const PROBABILITY: f64 = 1e-8;
const FORBIDDEN: f64 = 1e-9;
const CLOSED_FORM: f64 = 1e-12;
const SIGMAS: f64 = 3.0;
const TRIALS: usize = 100_000;
const ROUNDS: u64 = 100_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn amp(re: f64, im: f64) -> ComplexAmplitude {
    ComplexAmplitude::new(re, im).expect("finite amplitude")
}

/// Uniform points in the disc of radius `MAX_AMPLITUDE`.
fn random_pairs() -> Vec<(ComplexAmplitude, ComplexAmplitude)> {
    let mut rng = RngStream::new(SEED, 0);
    let mut draw = || {
        let r = MAX_AMPLITUDE * rng.uniform().sqrt();
        let phi = std::f64::consts::TAU * rng.uniform();
        amp(r * phi.cos(), r * phi.sin())
    };
    let mut pairs = Vec::with_capacity(PAIRS);
    while pairs.len() < PAIRS {
        let (a, b) = (draw(), draw());
        if (a.value() - b.value()).norm() > 1e-3 {
            pairs.push((a, b));
        }
    }
    pairs
}

fn receiver(a1: ComplexAmplitude, a2: ComplexAmplitude, eta: f64) -> ReceiverConfig {
    ReceiverConfig::new(a1, a2, Some(FockDim::new(DIM).unwrap()), eta).expect("distinct amplitudes")
}

fn criterion_1() -> Check {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (a1, a2) in random_pairs() {
        let cfg = receiver(a1, a2, 1.0);
        let analytic = povm_analytic(&cfg).map_err(|e| e.to_string())?;
        let ancilla = povm_ancilla(&cfg).map_err(|e| e.to_string())?;
        let gap = analytic.max_discrepancy(&ancilla).map_err(|e| e.to_string())?;
        let da = analytic.diagnostics();
        let db = ancilla.diagnostics();
        worst.0 = worst.0.max(gap);
        worst.1 = worst.1.max(da.completeness_residual).max(db.completeness_residual);
        worst.2 = worst.2.min(da.min_eigenvalue).min(db.min_eigenvalue);
    }
    let msg = format!(
        "max element gap {:.3e}, completeness residual {:.3e}, min eigenvalue {:.3e}",
        worst.0, worst.1, worst.2
    );
    if worst.0 <= POVM_AGREEMENT && worst.1 <= COMPLETENESS && worst.2 >= EIGEN_FLOOR {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Check {
    let cfg = receiver(amp(1.0, 0.0), amp(-1.0, 0.0), 1.0);
    let povm = povm_analytic(&cfg).map_err(|e| e.to_string())?;
    let first = outcome_probabilities(&cfg, cfg.alpha1(), &povm).map_err(|e| e.to_string())?;
    let second = outcome_probabilities(&cfg, cfg.alpha2(), &povm).map_err(|e| e.to_string())?;
    // exp(-|alpha1 - alpha2|^2 / 2) with |alpha1 - alpha2| = 2
    let expected = (-(2.0f64 * 2.0) / 2.0).exp();
    let gap = (first.inconclusive() - expected)
        .abs()
        .max((second.inconclusive() - expected).abs());
    let both = first.probability(Outcome::BOTH).max(second.probability(Outcome::BOTH));
    let cross = second
        .probability(Outcome::D2_ONLY)
        .max(first.probability(Outcome::D1_ONLY));
    let msg = format!("inconclusive gap {gap:.3e}, both-click {both:.3e}, wrong conclusive {cross:.3e}");
    if gap <= PROBABILITY && both <= FORBIDDEN && cross <= FORBIDDEN {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3() -> Check {
    let mut worst = 0.0f64;
    for (a1, a2) in random_pairs() {
        let cfg = receiver(a1, a2, 1.0);
        let povm = povm_analytic(&cfg).map_err(|e| e.to_string())?;
        let report = optimality_check(&cfg, &povm).map_err(|e| e.to_string())?;
        let overlap = (-(a1.value() - a2.value()).norm_sqr() / 2.0).exp();
        worst = worst.max((report.numeric_inconclusive - overlap).abs());
    }
    let msg = format!("max |P_inconclusive - |<a1|a2>|| = {worst:.3e}");
    if worst <= PROBABILITY {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Check {
    let cfg = receiver(amp(0.8, 0.0), amp(-0.8, 0.0), 1.0);
    let povm = povm_analytic(&cfg).map_err(|e| e.to_string())?;
    let mut rng = RngStream::new(SEED, 4);
    let sequence: Vec<SentState> = (0..2 * TRIALS)
        .map(|i| if i % 2 == 0 { SentState::First } else { SentState::Second })
        .collect();

    let tallies = run_trials(&cfg, &sequence, &mut rng).map_err(|e| e.to_string())?;
    let mut outside = Vec::new();
    for (sent, alpha) in [(SentState::First, cfg.alpha1()), (SentState::Second, cfg.alpha2())] {
        let dist = outcome_probabilities(&cfg, alpha, &povm).map_err(|e| e.to_string())?;
        let tally = tallies.get(sent);
        for outcome in Outcome::ALL {
            let band = BinomialBand::new(dist.probability(outcome), tally.n_trials(), SIGMAS);
            if !band.contains(tally.count(outcome)) {
                outside.push(format!("{sent:?}/{outcome}"));
            }
        }
    }
    let msg = format!(
        "{} trials per state; outside 3 sigma: {}; wrong conclusive {}, both-click {}",
        TRIALS,
        if outside.is_empty() { "none".to_string() } else { outside.join(",") },
        tallies.wrong_conclusive(),
        tallies.both_clicks()
    );
    if outside.is_empty() && tallies.wrong_conclusive() == 0 && tallies.both_clicks() == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Check {
    let mut worst_balance = 0.0f64;
    let mut worst_mean = 0.0f64;
    let mut worst_rate = 0.0f64;
    let mut outside = Vec::new();
    let eta = 1.0;
    for t in [0.01, 0.05, 0.1, 0.2] {
        for g in [5.0, 10.0, 20.0] {
            let cfg = MultiplexConfig::new(amp(g, 0.0), t, eta, 1.0, ROUNDS, SEED).map_err(|e| e.to_string())?;
            let balance = balance_check(&cfg, None).map_err(|e| e.to_string())?;
            worst_balance = worst_balance.max(balance.imbalance.abs());

            let mean = (1.0 - t) * (1.0 - t) * t * t * g * g / (2.0 - t);
            let one = propagate_bob(&alice_emit(true, &cfg), &cfg);
            let zero = propagate_bob(&alice_emit(false, &cfg), &cfg);
            worst_mean = worst_mean
                .max((one.d1.norm_sqr() - mean).abs())
                .max((zero.d2.norm_sqr() - mean).abs());

            let rate = (-eta * mean).exp();
            worst_rate = worst_rate.max((cfg.derived().inconclusive_probability - rate).abs());

            let report = run_protocol(&cfg).map_err(|e| e.to_string())?;
            if !BinomialBand::new(rate, ROUNDS, SIGMAS).contains(report.inconclusive_count) {
                outside.push(format!("T={t},|g|={g}"));
            }
        }
    }
    let msg = format!(
        "imbalance {worst_balance:.3e}, mean photon gap {worst_mean:.3e}, rate gap {worst_rate:.3e}, \
         simulated outside 3 sigma: {}",
        if outside.is_empty() { "none".to_string() } else { outside.join(";") }
    );
    if worst_balance <= CLOSED_FORM && worst_mean <= CLOSED_FORM && worst_rate <= CLOSED_FORM && outside.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Check {
    let signal = 1.0; // |gamma| T
    let mut ratios = Vec::new();
    for t in [0.1, 0.05, 0.01] {
        let cfg = MultiplexConfig::new(amp(signal / t, 0.0), t, 1.0, 1.0, 1, SEED).map_err(|e| e.to_string())?;
        let bound = (-(t * signal / t).powi(2) / 2.0).exp();
        ratios.push(cfg.derived().inconclusive_probability / bound);
    }
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0]);
    let above_one = ratios.iter().all(|r| *r >= 1.0);
    let msg = format!(
        "ratios at T = 0.1, 0.05, 0.01: {:.6}, {:.6}, {:.6}",
        ratios[0], ratios[1], ratios[2]
    );
    if monotone && above_one {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Check {
    let cfg = MultiplexConfig::new(amp(10.0, 0.0), 0.05, 1.0, 1.0, ROUNDS, SEED).map_err(|e| e.to_string())?;
    let report = run_protocol(&cfg).map_err(|e| e.to_string())?;
    let (t, g, eta) = (0.05f64, 10.0f64, 1.0f64);
    let conclusive = 1.0 - (-eta * (1.0 - t).powi(2) * (t * g).powi(2) / (2.0 - t)).exp();
    let band = BinomialBand::new(conclusive, ROUNDS, SIGMAS);
    let sifted = report.sifted_key.len() as u64;
    let msg = format!(
        "BER {}, anomalous {}, sifted fraction {:.5} (expected {:.5} +/- {:.5})",
        report.bit_error_rate,
        report.anomalous_count,
        report.sifted_key_rate,
        conclusive,
        SIGMAS * band.sigma / ROUNDS as f64
    );
    if report.bit_error_rate == 0.0 && report.anomalous_count == 0 && band.contains(sifted) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("POVM cross-oracle equivalence", criterion_1),
        ("antipodal pair probabilities", criterion_2),
        ("inconclusive rate at the overlap bound", criterion_3),
        ("Monte Carlo consistency", criterion_4),
        ("multiplex closed forms", criterion_5),
        ("approach to the quantum limit", criterion_6),
        ("protocol end to end", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
