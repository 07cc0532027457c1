use std::path::{Path, PathBuf};

use usd_core::discrimination::{
    optimality_check, outcome_probabilities, povm_analytic, povm_ancilla, Construction, Outcome, SentState,
};
use usd_core::hilbert::FockDim;
use usd_core::montecarlo::{chi_square, run_trials, BinomialBand, SamplingTable, RNG_ALGORITHM, RngStream};
use usd_core::multiplex::{alice_emit, click_probabilities, propagate_bob, run_protocol};
use usd_core::{tolerance, ComplexAmplitude, MultiplexConfig, PovmSet, ReceiverConfig};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::record::{matrix_dump, Metadata, ResultRecord, Source, Table};

const SIGMAS: f64 = 3.0;
const CHI_SQUARE_SIGNIFICANCE: f64 = 1e-3;

fn metadata(command: &str, cfg: &RunConfig) -> Metadata {
    Metadata {
        command: command.to_string(),
        config_sha256: cfg.hash.clone(),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: usd_core::VERSION.to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
    }
}

fn source_of(c: Construction) -> Source {
    match c {
        Construction::Analytic => Source::Analytic,
        Construction::Ancilla => Source::Ancilla,
    }
}

fn sent_label(s: SentState) -> &'static str {
    match s {
        SentState::First => "alpha1",
        SentState::Second => "alpha2",
    }
}

/// `exp(-eta |alpha1 - alpha2|^2 / 2)`.
fn closed_form_inconclusive(cfg: &ReceiverConfig) -> f64 {
    (-cfg.eta() * (cfg.alpha1().value() - cfg.alpha2().value()).norm_sqr() / 2.0).exp()
}

/// Closed-form `p_kl` for the given sent state.
fn closed_form(cfg: &ReceiverConfig, sent: SentState, outcome: Outcome) -> f64 {
    let p00 = closed_form_inconclusive(cfg);
    let conclusive = match sent {
        SentState::First => Outcome::D2_ONLY,
        SentState::Second => Outcome::D1_ONLY,
    };
    if outcome == Outcome::NONE {
        p00
    } else if outcome == conclusive {
        1.0 - p00
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Analytic,
    Ancilla,
    Both,
}

pub fn povm(cfg: &RunConfig, which: Which, dump: bool) -> CliResult<ResultRecord> {
    let receiver = cfg.receiver()?;
    let mut record = ResultRecord::new(metadata("povm", cfg));
    record.scalar("dim", Source::Analytic, receiver.dim().get() as f64);

    let mut built: Vec<PovmSet> = Vec::new();
    if matches!(which, Which::Analytic | Which::Both) {
        built.push(povm_analytic(receiver)?);
    }
    if matches!(which, Which::Ancilla | Which::Both) {
        built.push(povm_ancilla(receiver)?);
    }

    for set in &built {
        let src = source_of(set.construction());
        let d = set.diagnostics();
        record.scalar("completeness_residual", src, d.completeness_residual);
        record.scalar("min_eigenvalue", src, d.min_eigenvalue);
        record.scalar("hermitian_defect", src, d.hermitian_defect);
    }
    if let [analytic, ancilla] = built.as_slice() {
        let gap = analytic.max_discrepancy(ancilla)?;
        record.scalar("max_discrepancy", Source::Ancilla, gap);
    }

    if dump {
        let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        for set in &built {
            dump_povm(set, &dir)?;
        }
    }

    for set in &built {
        set.validate()
            .map_err(|e| CliError::Numerical(format!("{} POVM: {e}", set.construction().as_str())))?;
    }
    if let Some(gap) = record.scalar_value("max_discrepancy") {
        if gap > tolerance::CROSS_ORACLE {
            return Err(CliError::Numerical(format!(
                "numerical guard failed: cross-construction discrepancy {gap:e} exceeds {:e}",
                tolerance::CROSS_ORACLE
            )));
        }
    }
    Ok(record)
}

fn dump_povm(set: &PovmSet, dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    for outcome in Outcome::ALL {
        let op = set.element(outcome);
        let n = op.dim().get();
        let text = matrix_dump(n, op.modes().count(), n, n, |r, c| {
            let z = op.entry(r, c);
            (z.re, z.im)
        });
        let path = dir.join(format!("povm_{}_{}.txt", set.construction().as_str(), outcome.label()));
        std::fs::write(&path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn probs(cfg: &RunConfig) -> CliResult<ResultRecord> {
    let receiver = cfg.receiver()?;
    let povm = povm_analytic(receiver)?;
    let mut record = ResultRecord::new(metadata("probs", cfg));
    let mut table = Table::new("probabilities", Source::Analytic, &["sent", "outcome", "numeric", "closed_form"]);
    for sent in [SentState::First, SentState::Second] {
        let dist = outcome_probabilities(receiver, receiver.alpha(sent), &povm)?;
        for outcome in Outcome::ALL {
            table.push(vec![
                sent_label(sent).into(),
                outcome.label().into(),
                dist.probability(outcome).into(),
                closed_form(receiver, sent, outcome).into(),
            ]);
        }
    }
    record.tables.push(table);

    let report = optimality_check(receiver, &povm)?;
    record.scalar("numeric_inconclusive", Source::Analytic, report.numeric_inconclusive);
    record.scalar("closed_form_inconclusive", Source::Analytic, closed_form_inconclusive(receiver));
    record.scalar("quantum_bound", Source::Analytic, report.quantum_bound);
    record.scalar("optimality_gap", Source::Analytic, report.gap);
    Ok(record)
}

pub fn simulate(cfg: &RunConfig, trials: u64) -> CliResult<ResultRecord> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let receiver = cfg.receiver()?;
    let seed = cfg.seed()?;
    let n = usize::try_from(trials).map_err(|_| CliError::Usage("--trials is too large".into()))?;
    let sequence: Vec<SentState> = (0..2 * n)
        .map(|i| if i % 2 == 0 { SentState::First } else { SentState::Second })
        .collect();
    let mut rng = RngStream::new(seed, 0);
    let tallies = run_trials(receiver, &sequence, &mut rng)?;
    let povm = povm_analytic(receiver)?;

    let mut record = ResultRecord::new(metadata("simulate", cfg));
    let mut table = Table::new(
        "tallies",
        Source::Montecarlo,
        &["sent", "outcome", "count", "frequency", "probability_analytic", "band_lo", "band_hi", "within_band"],
    );
    let mut all_within = true;
    let mut chi_ok = true;
    for sent in [SentState::First, SentState::Second] {
        let dist = outcome_probabilities(receiver, receiver.alpha(sent), &povm)?;
        let sampling = SamplingTable::new(&dist)?;
        let tally = tallies.get(sent);
        for outcome in Outcome::ALL {
            let band = BinomialBand::new(sampling.probability(outcome), tally.n_trials(), SIGMAS);
            let inside = band.contains(tally.count(outcome));
            all_within &= inside;
            table.push(vec![
                sent_label(sent).into(),
                outcome.label().into(),
                tally.count(outcome).into(),
                tally.frequency(outcome).into(),
                dist.probability(outcome).into(),
                band.lo.into(),
                band.hi.into(),
                u64::from(inside).into(),
            ]);
        }
        let chi = chi_square(tally, &sampling);
        let name = format!("chi_square_{}", sent_label(sent));
        record.scalar(&name, Source::Montecarlo, chi.statistic);
        chi_ok &= chi.passes(CHI_SQUARE_SIGNIFICANCE);
    }
    record.tables.push(table);

    let total = tallies.first.n_trials() + tallies.second.n_trials();
    let inconclusive = tallies.first.count(Outcome::NONE) + tallies.second.count(Outcome::NONE);
    let conclusive = total - inconclusive - tallies.both_clicks();
    let expected = 1.0 - closed_form_inconclusive(receiver);
    let band = BinomialBand::new(expected, total, SIGMAS);
    record.scalar("trials_per_state", Source::Montecarlo, trials as f64);
    record.scalar("conclusive_fraction", Source::Montecarlo, conclusive as f64 / total as f64);
    record.scalar("conclusive_fraction_expected", Source::Analytic, expected);
    record.scalar("conclusive_band_lo", Source::Analytic, band.lo / total as f64);
    record.scalar("conclusive_band_hi", Source::Analytic, band.hi / total as f64);
    record.flag("conclusive_within_band", Source::Montecarlo, band.contains(conclusive));
    record.scalar("wrong_conclusive", Source::Montecarlo, tallies.wrong_conclusive() as f64);
    record.scalar("both_clicks", Source::Montecarlo, tallies.both_clicks() as f64);
    record.flag("all_within_band", Source::Montecarlo, all_within);
    record.flag("chi_square_pass", Source::Montecarlo, chi_ok);
    Ok(record)
}

pub fn multiplex(cfg: &RunConfig) -> CliResult<ResultRecord> {
    let m = cfg.multiplex()?;
    if m.high_transmission_warning() {
        eprintln!(
            "warning: T = {} is outside the weak-splitter regime (T <= 0.2) the scheme is designed for",
            m.transmission()
        );
    }
    let d = m.derived();
    let report = run_protocol(m)?;
    let mut record = ResultRecord::new(metadata("multiplex", cfg));
    let src = Source::Multiplex;
    record.scalar("signal_amplitude_re", src, d.alice_signal_amp.re);
    record.scalar("signal_amplitude_im", src, d.alice_signal_amp.im);
    record.scalar("reference_amplitude_re", src, d.alice_aux_amp.re);
    record.scalar("reference_amplitude_im", src, d.alice_aux_amp.im);
    record.scalar("tau", src, d.tau);
    record.scalar("state_overlap", src, d.state_overlap);
    record.scalar("detector_mean_photons", src, d.detector_mean_photons);
    record.scalar("inconclusive_probability", src, d.inconclusive_probability);
    record.flag("high_transmission_warning", src, m.high_transmission_warning());

    record.scalar("rounds", src, report.rounds as f64);
    record.scalar("sifted_key_length", src, report.sifted_key.len() as f64);
    record.scalar("sifted_key_rate", src, report.sifted_key_rate);
    record.scalar("bit_errors", src, report.bit_errors as f64);
    record.scalar("bit_error_rate", src, report.bit_error_rate);
    record.scalar("inconclusive_count", src, report.inconclusive_count as f64);
    record.scalar("inconclusive_rate_empirical", src, report.inconclusive_rate_empirical);
    record.scalar("anomalous_count", src, report.anomalous_count as f64);
    record.scalar("out_of_window_rounds", src, report.out_of_window_rounds as f64);

    let mut key = Table::new("sifted_key", src, &["round", "sent_bit", "received_bit"]);
    for (pos, bit) in report.sifted_positions.iter().zip(&report.sifted_key) {
        key.push(vec![
            (*pos as u64).into(),
            u64::from(report.sent_bits[*pos]).into(),
            u64::from(*bit).into(),
        ]);
    }
    record.tables.push(key);
    Ok(record)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Eta,
    Transmission,
    GammaMagnitude,
    AlphaSeparation,
}

impl std::str::FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "eta" => Ok(SweepParam::Eta),
            "T" => Ok(SweepParam::Transmission),
            "gamma_mag" => Ok(SweepParam::GammaMagnitude),
            "alpha_separation" => Ok(SweepParam::AlphaSeparation),
            other => Err(CliError::Usage(format!(
                "unknown sweep parameter '{other}' (expected eta, T, gamma_mag or alpha_separation)"
            ))),
        }
    }
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::Eta => "eta",
            SweepParam::Transmission => "T",
            SweepParam::GammaMagnitude => "gamma_mag",
            SweepParam::AlphaSeparation => "alpha_separation",
        }
    }
}

pub const SWEEP_COLUMNS: [&str; 6] = [
    "param",
    "value",
    "inconclusive_analytic",
    "quantum_bound",
    "inconclusive_numeric",
    "inconclusive_montecarlo",
];

struct SweepRow {
    analytic: f64,
    bound: f64,
    numeric: Option<f64>,
    montecarlo: Option<f64>,
}

fn receiver_row(r: &ReceiverConfig, trials: Option<u64>, seed: Option<u64>) -> CliResult<SweepRow> {
    let povm = povm_analytic(r)?;
    let report = optimality_check(r, &povm)?;
    let montecarlo = match trials {
        None => None,
        Some(n) => {
            let n = usize::try_from(n).map_err(|_| CliError::Usage("--trials is too large".into()))?;
            let seq: Vec<SentState> = (0..2 * n)
                .map(|i| if i % 2 == 0 { SentState::First } else { SentState::Second })
                .collect();
            let mut rng = RngStream::new(seed.expect("checked before the sweep"), 0);
            let t = run_trials(r, &seq, &mut rng)?;
            let none = t.first.count(Outcome::NONE) + t.second.count(Outcome::NONE);
            Some(none as f64 / (2 * n) as f64)
        }
    };
    Ok(SweepRow {
        analytic: closed_form_inconclusive(r),
        bound: (-(r.alpha1().value() - r.alpha2().value()).norm_sqr() / 2.0).exp(),
        numeric: Some(report.numeric_inconclusive),
        montecarlo,
    })
}

fn multiplex_row(m: &MultiplexConfig, trials: Option<u64>) -> CliResult<SweepRow> {
    let d = m.derived();
    let mut numeric = 0.0;
    for bit in [false, true] {
        let amps = propagate_bob(&alice_emit(bit, m), m);
        numeric += click_probabilities(&amps, m.eta())?.inconclusive() / 2.0;
    }
    let montecarlo = match trials {
        None => None,
        Some(n) => Some(run_protocol(&m.with_rounds(n)?)?.inconclusive_rate_empirical),
    };
    Ok(SweepRow {
        analytic: d.inconclusive_probability,
        bound: d.state_overlap,
        numeric: Some(numeric),
        montecarlo,
    })
}

pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub trials: Option<u64>,
}

pub fn sweep(cfg: &RunConfig, spec: &SweepSpec) -> CliResult<ResultRecord> {
    if !(spec.from.is_finite() && spec.to.is_finite() && spec.from < spec.to) {
        return Err(CliError::Usage(format!(
            "sweep range needs finite --from < --to, got {} and {}",
            spec.from, spec.to
        )));
    }
    if spec.steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {}", spec.steps)));
    }
    if spec.trials == Some(0) {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if spec.trials.is_some() {
        cfg.seed()?;
    }

    let grid: Vec<f64> = (0..spec.steps)
        .map(|i| {
            if i + 1 == spec.steps {
                spec.to
            } else {
                spec.from + (spec.to - spec.from) * i as f64 / (spec.steps - 1) as f64
            }
        })
        .collect();

    let source = match spec.param {
        SweepParam::AlphaSeparation => Source::Analytic,
        SweepParam::Eta if cfg.receiver.is_some() => Source::Analytic,
        _ => Source::Multiplex,
    };
    let mut table = Table::new("sweep", source, &SWEEP_COLUMNS);
    for &value in &grid {
        let row = match spec.param {
            SweepParam::AlphaSeparation => {
                let base = cfg.receiver()?;
                if value < 0.0 {
                    return Err(CliError::Usage(format!("alpha_separation must be non-negative, got {value}")));
                }
                let half = value / 2.0;
                if half == 0.0 {
                    SweepRow {
                        analytic: 1.0,
                        bound: 1.0,
                        numeric: None,
                        montecarlo: None,
                    }
                } else {
                    let dim = FockDim::for_amplitude(spec.to / 2.0).max(base.dim());
                    let r = ReceiverConfig::new(
                        ComplexAmplitude::real(half)?,
                        ComplexAmplitude::real(-half)?,
                        Some(dim),
                        base.eta(),
                    )?;
                    receiver_row(&r, spec.trials, cfg.seed)?
                }
            }
            SweepParam::Eta => match (&cfg.receiver, &cfg.multiplex) {
                (Some(base), _) => {
                    let r = ReceiverConfig::new(base.alpha1(), base.alpha2(), Some(base.dim()), value)?;
                    receiver_row(&r, spec.trials, cfg.seed)?
                }
                (None, Some(m)) => multiplex_row(&m.with_eta(value)?, spec.trials)?,
                (None, None) => {
                    return Err(CliError::Config("sweeping eta needs a [receiver] or [multiplex] section".into()))
                }
            },
            SweepParam::Transmission => multiplex_row(&cfg.multiplex()?.with_transmission(value)?, spec.trials)?,
            SweepParam::GammaMagnitude => {
                let m = cfg.multiplex()?;
                if value < 0.0 {
                    return Err(CliError::Usage(format!("gamma_mag must be non-negative, got {value}")));
                }
                let g = m.gamma();
                let gamma = if g.norm() > 0.0 { g.scaled(value / g.norm())? } else { ComplexAmplitude::real(value)? };
                multiplex_row(&m.with_gamma(gamma)?, spec.trials)?
            }
        };
        table.push(vec![
            spec.param.name().into(),
            value.into(),
            row.analytic.into(),
            row.bound.into(),
            row.numeric.into(),
            row.montecarlo.into(),
        ]);
    }

    let mut record = ResultRecord::new(metadata("sweep", cfg));
    record.tables.push(table);
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::Cell;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse(text).unwrap()
    }

    const RECEIVER: &str = "[receiver]\nalpha1 = [1.0, 0.0]\nalpha2 = [-1.0, 0.0]\ndim = 32\neta = 1.0\n[rng]\nseed = 5\n";

    #[test]
    fn closed_forms_match_numeric_probabilities() {
        let r = probs(&cfg(RECEIVER)).unwrap();
        let t = r.table("probabilities").unwrap();
        for row in &t.rows {
            let (Cell::Num(a), Cell::Num(b)) = (&row[2], &row[3]) else { panic!() };
            assert!((a - b).abs() < 1e-8);
        }
        assert!(r.scalar_value("optimality_gap").unwrap().abs() < 1e-8);
    }

    #[test]
    fn sweep_params_parse() {
        assert_eq!("T".parse::<SweepParam>().unwrap(), SweepParam::Transmission);
        assert!(matches!("t".parse::<SweepParam>(), Err(CliError::Usage(_))));
    }

    #[test]
    fn sweep_grid_hits_both_ends() {
        let spec = SweepSpec {
            param: SweepParam::Eta,
            from: 0.0,
            to: 1.0,
            steps: 3,
            trials: None,
        };
        let t = sweep(&cfg(RECEIVER), &spec).unwrap().tables.remove(0);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0][1], Cell::Num(0.0));
        assert_eq!(t.rows[2][1], Cell::Num(1.0));
        assert_eq!(t.rows[0][2], Cell::Num(1.0));
    }

    #[test]
    fn simulate_needs_a_seed() {
        let text = RECEIVER.replace("[rng]\nseed = 5\n", "");
        assert!(matches!(simulate(&cfg(&text), 10), Err(CliError::Config(_))));
    }

    #[test]
    fn povm_needs_receiver() {
        assert!(matches!(povm(&cfg("[rng]\nseed = 1\n"), Which::Both, false), Err(CliError::Config(_))));
    }
}
