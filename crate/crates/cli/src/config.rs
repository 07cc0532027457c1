//! Run configuration, read from TOML.
//!
//! ```toml
//! [receiver]
//! alpha1 = [0.8, 0.0]      # [re, im]
//! alpha2 = [-0.8, 0.0]
//! dim = 32                 # optional, sized from the amplitudes when absent
//! eta = 1.0
//!
//! [multiplex]
//! gamma = [10.0, 0.0]
//! T = 0.05
//! eta = 1.0
//! channel_transmission = 1.0   # optional, lossless when absent
//! rounds = 100000
//!
//! [rng]
//! seed = 42
//!
//! [output]
//! format = "csv"           # or "json"
//! path = "results"         # optional; stdout when absent
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use usd_core::hilbert::FockDim;
use usd_core::{ComplexAmplitude, MultiplexConfig, ReceiverConfig};

use crate::error::{CliError, CliResult};

/// Overrides `output.path` when loading from a file.
pub const OUTPUT_DIR_ENV: &str = "USD_OUTPUT_DIR";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub receiver: Option<ReceiverSection>,
    pub multiplex: Option<MultiplexSection>,
    pub rng: Option<RngSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverSection {
    pub alpha1: [f64; 2],
    pub alpha2: [f64; 2],
    pub dim: Option<usize>,
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplexSection {
    pub gamma: [f64; 2],
    #[serde(rename = "T")]
    pub transmission: f64,
    pub eta: f64,
    pub channel_transmission: Option<f64>,
    pub rounds: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RngSection {
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hash: String,
    pub receiver: Option<ReceiverConfig>,
    pub multiplex: Option<MultiplexConfig>,
    pub seed: Option<u64>,
    pub format: Format,
    pub output_dir: Option<PathBuf>,
}

fn amplitude(name: &str, v: [f64; 2]) -> CliResult<ComplexAmplitude> {
    ComplexAmplitude::new(v[0], v[1]).map_err(|e| CliError::Config(format!("{name}: {e}")))
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| CliError::Config(format!("config file {} is not UTF-8", path.display())))?;
        let mut cfg = Self::parse(text)?;
        cfg.hash = hex::encode(Sha256::digest(&bytes));
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()) {
            cfg.output_dir = Some(PathBuf::from(dir));
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let file: RunConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let seed = file.rng.as_ref().map(|r| r.seed);

        let receiver = match &file.receiver {
            None => None,
            Some(r) => {
                let dim = r
                    .dim
                    .map(FockDim::new)
                    .transpose()
                    .map_err(|e| CliError::Config(format!("receiver.dim: {e}")))?;
                let cfg = ReceiverConfig::new(amplitude("receiver.alpha1", r.alpha1)?, amplitude("receiver.alpha2", r.alpha2)?, dim, r.eta)
                    .map_err(|e| CliError::Config(format!("receiver: {e}")))?;
                Some(cfg)
            }
        };

        let multiplex = match &file.multiplex {
            None => None,
            Some(m) => {
                let seed = seed.ok_or_else(|| CliError::Config("[multiplex] needs an [rng] seed".into()))?;
                let cfg = MultiplexConfig::new(
                    amplitude("multiplex.gamma", m.gamma)?,
                    m.transmission,
                    m.eta,
                    m.channel_transmission.unwrap_or(1.0),
                    m.rounds,
                    seed,
                )
                .map_err(|e| CliError::Config(format!("multiplex: {e}")))?;
                Some(cfg)
            }
        };

        let output = file.output.clone();
        let format = output.as_ref().and_then(|o| o.format).unwrap_or_default();
        let output_dir = output.and_then(|o| o.path);

        Ok(Self {
            hash: hex::encode(Sha256::digest(text.as_bytes())),
            receiver,
            multiplex,
            seed,
            format,
            output_dir,
        })
    }

    pub fn receiver(&self) -> CliResult<&ReceiverConfig> {
        self.receiver
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a [receiver] section".into()))
    }

    pub fn multiplex(&self) -> CliResult<&MultiplexConfig> {
        self.multiplex
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a [multiplex] section".into()))
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Config("this command needs an [rng] seed".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RECEIVER: &str = "[receiver]\nalpha1 = [0.8, 0.0]\nalpha2 = [-0.8, 0.0]\neta = 1.0\n";

    #[test]
    fn receiver_only() {
        let cfg = RunConfig::parse(RECEIVER).unwrap();
        assert!(cfg.receiver.is_some() && cfg.multiplex.is_none());
        assert_eq!(cfg.format, Format::Csv);
        assert!(cfg.seed().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = format!("{RECEIVER}beta = 1.0\n");
        assert!(matches!(RunConfig::parse(&text), Err(CliError::Config(_))));
        assert!(RunConfig::parse("[receivr]\n").is_err());
    }

    #[test]
    fn physical_ranges_validated() {
        let bad_eta = RECEIVER.replace("eta = 1.0", "eta = 1.5");
        assert!(RunConfig::parse(&bad_eta).is_err());
        let same = RECEIVER.replace("[-0.8, 0.0]", "[0.8, 0.0]");
        assert!(RunConfig::parse(&same).is_err());
        let dim1 = format!("{RECEIVER}dim = 1\n");
        assert!(RunConfig::parse(&dim1).is_err());
    }

    #[test]
    fn multiplex_needs_a_seed() {
        let m = "[multiplex]\ngamma = [10.0, 0.0]\nT = 0.05\neta = 1.0\nrounds = 10\n";
        assert!(RunConfig::parse(m).is_err());
        let cfg = RunConfig::parse(&format!("{m}[rng]\nseed = 3\n")).unwrap();
        assert_eq!(cfg.multiplex.unwrap().channel_transmission(), 1.0);
        let bad_t = m.replace("T = 0.05", "T = 1.0");
        assert!(RunConfig::parse(&format!("{bad_t}[rng]\nseed = 3\n")).is_err());
    }

    #[test]
    fn missing_amplitude_is_an_error() {
        assert!(RunConfig::parse("[receiver]\nalpha1 = [1.0, 0.0]\neta = 1.0\n").is_err());
    }
}
