//! Run manifests: file paths plus protocol configuration, overridable from flags.

use crate::error::{CliError, CliResult};
use qaccred::accredit::{AccreditationConfig, Protocol};
use qaccred::circuits::Circuit;
use qaccred::noisesim::NoiseModel;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestConfig {
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub k: Option<f64>,
    pub protocol: Option<Protocol>,
    pub seed: Option<u64>,
}

/// ```json
/// {"circuit": "bell.json", "noise": "noise.json", "out": "out",
///  "config": {"theta": 0.2, "alpha": 0.95, "protocol": "xy", "seed": 7}, "runs": 50}
/// ```
/// Relative paths resolve against the manifest's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub circuit: Option<PathBuf>,
    pub noise: Option<PathBuf>,
    pub compare: Option<PathBuf>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub config: ManifestConfig,
    pub runs: Option<usize>,
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

impl RunManifest {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read(path)?;
        let mut m: RunManifest = serde_json::from_str(&text).map_err(|e| CliError::File {
            path: path.to_path_buf(),
            source: qaccred::Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut m.circuit, &mut m.noise, &mut m.compare, &mut m.out].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(m)
    }
}

/// Manifest values with command-line overrides applied.
#[derive(Debug)]
pub struct Resolved {
    pub circuit: Circuit,
    pub noise: NoiseModel,
    pub compare: Option<NoiseModel>,
    pub config: AccreditationConfig,
    pub out: Option<PathBuf>,
    pub runs: Option<usize>,
}

pub fn load_circuit(path: &Path) -> CliResult<Circuit> {
    Circuit::from_json(&read(path)?).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

pub fn load_noise(path: &Path) -> CliResult<NoiseModel> {
    NoiseModel::from_json(&read(path)?).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

#[derive(Debug, Default, Clone, clap::Args)]
pub struct RunArgs {
    /// Manifest file; flags override its values.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Noise file; noiseless when absent.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, value_parser = parse_protocol)]
    pub protocol: Option<Protocol>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    s.parse().map_err(|e: qaccred::Error| e.to_string())
}

impl RunArgs {
    pub fn resolve(&self, compare: Option<&Path>, runs: Option<usize>) -> CliResult<Resolved> {
        let m = match &self.manifest {
            Some(p) => RunManifest::load(p)?,
            None => RunManifest::default(),
        };
        let circuit_path = self.circuit.clone().or(m.circuit).ok_or_else(|| CliError::Validation("no circuit given (--circuit or manifest)".into()))?;
        let circuit = load_circuit(&circuit_path)?;
        let noise = match self.noise.clone().or(m.noise) {
            Some(p) => load_noise(&p)?,
            None => NoiseModel::noiseless(),
        };
        let compare = match compare.map(Path::to_path_buf).or(m.compare) {
            Some(p) => Some(load_noise(&p)?),
            None => None,
        };
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Validation(format!("missing --{name}")));
        let theta = need(self.theta.or(m.config.theta), "theta")?;
        let alpha = need(self.alpha.or(m.config.alpha), "alpha")?;
        let protocol = self.protocol.or(m.config.protocol).ok_or_else(|| CliError::Validation("missing --protocol".into()))?;
        let seed = self.seed.or(m.config.seed).unwrap_or(0);
        let mut config = AccreditationConfig::new(theta, alpha, protocol, seed)?;
        if let Some(k) = self.k.or(m.config.k) {
            config = config.with_k(k)?;
        }
        Ok(Resolved { circuit, noise, compare, config, out: self.out.clone().or(m.out), runs: runs.or(m.runs) })
    }
}
