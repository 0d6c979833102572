//! Trap counting, interleaved execution of traps and target, and the accreditation bound.

use crate::circuits::{tau_target_ensemble, tau_trap_ensemble, xy_target_ensemble, xy_trap_ensemble, Circuit, Ensemble, XyTwirl};
use crate::error::{Error, Result};
use crate::noisesim::{execute_probabilities, sample_dense, NoiseModel};
use crate::twirl::{search_tau_decomposition, TauDecomposition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Residual accepted when a decomposition has to be searched for.
pub const DECOMPOSITION_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Tau,
    Xy,
    XyStrong,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Tau, Protocol::Xy, Protocol::XyStrong];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Tau => "tau",
            Protocol::Xy => "xy",
            Protocol::XyStrong => "xy-strong",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown protocol `{s}` (expected tau, xy or xy-strong)")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AccreditationConfig {
    pub theta: f64,
    pub alpha: f64,
    #[serde(default = "default_k")]
    pub k: f64,
    pub protocol: Protocol,
    #[serde(default)]
    pub seed: u64,
    /// Decomposition for the τ protocol; searched from the first two-qubit gate when absent.
    #[serde(skip)]
    pub decomposition: Option<TauDecomposition>,
}

fn default_k() -> f64 {
    0.5
}

impl AccreditationConfig {
    pub fn new(theta: f64, alpha: f64, protocol: Protocol, seed: u64) -> Result<Self> {
        let cfg = Self { theta, alpha, k: default_k(), protocol, seed, decomposition: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_decomposition(mut self, dec: TauDecomposition) -> Self {
        self.decomposition = Some(dec);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_parameters(self.theta, self.alpha)?;
        if !(self.k > 0.0 && self.k <= 1.0) {
            return Err(Error::InvalidArgument(format!("k = {} outside (0, 1]", self.k)));
        }
        Ok(())
    }

    /// Smallest bound the protocol can return.
    pub fn minimum_looseness(&self) -> f64 {
        self.theta / self.k
    }
}

fn check_parameters(theta: f64, alpha: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidArgument(format!("theta = {theta} outside (0, 1]")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside (0, 1)")));
    }
    Ok(())
}

/// Number of traps giving confidence `alpha` that the trap failure rate is within `theta` of its mean.
pub fn trap_count(theta: f64, alpha: f64) -> Result<usize> {
    check_parameters(theta, alpha)?;
    let n = (2.0 / (theta * theta) * (2.0 / (1.0 - alpha)).ln()).ceil();
    Ok(n as usize + 1)
}

/// `(failures / n + θ) / k`.
pub fn accreditation_bound(failures: usize, n: usize, theta: f64, k: f64) -> f64 {
    (failures as f64 / n as f64 + theta) / k
}

/// Trap and target generators of one protocol for one input circuit.
#[derive(Clone, Debug)]
pub struct ProtocolEnsembles {
    pub trap: Ensemble,
    pub target: Ensemble,
}

/// The τ-decomposition used for `c`: the supplied one, or one searched from its first two-qubit gate.
pub fn resolve_decomposition(c: &Circuit, given: Option<&TauDecomposition>, seed: u64) -> Result<TauDecomposition> {
    if let Some(dec) = given {
        return Ok(dec.clone());
    }
    let Some((index, g)) = c.ops.iter().enumerate().find(|(_, g)| g.is_two_qubit()) else {
        return Ok(TauDecomposition::t_cnot());
    };
    let found = search_tau_decomposition(&g.unitary(), DECOMPOSITION_TOL, seed);
    found.decomposition.ok_or_else(|| Error::ForeignGate {
        index,
        detail: format!("no τ-decomposition within {DECOMPOSITION_TOL} (best residual {:.3e})", found.best_residual),
    })
}

pub fn protocol_ensembles(c: &Circuit, cfg: &AccreditationConfig) -> Result<ProtocolEnsembles> {
    match cfg.protocol {
        Protocol::Tau => {
            let dec = resolve_decomposition(c, cfg.decomposition.as_ref(), cfg.seed)?;
            Ok(ProtocolEnsembles { trap: tau_trap_ensemble(c, &dec)?, target: tau_target_ensemble(c, &dec)? })
        }
        Protocol::Xy | Protocol::XyStrong => {
            let twirl = if cfg.protocol == Protocol::Xy { XyTwirl::Weak } else { XyTwirl::Strong };
            Ok(ProtocolEnsembles { trap: xy_trap_ensemble(c, twirl)?, target: xy_target_ensemble(c, twirl)? })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitRole {
    Trap,
    Target,
}

/// One execution, in the order it was run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranscriptEntry {
    pub position: usize,
    pub role: CircuitRole,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trap_index: Option<usize>,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

/// Per-trap row for tabular output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrapRow {
    pub index: usize,
    pub position: usize,
    pub outcome: String,
    pub expected: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AccreditationReport {
    pub target_sample: String,
    pub bound: f64,
    pub trap_result: f64,
    pub n_traps: usize,
    pub trap_failures: usize,
    pub seed: u64,
    pub config: AccreditationConfig,
    pub transcript: Vec<TranscriptEntry>,
    /// The target circuit that produced the sample.
    #[serde(skip)]
    pub target_circuit: Circuit,
}

impl AccreditationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Traps ordered by index.
    pub fn trap_rows(&self) -> Vec<TrapRow> {
        let mut rows: Vec<TrapRow> = self
            .transcript
            .iter()
            .filter_map(|e| {
                Some(TrapRow {
                    index: e.trap_index?,
                    position: e.position,
                    outcome: e.outcome.clone(),
                    expected: e.expected.clone()?,
                    passed: e.passed?,
                })
            })
            .collect();
        rows.sort_by_key(|r| r.index);
        rows
    }

    pub fn target_position(&self) -> usize {
        self.transcript.iter().find(|e| e.role == CircuitRole::Target).map_or(0, |e| e.position)
    }
}

/// Runs the accreditation protocol once: `N_l` traps and one target in a random order, one shot each.
pub fn run_accreditation(c: &Circuit, nm: &NoiseModel, cfg: &AccreditationConfig) -> Result<AccreditationReport> {
    cfg.validate()?;
    if cfg.protocol == Protocol::XyStrong && !nm.n3_declared() {
        return Err(Error::MissingN3);
    }
    let ensembles = protocol_ensembles(c, cfg)?;
    let n = trap_count(cfg.theta, cfg.alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // circuit ids 0..n are traps, n is the target
    let mut order: Vec<usize> = (0..=n).collect();
    order.shuffle(&mut rng);
    let traps: Vec<_> = (0..n).map(|_| ensembles.trap.sample(&mut rng)).collect();
    let target = ensembles.target.sample(&mut rng);
    let shot_seeds: Vec<u64> = (0..=n).map(|_| rng.gen()).collect();
    nm.validate_for(&target.circuit)?;

    let bits = c.qubits;
    let outcomes = order
        .par_iter()
        .zip(&shot_seeds)
        .map(|(&id, &seed)| {
            let circuit = if id == n { &target.circuit } else { &traps[id].circuit };
            let probs = execute_probabilities(circuit, nm)?;
            let mut shot = sample_dense(&probs, bits, 1, &mut ChaCha8Rng::seed_from_u64(seed))?;
            Ok(shot.remove(0))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut transcript = Vec::with_capacity(n + 1);
    let mut failures = 0;
    let mut target_sample = String::new();
    for (position, (&id, outcome)) in order.iter().zip(outcomes).enumerate() {
        if id == n {
            target_sample = outcome.clone();
            transcript.push(TranscriptEntry { position, role: CircuitRole::Target, trap_index: None, outcome, expected: None, passed: None });
            continue;
        }
        let expected = traps[id].expected.clone().ok_or_else(|| Error::Internal("trap without expected outcome".into()))?;
        let passed = outcome == expected;
        failures += usize::from(!passed);
        transcript.push(TranscriptEntry {
            position,
            role: CircuitRole::Trap,
            trap_index: Some(id),
            outcome,
            expected: Some(expected),
            passed: Some(passed),
        });
    }
    Ok(AccreditationReport {
        target_sample,
        bound: accreditation_bound(failures, n, cfg.theta, cfg.k),
        trap_result: failures as f64 / n as f64,
        n_traps: n,
        trap_failures: failures,
        seed: cfg.seed,
        config: cfg.clone(),
        transcript,
        target_circuit: target.circuit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::GateKind;
    use crate::noisesim::{NoiseSite, SiteKind, SiteNoise};
    use crate::Channel;
    use proptest::prelude::*;

    fn xy_circuit() -> Circuit {
        Circuit::new(3).gate(GateKind::H, &[0]).gate(GateKind::Xy { t: 0.4 }, &[0, 1]).gate(GateKind::Xy { t: 0.9 }, &[1, 2])
    }

    fn tau_circuit() -> Circuit {
        let g = GateKind::U2(TauDecomposition::t_cnot().gate().clone());
        Circuit::new(3).gate(GateKind::H, &[0]).gate(g.clone(), &[0, 1]).gate(g, &[2, 1])
    }

    #[test]
    fn trap_counts() {
        assert_eq!(trap_count(0.2, 0.95).unwrap(), 186);
        assert_eq!(trap_count(1.0, 0.5).unwrap(), 4);
        assert_eq!(trap_count(0.1, 0.95).unwrap(), 739);
        for (theta, alpha) in [(0.0, 0.5), (1.1, 0.5), (0.5, 0.0), (0.5, 1.0), (f64::NAN, 0.5)] {
            assert!(trap_count(theta, alpha).is_err());
        }
    }

    #[test]
    fn noiseless_bound_is_minimum_looseness() {
        for (c, protocol) in [(tau_circuit(), Protocol::Tau), (xy_circuit(), Protocol::Xy), (xy_circuit(), Protocol::XyStrong)] {
            let cfg = AccreditationConfig::new(0.2, 0.95, protocol, 3).unwrap().with_decomposition(TauDecomposition::t_cnot());
            let r = run_accreditation(&c, &NoiseModel::noiseless().declare_n3(), &cfg).unwrap();
            assert_eq!(r.trap_failures, 0);
            assert!((r.bound - 0.4).abs() < 1e-15);
            assert_eq!(r.transcript.len(), 187);
        }
    }

    #[test]
    fn always_failing_traps() {
        let flip = SiteNoise::new(Channel::pauli(&[0.0, 1.0, 0.0, 0.0], 1).unwrap());
        let nm = NoiseModel::noiseless().with_site(NoiseSite::new(SiteKind::Measurement, 0), flip).unwrap();
        let cfg = AccreditationConfig::new(0.2, 0.95, Protocol::Xy, 9).unwrap();
        let r = run_accreditation(&xy_circuit(), &nm, &cfg).unwrap();
        assert_eq!(r.trap_failures, r.n_traps);
        assert!((r.bound - 2.4).abs() < 1e-12);
    }

    #[test]
    fn strong_xy_needs_n3() {
        let cfg = AccreditationConfig::new(0.5, 0.9, Protocol::XyStrong, 0).unwrap();
        assert!(matches!(run_accreditation(&xy_circuit(), &NoiseModel::noiseless(), &cfg), Err(Error::MissingN3)));
    }

    #[test]
    fn reports_are_reproducible() {
        let nm = NoiseModel::noiseless()
            .with_default(SiteKind::TwoQubitGate, SiteNoise::new(Channel::depolarizing(0.1, 2).unwrap()))
            .unwrap();
        let cfg = AccreditationConfig::new(0.3, 0.9, Protocol::Tau, 17).unwrap();
        let a = run_accreditation(&tau_circuit(), &nm, &cfg).unwrap();
        let b = run_accreditation(&tau_circuit(), &nm, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let rows = a.trap_rows();
        assert_eq!(rows.len(), a.n_traps);
        assert_eq!(rows.iter().filter(|r| !r.passed).count(), a.trap_failures);
    }

    #[test]
    fn target_position_is_uniform() {
        // chi-square over the 5 positions of a 4-trap run
        let runs = 1000;
        let mut counts = [0usize; 5];
        let c = xy_circuit();
        for seed in 0..runs {
            let cfg = AccreditationConfig::new(1.0, 0.5, Protocol::Xy, seed).unwrap();
            counts[run_accreditation(&c, &NoiseModel::noiseless(), &cfg).unwrap().target_position()] += 1;
        }
        let expected = runs as f64 / 5.0;
        let chi2: f64 = counts.iter().map(|&k| (k as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 18.47, "{counts:?} chi2 = {chi2}");
    }

    #[test]
    fn searched_decomposition_for_cnot() {
        let c = Circuit::new(2).gate(GateKind::Cnot, &[0, 1]);
        let cfg = AccreditationConfig::new(0.5, 0.5, Protocol::Tau, 1).unwrap();
        assert_eq!(run_accreditation(&c, &NoiseModel::noiseless(), &cfg).unwrap().trap_failures, 0);
    }

    #[test]
    fn config_parses_with_default_k() {
        let cfg: AccreditationConfig = serde_json::from_str(r#"{"theta": 0.2, "alpha": 0.95, "protocol": "xy-strong"}"#).unwrap();
        assert_eq!(cfg.k, 0.5);
        assert_eq!(cfg.protocol, Protocol::XyStrong);
        assert_eq!("xy-strong".parse::<Protocol>().unwrap(), Protocol::XyStrong);
        assert!(AccreditationConfig::new(0.2, 0.95, Protocol::Xy, 0).unwrap().with_k(0.0).is_err());
    }

    proptest! {
        #[test]
        fn bound_is_monotone_in_successes(n in 1usize..500, f in 0usize..500, theta in 0.01f64..1.0, k in 0.05f64..1.0) {
            let f = f.min(n);
            let b = accreditation_bound(f, n, theta, k);
            prop_assert!(b >= theta / k - 1e-15);
            if f > 0 {
                prop_assert!(accreditation_bound(f - 1, n, theta, k) <= b);
            }
        }
    }
}
