use super::dense_tvd;
use crate::accredit::{protocol_ensembles, resolve_decomposition, run_accreditation, AccreditationConfig, Protocol};
use crate::circuits::{ideal_probabilities, Circuit, CircuitTemplate, PlacedGate, Segment};
use crate::error::{Error, Result};
use crate::noisesim::{ensemble_distribution, ensemble_failure_probability, execute_probabilities, NoiseModel, NoiseSite, SiteKind};
use crate::qalg::{bitstring, diamond_distance_estimate};
use crate::Channel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

const RESTARTS: usize = 6;
const SAME_CHANNEL_TOL: f64 = 1e-12;
const COMPARISON_SLACK: f64 = 1e-9;

/// Channel acting at a site on its own qubits, including any gate-dependent part.
pub fn site_channel(nm: &NoiseModel, site: NoiseSite, gate: Option<&PlacedGate>) -> Result<Channel> {
    let dim = 1usize << site.kind.arity();
    let base = match nm.lookup(site) {
        Some(noise) if noise.env > 0 => return Err(Error::InvalidArgument(format!("{site} uses ancillas; no site-local channel"))),
        Some(noise) => (*noise.channel).clone(),
        None => Channel::identity(dim),
    };
    match gate.and_then(|g| nm.dependent_channel(g)) {
        Some(dependent) if site.kind == SiteKind::SingleQubitSlot => dependent.then(&base),
        _ => Ok(base),
    }
}

/// Half the diamond norm of the difference, estimated from below.
fn half_diamond(a: &Channel, b: &Channel, seed: u64) -> Result<f64> {
    if a.superoperator().distance(&b.superoperator()) < SAME_CHANNEL_TOL {
        return Ok(0.0);
    }
    Ok(0.5 * diamond_distance_estimate(a, b, RESTARTS, seed)?)
}

fn gate_sites(c: &Circuit) -> Vec<(NoiseSite, Option<&PlacedGate>)> {
    NoiseModel::sites_of(c)
        .into_iter()
        .map(|(site, _)| site)
        .zip(
            std::iter::repeat(None)
                .take(c.qubits)
                .chain(c.ops.iter().map(Some))
                .chain(std::iter::repeat(None).take(c.qubits)),
        )
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RobustnessStatus {
    Consistent,
    /// The lower-bound estimate of ε was too small to certify the inequality; not a refutation.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct RobustnessVerdict {
    /// TVD between the two noisy output distributions.
    pub lhs: f64,
    /// `m · ε`.
    pub rhs: f64,
    pub differing_sites: usize,
    pub epsilon: f64,
    pub status: RobustnessStatus,
}

impl RobustnessVerdict {
    pub fn ok(&self) -> bool {
        self.status == RobustnessStatus::Consistent
    }
}

/// Compares the output of `c` under two noise models against `m · max ε` over the `m` sites where they differ.
pub fn verify_robustness(c: &Circuit, a: &NoiseModel, b: &NoiseModel) -> Result<RobustnessVerdict> {
    let mut epsilons = Vec::new();
    for (i, (site, gate)) in gate_sites(c).into_iter().enumerate() {
        let e = half_diamond(&site_channel(a, site, gate)?, &site_channel(b, site, gate)?, i as u64)?;
        if e > 0.0 {
            epsilons.push(e);
        }
    }
    let lhs = dense_tvd(&execute_probabilities(c, a)?, &execute_probabilities(c, b)?);
    let epsilon = epsilons.iter().copied().fold(0.0, f64::max);
    let rhs = epsilons.len() as f64 * epsilon;
    let status = if lhs <= rhs + COMPARISON_SLACK { RobustnessStatus::Consistent } else { RobustnessStatus::Inconclusive };
    Ok(RobustnessVerdict { lhs, rhs, differing_sites: epsilons.len(), epsilon, status })
}

/// Accreditation with and without a gate dependence, compared exactly and over paired runs.
#[derive(Clone, Debug, Serialize)]
pub struct CorollaryVerdict {
    pub differing_sites: usize,
    pub epsilon: f64,
    pub trap_failure: (f64, f64),
    pub nu: (f64, f64),
    pub mean_bound: (f64, f64),
    pub paired_runs: usize,
    pub ok: bool,
}

/// Largest per-site ε between two models over every gate a template can place at each single-qubit slot.
fn template_epsilons(t: &CircuitTemplate, a: &NoiseModel, b: &NoiseModel, cache: &mut HashMap<(usize, String), f64>) -> Result<HashMap<NoiseSite, f64>> {
    let mut out: HashMap<NoiseSite, f64> = HashMap::new();
    let mut note = |site: NoiseSite, e: f64| {
        let slot = out.entry(site).or_insert(0.0);
        *slot = slot.max(e);
    };
    for q in 0..t.qubits {
        for kind in [SiteKind::Prep, SiteKind::Measurement] {
            let site = NoiseSite::new(kind, q);
            note(site, half_diamond(&site_channel(a, site, None)?, &site_channel(b, site, None)?, q as u64)?);
        }
    }
    let (mut two, mut single) = (0, 0);
    for seg in &t.segments {
        let options: Vec<&[PlacedGate]> = match seg {
            Segment::Fixed(g) => vec![std::slice::from_ref(g)],
            Segment::Choice(opts) => opts.iter().map(Vec::as_slice).collect(),
        };
        let len = options[0].len();
        for pos in 0..len {
            let first = &options[0][pos];
            let site = if first.is_two_qubit() {
                NoiseSite::new(SiteKind::TwoQubitGate, two + options[0][..pos].iter().filter(|g| g.is_two_qubit()).count())
            } else {
                NoiseSite::new(SiteKind::SingleQubitSlot, single + options[0][..pos].iter().filter(|g| !g.is_two_qubit()).count())
            };
            for opt in &options {
                let g = &opt[pos];
                let key = (site.index + if g.is_two_qubit() { 1 << 40 } else { 0 }, format!("{:?}", g.unitary().matrix().data()));
                let e = match cache.get(&key) {
                    Some(e) => *e,
                    None => {
                        let e = half_diamond(&site_channel(a, site, Some(g))?, &site_channel(b, site, Some(g))?, site.index as u64)?;
                        cache.insert(key, e);
                        e
                    }
                };
                note(site, e);
            }
        }
        two += options[0].iter().filter(|g| g.is_two_qubit()).count();
        single += options[0].iter().filter(|g| !g.is_two_qubit()).count();
    }
    Ok(out)
}

/// Checks that neglecting the difference between `a` and `b` (typically a weak gate dependence)
/// moves trap failure rates and the target's ν by at most `m · ε`.
pub fn check_corollary(c: &Circuit, a: &NoiseModel, b: &NoiseModel, cfg: &AccreditationConfig, runs: usize, seed: u64) -> Result<CorollaryVerdict> {
    let mut cfg = cfg.clone();
    if cfg.protocol == Protocol::Tau {
        cfg.decomposition = Some(resolve_decomposition(c, cfg.decomposition.as_ref(), cfg.seed)?);
    }
    let ens = protocol_ensembles(c, &cfg)?;
    let mut cache = HashMap::new();
    let mut per_site: HashMap<NoiseSite, f64> = HashMap::new();
    for branch in ens.trap.branches.iter().chain(&ens.target.branches) {
        for (site, e) in template_epsilons(&branch.template, a, b, &mut cache)? {
            let slot = per_site.entry(site).or_insert(0.0);
            *slot = slot.max(e);
        }
    }
    let differing_sites = per_site.values().filter(|e| **e > 0.0).count();
    let epsilon = per_site.values().copied().fold(0.0, f64::max);
    let budget = differing_sites as f64 * epsilon;

    let ideal = ideal_probabilities(c);
    let nu = |nm: &NoiseModel| -> Result<f64> {
        let d = ensemble_distribution(&ens.target, nm)?;
        let dense: Vec<f64> = (0..1usize << c.qubits).map(|i| d.prob(&bitstring(i, c.qubits))).collect();
        Ok(dense_tvd(&ideal, &dense))
    };
    let trap_failure = (ensemble_failure_probability(&ens.trap, a)?, ensemble_failure_probability(&ens.trap, b)?);
    let nu = (nu(a)?, nu(b)?);

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..runs).map(|_| master.gen()).collect();
    let bounds = seeds
        .par_iter()
        .map(|&s| {
            let run = cfg.clone().with_seed(s);
            Ok((run_accreditation(c, a, &run)?.bound, run_accreditation(c, b, &run)?.bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = runs.max(1) as f64;
    let mean_bound = (bounds.iter().map(|p| p.0).sum::<f64>() / n, bounds.iter().map(|p| p.1).sum::<f64>() / n);

    let ok = (trap_failure.0 - trap_failure.1).abs() <= budget + COMPARISON_SLACK && (nu.0 - nu.1).abs() <= budget + COMPARISON_SLACK;
    Ok(CorollaryVerdict { differing_sites, epsilon, trap_failure, nu, mean_bound, paired_runs: runs, ok })
}
