use super::dense_tvd;
use crate::accredit::{Protocol, ProtocolEnsembles};
use crate::circuits::{ideal_probabilities, Circuit, Ensemble, GateKind, PlacedGate};
use crate::error::{Error, Result};
use crate::noisesim::{ensemble_distribution, ensemble_failure_probability, template_probabilities, NoiseModel, NoiseSite, SiteKind, SiteNoise};
use crate::qalg::{Pauli, PauliString};
use crate::twirl::{Role, TauDecomposition};
use crate::{Channel, Unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const RELOCATION_TOL: f64 = 1e-9;

/// A deterministic unitary fault at one noise site.
#[derive(Clone, Debug)]
pub struct InjectedFault {
    pub site: NoiseSite,
    pub label: String,
    pub unitary: Unitary,
}

impl InjectedFault {
    fn model(&self) -> Result<NoiseModel> {
        NoiseModel::noiseless().with_site(self.site, SiteNoise::new(Channel::unitary(&self.unitary)))
    }
}

fn letters(p: &[Pauli]) -> String {
    p.iter().map(|l| l.symbol()).collect()
}

/// Non-identity elements of the error basis each site kind is twirled into: `Γ` elements for τ
/// traps, Paulis for XY traps. Covers preparation, two-qubit gate and measurement sites.
pub fn fault_catalogue(trap: &Ensemble, protocol: Protocol, dec: Option<&TauDecomposition>) -> Result<Vec<InjectedFault>> {
    let skeleton = trap.branches.first().ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?.template.first();
    let (single, double): (Vec<(String, Unitary)>, Vec<(String, Unitary)>) = match protocol {
        Protocol::Tau => {
            let dec = dec.ok_or_else(|| Error::InvalidArgument("τ faults need the decomposition".into()))?;
            let frame = dec.vesicles(Role::First);
            let single = Pauli::ALL[1..].iter().map(|&p| (format!("γ{}", p.symbol()), frame.element(p).clone())).collect();
            let double = dec
                .gamma()
                .into_iter()
                .enumerate()
                .skip(1)
                .map(|(i, u)| (format!("γ{}", letters(&PauliString::from_index(2, i).letters().to_vec())), u))
                .collect();
            (single, double)
        }
        Protocol::Xy | Protocol::XyStrong => {
            let pauli = |n| {
                PauliString::all(n)
                    .skip(1)
                    .map(|p| (letters(p.letters()), Unitary::new(p.matrix()).expect("Pauli is unitary")))
                    .collect::<Vec<_>>()
            };
            (pauli(1), pauli(2))
        }
    };
    Ok(NoiseModel::sites_of(&skeleton)
        .into_iter()
        .filter(|(site, _)| site.kind != SiteKind::SingleQubitSlot)
        .flat_map(|(site, _)| {
            let set = if site.kind == SiteKind::TwoQubitGate { &double } else { &single };
            set.iter().map(move |(label, u)| InjectedFault { site, label: label.clone(), unitary: u.clone() })
        })
        .collect())
}

/// `c` with the fault written in as an explicit gate at its site.
pub fn inject_fault(c: &Circuit, fault: &InjectedFault) -> Result<Circuit> {
    let site = fault.site;
    let mut out = c.clone();
    let gate = |qubits: Vec<usize>| {
        let kind = if qubits.len() == 1 { GateKind::U1(fault.unitary.clone()) } else { GateKind::U2(fault.unitary.clone()) };
        PlacedGate::new(kind, qubits)
    };
    let missing = || Error::InvalidArgument(format!("{site} does not exist in the circuit"));
    match site.kind {
        SiteKind::Prep if site.index < c.qubits => out.ops.insert(0, gate(vec![site.index])),
        SiteKind::Measurement if site.index < c.qubits => out.ops.push(gate(vec![site.index])),
        SiteKind::Prep | SiteKind::Measurement => return Err(missing()),
        SiteKind::TwoQubitGate | SiteKind::SingleQubitSlot => {
            let two = site.kind == SiteKind::TwoQubitGate;
            let (at, g) = c
                .ops
                .iter()
                .enumerate()
                .filter(|(_, g)| g.is_two_qubit() == two)
                .nth(site.index)
                .ok_or_else(missing)?;
            out.ops.insert(at + 1, gate(g.qubits.clone()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaultDetection {
    pub site: NoiseSite,
    pub label: String,
    /// Exact probability over all draws that the trap does not return its expected outcome.
    pub exact: f64,
    /// Detection frequency over `trials` sampled traps, one shot each.
    pub empirical: f64,
    pub trials: usize,
    /// Exact variation distance the same fault causes on the draw-averaged target.
    pub target_nu: f64,
}

impl FaultDetection {
    /// Binomial standard deviation of the empirical frequency at rate `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Never detected and without effect on the target output.
    pub fn is_harmless(&self) -> bool {
        self.exact < 1e-12 && self.target_nu < 1e-9
    }

    /// Detected with frequency at least `k` up to three standard deviations, or harmless.
    pub fn meets(&self, k: f64) -> bool {
        self.is_harmless() || self.empirical >= k - 3.0 * self.sigma(k)
    }
}

fn dense(d: &crate::Distribution, bits: usize) -> Vec<f64> {
    (0..1usize << bits).map(|i| d.prob(&crate::qalg::bitstring(i, bits))).collect()
}

/// Exact and sampled detection probability of every fault, with its effect on the target.
pub fn detection_rates(ens: &ProtocolEnsembles, faults: &[InjectedFault], trials: usize, seed: u64) -> Result<Vec<FaultDetection>> {
    let trap = &ens.trap;
    let bits = ens.target.qubits();
    let clean = dense(&ensemble_distribution(&ens.target, &NoiseModel::noiseless())?, bits);
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = faults.iter().map(|_| master.gen()).collect();
    faults
        .par_iter()
        .zip(seeds)
        .map(|(fault, s)| {
            let model = fault.model()?;
            let exact = ensemble_failure_probability(trap, &model)?;
            let target_nu = dense_tvd(&clean, &dense(&ensemble_distribution(&ens.target, &model)?, bits));
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut detected = 0usize;
            for _ in 0..trials {
                let drawn = trap.sample(&mut rng);
                let expected = drawn.expected.ok_or_else(|| Error::InvalidArgument("ensemble has no expected outcomes".into()))?;
                let probs = ideal_probabilities(&inject_fault(&drawn.circuit, fault)?);
                let pass = probs[usize::from_str_radix(&expected, 2).map_err(|e| Error::Internal(e.to_string()))?];
                detected += usize::from(rng.gen::<f64>() >= pass);
            }
            Ok(FaultDetection {
                site: fault.site,
                label: fault.label.clone(),
                exact,
                empirical: detected as f64 / trials.max(1) as f64,
                trials,
                target_nu,
            })
        })
        .collect()
}

/// For each trap branch, an end-of-circuit fault (one `frame` element per qubit, applied just before
/// measurement) giving the same draw-averaged output as `fault`, if one exists.
pub fn relocate_fault(trap: &Ensemble, fault: &InjectedFault, frame: &[Unitary; 4]) -> Result<Vec<Option<Vec<usize>>>> {
    let n = trap.qubits();
    let faulty = fault.model()?;
    trap.branches
        .iter()
        .map(|branch| {
            let want = template_probabilities(&branch.template, &faulty)?;
            for code in 0..4usize.pow(n as u32) {
                let picks: Vec<usize> = (0..n).map(|q| (code >> (2 * (n - 1 - q))) & 3).collect();
                let mut nm = NoiseModel::noiseless();
                for (q, &i) in picks.iter().enumerate() {
                    nm = nm.with_site(NoiseSite::new(SiteKind::Measurement, q), SiteNoise::new(Channel::unitary(&frame[i])))?;
                }
                let got = template_probabilities(&branch.template, &nm)?;
                if got.iter().zip(&want).all(|(a, b)| (a - b).abs() < RELOCATION_TOL) {
                    return Ok(Some(picks));
                }
            }
            Ok(None)
        })
        .collect()
}
