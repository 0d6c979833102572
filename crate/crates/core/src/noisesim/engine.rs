use super::model::{NoiseModel, NoiseSite, SiteKind};
use crate::circuits::{apply_local, Circuit, CircuitTemplate, Ensemble, Measurement, PlacedGate, Prep, Segment};
use crate::error::{Error, Result};
use crate::{CMatrix, Channel, Complex, Distribution};
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Largest register (system plus ancillas) the dense simulator accepts.
pub const MAX_SIMULATED_QUBITS: usize = 12;

const TRACE_TOL: f64 = 1e-9;

/// Density matrix of the system followed by any ancillas allocated so far.
#[derive(Clone, Debug)]
pub struct DensityState {
    system: usize,
    total: usize,
    data: Vec<Complex>,
}

impl DensityState {
    pub fn zero(system: usize) -> Result<Self> {
        if system > MAX_SIMULATED_QUBITS {
            return Err(Error::SizeLimit(format!("{system} qubits exceeds {MAX_SIMULATED_QUBITS}")));
        }
        let d = 1usize << system;
        let mut data = vec![Complex::default(); d * d];
        data[0] = Complex::new(1.0, 0.0);
        Ok(Self { system, total: system, data })
    }

    fn dim(&self) -> usize {
        1 << self.total
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    /// `ρ ↦ AρB†` on the given qubits.
    fn sandwich(&mut self, a: &CMatrix, b: &CMatrix, targets: &[usize]) {
        let d = self.dim();
        for col in 0..d {
            apply_local(&mut self.data, self.total, col, d, a, targets, false);
        }
        for row in 0..d {
            apply_local(&mut self.data, self.total, row * d, 1, b, targets, true);
        }
    }

    pub fn apply_unitary(&mut self, u: &CMatrix, targets: &[usize]) {
        self.sandwich(u, u, targets);
    }

    /// Appends `k` ancillas in `|0⟩` as the least significant qubits.
    pub fn add_ancillas(&mut self, k: usize) -> Result<Vec<usize>> {
        if k == 0 {
            return Ok(Vec::new());
        }
        if self.total + k > MAX_SIMULATED_QUBITS {
            return Err(Error::SizeLimit(format!("{} qubits with ancillas exceeds {MAX_SIMULATED_QUBITS}", self.total + k)));
        }
        let (d, nd) = (self.dim(), self.dim() << k);
        let mut data = vec![Complex::default(); nd * nd];
        for r in 0..d {
            for c in 0..d {
                data[(r << k) * nd + (c << k)] = self.data[r * d + c];
            }
        }
        let added = (self.total..self.total + k).collect();
        self.data = data;
        self.total += k;
        Ok(added)
    }

    pub fn apply_channel(&mut self, ch: &Channel, targets: &[usize]) {
        if let [k] = ch.kraus() {
            self.sandwich(k, k, targets);
            return;
        }
        let mut acc = vec![Complex::default(); self.data.len()];
        for k in ch.kraus() {
            let mut branch = self.clone();
            branch.sandwich(k, k, targets);
            acc.iter_mut().zip(&branch.data).for_each(|(a, b)| *a += b);
        }
        self.data = acc;
    }

    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).sum()
    }

    /// Computational-basis probabilities of the system, ancillas traced out.
    pub fn system_probabilities(&self) -> Vec<f64> {
        let d = self.dim();
        let k = self.total - self.system;
        let mut out = vec![0.0; 1 << self.system];
        for i in 0..d {
            out[i >> k] += self.data[i * d + i].re;
        }
        out
    }

    fn accumulate(&mut self, other: &DensityState, weight: f64) {
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b * weight);
    }

    fn zeroed(&self) -> Self {
        Self { system: self.system, total: self.total, data: vec![Complex::default(); self.data.len()] }
    }
}

/// One noise site visited during execution.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SiteRecord {
    pub site: NoiseSite,
    pub qubits: Vec<usize>,
    pub noisy: bool,
    pub ancillas: usize,
}

/// Exact output of a noisy execution.
#[derive(Clone, Debug)]
pub struct ExecutionResult {
    pub exact: Distribution,
    pub samples: Option<Vec<String>>,
    pub transcript: Vec<SiteRecord>,
}

#[derive(Clone, Copy, Default)]
struct Ordinals {
    two: usize,
    single: usize,
}

struct Runner<'a> {
    model: &'a NoiseModel,
    transcript: Option<Vec<SiteRecord>>,
}

impl Runner<'_> {
    fn site(&mut self, state: &mut DensityState, site: NoiseSite, qubits: &[usize]) -> Result<()> {
        let noise = self.model.lookup(site);
        if let Some(t) = self.transcript.as_mut() {
            t.push(SiteRecord { site, qubits: qubits.to_vec(), noisy: noise.is_some(), ancillas: noise.map_or(0, |n| n.env) });
        }
        if let Some(noise) = noise {
            let mut targets = qubits.to_vec();
            targets.extend(state.add_ancillas(noise.env)?);
            state.apply_channel(&noise.channel, &targets);
        }
        Ok(())
    }

    fn prepare(&mut self, state: &mut DensityState, preps: &[Prep]) -> Result<()> {
        for (q, p) in preps.iter().enumerate() {
            state.apply_unitary(p.unitary().matrix(), &[q]);
            self.site(state, NoiseSite::new(SiteKind::Prep, q), &[q])?;
        }
        Ok(())
    }

    fn gate(&mut self, state: &mut DensityState, g: &PlacedGate, ord: &mut Ordinals) -> Result<()> {
        state.apply_unitary(g.unitary().matrix(), &g.qubits);
        let site = if g.is_two_qubit() {
            ord.two += 1;
            NoiseSite::new(SiteKind::TwoQubitGate, ord.two - 1)
        } else {
            if let Some(ch) = self.model.dependent_channel(g) {
                state.apply_channel(&ch, &g.qubits);
            }
            ord.single += 1;
            NoiseSite::new(SiteKind::SingleQubitSlot, ord.single - 1)
        };
        self.site(state, site, &g.qubits)
    }

    fn measure(&mut self, state: &mut DensityState, measurements: &[Measurement]) -> Result<Vec<f64>> {
        for (q, m) in measurements.iter().enumerate() {
            self.site(state, NoiseSite::new(SiteKind::Measurement, q), &[q])?;
            if let Measurement::Basis(u) = m {
                state.apply_unitary(u.matrix(), &[q]);
            }
        }
        let trace = state.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Internal(format!("trace drifted to {trace}")));
        }
        Ok(state.system_probabilities())
    }
}

fn finish(probs: Vec<f64>, bits: usize) -> Result<Distribution> {
    let clipped: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    Distribution::from_dense(bits, &clipped.iter().map(|p| p / total).collect::<Vec<_>>())
}

/// Dense outcome probabilities of one circuit under noise.
pub fn execute_probabilities(c: &Circuit, nm: &NoiseModel) -> Result<Vec<f64>> {
    c.validate()?;
    nm.validate_for(c)?;
    let mut runner = Runner { model: nm, transcript: None };
    let mut state = DensityState::zero(c.qubits)?;
    runner.prepare(&mut state, &c.preps)?;
    let mut ord = Ordinals::default();
    for g in &c.ops {
        runner.gate(&mut state, g, &mut ord)?;
    }
    runner.measure(&mut state, &c.measurements)
}

/// Exact density-matrix execution with a per-site transcript.
pub fn execute_exact(c: &Circuit, nm: &NoiseModel) -> Result<ExecutionResult> {
    c.validate()?;
    nm.validate_for(c)?;
    let mut runner = Runner { model: nm, transcript: Some(Vec::new()) };
    let mut state = DensityState::zero(c.qubits)?;
    runner.prepare(&mut state, &c.preps)?;
    let mut ord = Ordinals::default();
    for g in &c.ops {
        runner.gate(&mut state, g, &mut ord)?;
    }
    let probs = runner.measure(&mut state, &c.measurements)?;
    Ok(ExecutionResult { exact: finish(probs, c.qubits)?, samples: None, transcript: runner.transcript.unwrap_or_default() })
}

/// Outcome probabilities averaged exactly over every uniform choice of a template.
pub fn template_probabilities(t: &CircuitTemplate, nm: &NoiseModel) -> Result<Vec<f64>> {
    nm.validate_for(&t.first())?;
    let mut runner = Runner { model: nm, transcript: None };
    let mut state = DensityState::zero(t.qubits)?;
    runner.prepare(&mut state, &t.preps)?;
    let mut ord = Ordinals::default();
    for seg in &t.segments {
        match seg {
            Segment::Fixed(g) => runner.gate(&mut state, g, &mut ord)?,
            Segment::Choice(options) => {
                let start = ord;
                let branches = options
                    .par_iter()
                    .map(|gates| {
                        let mut local = Runner { model: nm, transcript: None };
                        let mut s = state.clone();
                        let mut o = start;
                        for g in gates {
                            local.gate(&mut s, g, &mut o)?;
                        }
                        Ok((s, o))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut acc = branches[0].0.zeroed();
                let weight = 1.0 / options.len() as f64;
                for (s, _) in &branches {
                    if s.total != acc.total {
                        return Err(Error::NoiseModel("choice options allocate different ancilla counts".into()));
                    }
                    acc.accumulate(s, weight);
                }
                ord = branches[0].1;
                state = acc;
            }
        }
    }
    runner.measure(&mut state, &t.measurements)
}

/// Exact outcome of one generator branch.
#[derive(Clone, Debug)]
pub struct BranchOutcome {
    pub weight: f64,
    pub probabilities: Vec<f64>,
    pub expected: Option<String>,
}

impl BranchOutcome {
    /// Probability of not returning the expected outcome.
    pub fn failure_probability(&self) -> Option<f64> {
        let m = self.expected.as_ref()?;
        let index = usize::from_str_radix(m, 2).ok()?;
        Some((1.0 - self.probabilities[index]).max(0.0))
    }
}

pub fn ensemble_outcomes(ens: &Ensemble, nm: &NoiseModel) -> Result<Vec<BranchOutcome>> {
    ens.branches
        .iter()
        .map(|b| {
            Ok(BranchOutcome { weight: b.weight, probabilities: template_probabilities(&b.template, nm)?, expected: b.expected.clone() })
        })
        .collect()
}

/// Output distribution averaged over every draw of a generator.
pub fn ensemble_distribution(ens: &Ensemble, nm: &NoiseModel) -> Result<Distribution> {
    let outcomes = ensemble_outcomes(ens, nm)?;
    let mut probs = vec![0.0; 1 << ens.qubits()];
    for o in &outcomes {
        probs.iter_mut().zip(&o.probabilities).for_each(|(a, p)| *a += o.weight * p);
    }
    finish(probs, ens.qubits())
}

/// Exact probability that a drawn trap does not return its expected outcome.
pub fn ensemble_failure_probability(ens: &Ensemble, nm: &NoiseModel) -> Result<f64> {
    let outcomes = ensemble_outcomes(ens, nm)?;
    outcomes
        .iter()
        .map(|o| o.failure_probability().map(|f| o.weight * f).ok_or_else(|| Error::InvalidArgument("ensemble has no expected outcomes".into())))
        .sum()
}

/// Draws `shots` bitstrings from dense probabilities.
pub fn sample_dense<R: Rng + ?Sized>(probs: &[f64], bits: usize, shots: usize, rng: &mut R) -> Result<Vec<String>> {
    let weights: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    Ok((0..shots).map(|_| crate::qalg::bitstring(dist.sample(rng), bits)).collect())
}

/// I.i.d. samples from the exact noisy distribution.
pub fn sample(c: &Circuit, nm: &NoiseModel, shots: usize, seed: u64) -> Result<Vec<String>> {
    let probs = execute_probabilities(c, nm)?;
    sample_dense(&probs, c.qubits, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::GateKind;
    use crate::noisesim::SiteNoise;
    use crate::qalg::gates;
    use crate::Unitary;

    fn pauli1(px: f64) -> Channel {
        Channel::pauli(&[1.0 - px, px, 0.0, 0.0], 1).unwrap()
    }

    #[test]
    fn bell_noiseless() {
        let c = Circuit::new(2).gate(GateKind::H, &[0]).gate(GateKind::Cnot, &[0, 1]);
        let r = execute_exact(&c, &NoiseModel::noiseless()).unwrap();
        assert!((r.exact.prob("00") - 0.5).abs() < 1e-14 && (r.exact.prob("11") - 0.5).abs() < 1e-14);
        assert_eq!(r.transcript.len(), 6);
    }

    #[test]
    fn flip_before_measurement() {
        let nm = NoiseModel::noiseless()
            .with_site(NoiseSite::new(SiteKind::Measurement, 0), SiteNoise::new(pauli1(0.3)))
            .unwrap();
        let r = execute_exact(&Circuit::new(1), &nm).unwrap();
        assert!((r.exact.prob("0") - 0.7).abs() < 1e-14);
        assert!(r.transcript.iter().any(|s| s.noisy && s.site.kind == SiteKind::Measurement));
    }

    #[test]
    fn ghz_with_depolarized_cnot_matches_superoperator_chain() {
        let c = Circuit::new(3).gate(GateKind::H, &[0]).gate(GateKind::Cnot, &[0, 1]).gate(GateKind::Cnot, &[1, 2]);
        let dep = Channel::depolarizing(0.1, 2).unwrap();
        let nm = NoiseModel::noiseless().with_site(NoiseSite::new(SiteKind::TwoQubitGate, 0), SiteNoise::new(dep.clone())).unwrap();
        let got = execute_probabilities(&c, &nm).unwrap();
        // independent chain: full-register superoperators applied to vec(ρ)
        let id2 = Unitary::identity(2);
        let h = gates::h::<f64>().kron(&id2).kron(&id2);
        let c01 = gates::cnot::<f64>().kron(&id2);
        let c12 = id2.kron(&gates::cnot());
        let noise = dep.tensor(&Channel::identity(2)).superoperator();
        let mut rho = crate::DensityMatrix::zero_state(3).matrix().clone();
        for step in [Channel::unitary(&h).superoperator(), Channel::unitary(&c01).superoperator(), noise, Channel::unitary(&c12).superoperator()] {
            rho = step.apply(&rho).unwrap();
        }
        for (i, p) in got.iter().enumerate() {
            assert!((rho[(i, i)].re - p).abs() < 1e-12);
        }
    }

    #[test]
    fn ancillas_are_traced_out() {
        // a CNOT onto a fresh ancilla dephases the site qubit completely
        let k = gates::cnot::<f64>().into_matrix();
        let nm = NoiseModel::noiseless()
            .with_site(NoiseSite::new(SiteKind::Prep, 0), SiteNoise::with_env(Channel::new(4, 4, vec![k]).unwrap(), 1))
            .unwrap();
        let mut c = Circuit::new(1);
        c.preps[0] = Prep::Plus;
        c.measurements[0] = Measurement::Basis(gates::h());
        let p = execute_probabilities(&c, &nm).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_calibrated() {
        let nm = NoiseModel::noiseless()
            .with_site(NoiseSite::new(SiteKind::Measurement, 0), SiteNoise::new(pauli1(0.3)))
            .unwrap();
        let c = Circuit::new(1);
        let a = sample(&c, &nm, 10_000, 5).unwrap();
        assert_eq!(a, sample(&c, &nm, 10_000, 5).unwrap());
        let ones = a.iter().filter(|s| *s == "1").count() as f64;
        let sigma = (10_000.0f64 * 0.3 * 0.7).sqrt();
        assert!((ones - 3000.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn slot_noise_ignores_gate_identity() {
        let nm = NoiseModel::noiseless()
            .with_default(SiteKind::SingleQubitSlot, SiteNoise::new(Channel::amplitude_damping(0.2, 1).unwrap()))
            .unwrap();
        let a = Circuit::new(1).gate(GateKind::X, &[0]);
        let r1 = execute_exact(&a, &nm).unwrap();
        let b = Circuit::new(1).gate(GateKind::Y, &[0]);
        let r2 = execute_exact(&b, &nm).unwrap();
        assert_eq!(r1.transcript, r2.transcript);
        assert!((r1.exact.prob("1") - 0.8).abs() < 1e-12);
    }

    #[test]
    fn unknown_site_rejected() {
        let nm = NoiseModel::noiseless()
            .with_site(NoiseSite::new(SiteKind::TwoQubitGate, 3), SiteNoise::new(Channel::identity(4)))
            .unwrap();
        assert!(execute_exact(&Circuit::new(2), &nm).is_err());
    }
}
