use crate::circuits::{Circuit, PlacedGate};
use crate::error::{Error, Result};
use crate::{Channel, CMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Where noise acts. Gate sites are numbered by ordinal among gates of the same arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteKind {
    /// After the preparation of a qubit; index is the qubit.
    Prep,
    /// After a two-qubit gate; index is its ordinal among two-qubit gates.
    TwoQubitGate,
    /// After a single-qubit gate or placeholder; index is its ordinal among single-qubit ops.
    SingleQubitSlot,
    /// Before the measurement of a qubit; index is the qubit.
    Measurement,
}

impl SiteKind {
    pub fn arity(self) -> usize {
        match self {
            SiteKind::TwoQubitGate => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NoiseSite {
    pub kind: SiteKind,
    pub index: usize,
}

impl NoiseSite {
    pub fn new(kind: SiteKind, index: usize) -> Self {
        Self { kind, index }
    }
}

impl fmt::Display for NoiseSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            SiteKind::Prep => "prep",
            SiteKind::TwoQubitGate => "two_qubit_gate",
            SiteKind::SingleQubitSlot => "single_qubit_slot",
            SiteKind::Measurement => "measurement",
        };
        write!(f, "{name} #{}", self.index)
    }
}

/// A channel on the site qubits followed by `env` fresh ancillas in `|0⟩`, which persist and are traced out.
#[derive(Clone, Debug)]
pub struct SiteNoise {
    pub channel: Arc<Channel>,
    pub env: usize,
}

impl SiteNoise {
    pub fn new(channel: Channel) -> Self {
        Self { channel: Arc::new(channel), env: 0 }
    }

    pub fn with_env(channel: Channel, env: usize) -> Self {
        Self { channel: Arc::new(channel), env }
    }

    fn check(&self, kind: SiteKind) -> Result<()> {
        let want = 1usize << (kind.arity() + self.env);
        if self.channel.dim_in() != want || self.channel.dim_out() != want {
            return Err(Error::NoiseModel(format!(
                "channel is {}→{} dimensional, site needs {want} ({} site qubit(s) plus {} ancilla(s))",
                self.channel.dim_in(),
                self.channel.dim_out(),
                kind.arity(),
                self.env
            )));
        }
        Ok(())
    }
}

/// Extra noise after single-qubit gates that depends on the gate applied.
pub type GateDependence = Arc<dyn Fn(&CMatrix) -> Channel + Send + Sync>;

/// Site-keyed noise registry. Single-qubit slots are keyed by position only, so
/// swapping the gate in a slot never changes the noise unless a gate dependence is attached.
#[derive(Clone, Default)]
pub struct NoiseModel {
    defaults: BTreeMap<SiteKind, SiteNoise>,
    sites: BTreeMap<NoiseSite, SiteNoise>,
    n3_groups: Vec<Vec<usize>>,
    n3: bool,
    dependence: Option<GateDependence>,
}

impl fmt::Debug for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NoiseModel")
            .field("defaults", &self.defaults.keys().collect::<Vec<_>>())
            .field("sites", &self.sites.keys().collect::<Vec<_>>())
            .field("n3_groups", &self.n3_groups)
            .field("n3", &self.n3)
            .field("gate_dependent", &self.dependence.is_some())
            .finish()
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn with_default(mut self, kind: SiteKind, noise: SiteNoise) -> Result<Self> {
        noise.check(kind)?;
        self.defaults.insert(kind, noise);
        Ok(self)
    }

    pub fn with_site(mut self, site: NoiseSite, noise: SiteNoise) -> Result<Self> {
        noise.check(site.kind).map_err(|e| Error::NoiseModel(format!("{site}: {e}")))?;
        self.sites.insert(site, noise);
        Ok(self)
    }

    /// Declares that sign-variant XY gates at a site share one channel.
    pub fn declare_n3(mut self) -> Self {
        self.n3 = true;
        self
    }

    /// Two-qubit ordinals required to carry the same channel object.
    pub fn with_n3_group(mut self, ordinals: Vec<usize>) -> Result<Self> {
        let channels: Vec<_> = ordinals
            .iter()
            .map(|&i| self.lookup(NoiseSite::new(SiteKind::TwoQubitGate, i)).map(|n| n.channel.clone()))
            .collect();
        if let Some(first) = channels.first() {
            let same = channels.iter().all(|c| match (c, first) {
                (Some(a), Some(b)) => Arc::ptr_eq(a, b),
                (None, None) => true,
                _ => false,
            });
            if !same {
                return Err(Error::NoiseModel(format!("n3 group {ordinals:?} does not share one channel")));
            }
        }
        self.n3_groups.push(ordinals);
        self.n3 = true;
        Ok(self)
    }

    pub fn with_gate_dependence(mut self, dependence: GateDependence) -> Self {
        self.dependence = Some(dependence);
        self
    }

    pub fn n3_declared(&self) -> bool {
        self.n3
    }

    pub fn n3_groups(&self) -> &[Vec<usize>] {
        &self.n3_groups
    }

    pub fn is_gate_dependent(&self) -> bool {
        self.dependence.is_some()
    }

    /// Noise at a site: an explicit entry, else the default for its kind.
    pub fn lookup(&self, site: NoiseSite) -> Option<&SiteNoise> {
        self.sites.get(&site).or_else(|| self.defaults.get(&site.kind))
    }

    /// Extra gate-dependent channel after a single-qubit gate.
    pub fn dependent_channel(&self, gate: &PlacedGate) -> Option<Channel> {
        self.dependence.as_ref().map(|f| f(gate.unitary().matrix()))
    }

    pub fn explicit_sites(&self) -> impl Iterator<Item = (&NoiseSite, &SiteNoise)> {
        self.sites.iter()
    }

    pub fn defaults(&self) -> impl Iterator<Item = (&SiteKind, &SiteNoise)> {
        self.defaults.iter()
    }

    /// Rejects explicit sites that do not exist in the circuit.
    pub fn validate_for(&self, c: &Circuit) -> Result<()> {
        let two = c.two_qubit_count();
        let single = c.ops.len() - two;
        for site in self.sites.keys() {
            let limit = match site.kind {
                SiteKind::Prep | SiteKind::Measurement => c.qubits,
                SiteKind::TwoQubitGate => two,
                SiteKind::SingleQubitSlot => single,
            };
            if site.index >= limit {
                return Err(Error::NoiseModel(format!("{site} does not exist in a circuit with {limit} such site(s)")));
            }
        }
        Ok(())
    }

    /// Every site of a circuit in execution order, with the qubits it touches.
    pub fn sites_of(c: &Circuit) -> Vec<(NoiseSite, Vec<usize>)> {
        let mut out: Vec<_> = (0..c.qubits).map(|q| (NoiseSite::new(SiteKind::Prep, q), vec![q])).collect();
        let (mut two, mut single) = (0, 0);
        for g in &c.ops {
            let site = if g.is_two_qubit() {
                two += 1;
                NoiseSite::new(SiteKind::TwoQubitGate, two - 1)
            } else {
                single += 1;
                NoiseSite::new(SiteKind::SingleQubitSlot, single - 1)
            };
            out.push((site, g.qubits.clone()));
        }
        out.extend((0..c.qubits).map(|q| (NoiseSite::new(SiteKind::Measurement, q), vec![q])));
        out
    }

    /// Same model with the channel at some sites replaced.
    pub fn replacing(&self, replacements: impl IntoIterator<Item = (NoiseSite, SiteNoise)>) -> Result<Self> {
        let mut out = self.clone();
        for (site, noise) in replacements {
            out = out.with_site(site, noise)?;
        }
        Ok(out)
    }

    /// Sites with noise among those of `c`.
    pub fn noisy_sites(&self, c: &Circuit) -> Vec<NoiseSite> {
        Self::sites_of(c).into_iter().map(|(s, _)| s).filter(|s| self.lookup(*s).is_some()).collect()
    }
}
