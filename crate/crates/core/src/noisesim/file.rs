//! JSON noise files.
//!
//! ```json
//! {
//!   "defaults": {
//!     "two_qubit_gate": {"channel": {"depolarizing": 0.02}},
//!     "measurement": {"channel": {"pauli": [0.98, 0.02, 0.0, 0.0]}}
//!   },
//!   "sites": [
//!     {"kind": "two_qubit_gate", "index": 1, "channel": {"amplitude_damping": 0.05}},
//!     {"kind": "prep", "index": 0, "env": 1, "channel": {"kraus": [[[[1, 0], [0, 0], [0, 0], [0, 0]], ...]]}}
//!   ],
//!   "n3": true,
//!   "n3_groups": [{"ordinals": [0, 2], "channel": {"depolarizing": 0.01}}]
//! }
//! ```
//!
//! Channel presets act on the site qubits: `depolarizing`, `dephasing`, `amplitude_damping` (a number),
//! `pauli` (probabilities indexed `I, X, Y, Z` per qubit, first qubit most significant), `kraus`
//! (matrices in the circuit-file format, acting on site qubits then ancillas) and `"identity"`.
//! Sites with `env > 0` need `kraus`.

use super::model::{NoiseModel, NoiseSite, SiteKind, SiteNoise};
use crate::circuits::{json_error, MatrixRepr};
use crate::error::{Error, Result};
use crate::Channel;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelSpec {
    Identity,
    Depolarizing(f64),
    Dephasing(f64),
    AmplitudeDamping(f64),
    Pauli(Vec<f64>),
    Kraus(Vec<MatrixRepr>),
}

impl ChannelSpec {
    /// Builds the channel on `qubits` site qubits plus `env` ancillas.
    pub fn build(&self, qubits: usize, env: usize) -> Result<Channel> {
        if env > 0 && !matches!(self, ChannelSpec::Kraus(_) | ChannelSpec::Identity) {
            return Err(Error::NoiseModel("sites with ancillas need an explicit Kraus list".into()));
        }
        let n = qubits + env;
        match self {
            ChannelSpec::Identity => Ok(Channel::identity(1 << n)),
            ChannelSpec::Depolarizing(p) => probability(*p).and_then(|p| Channel::depolarizing(p, n)),
            ChannelSpec::Dephasing(p) => probability(*p).and_then(|p| Channel::dephasing(p, n)),
            ChannelSpec::AmplitudeDamping(g) => Channel::amplitude_damping(*g, n),
            ChannelSpec::Pauli(probs) => Channel::pauli(probs, n),
            ChannelSpec::Kraus(ms) => {
                let kraus = ms
                    .iter()
                    .map(|m| {
                        let d = m.0.len();
                        if m.0.iter().any(|row| row.len() != d) {
                            return Err(Error::NoiseModel("Kraus operators must be square".into()));
                        }
                        Ok(crate::CMatrix::from_fn(d, d, |r, c| crate::Complex::new(m.0[r][c][0], m.0[r][c][1])))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Channel::new(1 << n, 1 << n, kraus)
            }
        }
    }
}

fn probability(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::NoiseModel(format!("probability {p} outside [0, 1]")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DefaultSpec {
    channel: ChannelSpec,
    #[serde(default)]
    env: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteSpec {
    kind: SiteKind,
    index: usize,
    channel: ChannelSpec,
    #[serde(default)]
    env: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    ordinals: Vec<usize>,
    channel: ChannelSpec,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    #[serde(default)]
    defaults: BTreeMap<SiteKind, DefaultSpec>,
    #[serde(default)]
    sites: Vec<SiteSpec>,
    #[serde(default)]
    n3: bool,
    #[serde(default)]
    n3_groups: Vec<GroupSpec>,
}

impl NoiseModel {
    pub fn from_json(text: &str) -> Result<NoiseModel> {
        let file: NoiseFile = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        let mut model = NoiseModel::noiseless();
        for (kind, spec) in &file.defaults {
            let path = format!("defaults.{}", serde_json::to_string(kind).unwrap_or_default().trim_matches('"'));
            let channel = spec.channel.build(kind.arity(), spec.env).map_err(|e| Error::NoiseModel(format!("{path}: {e}")))?;
            model = model
                .with_default(*kind, SiteNoise::with_env(channel, spec.env))
                .map_err(|e| Error::NoiseModel(format!("{path}: {e}")))?;
        }
        for (i, spec) in file.sites.iter().enumerate() {
            let site = NoiseSite::new(spec.kind, spec.index);
            let label = format!("sites[{i}] ({site})");
            let channel = spec.channel.build(spec.kind.arity(), spec.env).map_err(|e| Error::NoiseModel(format!("{label}: {e}")))?;
            model = model
                .with_site(site, SiteNoise::with_env(channel, spec.env))
                .map_err(|e| Error::NoiseModel(format!("{label}: {e}")))?;
        }
        for (i, group) in file.n3_groups.iter().enumerate() {
            let label = format!("n3_groups[{i}]");
            let channel = Arc::new(group.channel.build(2, 0).map_err(|e| Error::NoiseModel(format!("{label}: {e}")))?);
            for &ordinal in &group.ordinals {
                let noise = SiteNoise { channel: channel.clone(), env: 0 };
                model = model.with_site(NoiseSite::new(SiteKind::TwoQubitGate, ordinal), noise)?;
            }
            model = model.with_n3_group(group.ordinals.clone()).map_err(|e| Error::NoiseModel(format!("{label}: {e}")))?;
        }
        if file.n3 {
            model = model.declare_n3();
        }
        Ok(model)
    }
}
