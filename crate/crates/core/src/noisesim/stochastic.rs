use super::engine::ensemble_distribution;
use super::model::{NoiseModel, NoiseSite, SiteKind, SiteNoise};
use crate::circuits::Ensemble;
use crate::error::{Error, Result};
use crate::qalg::{Pauli, PauliString};
use crate::twirl::{extract_mixture, generalized_twirl, ConjugationMixture, TauDecomposition, MIXTURE_TOL};
use crate::{Distribution, Unitary};

/// The twirl applied at every two-qubit site of a generated circuit.
#[derive(Clone, Debug)]
pub enum TwirlFamily {
    Tau(TauDecomposition),
    XyWeak,
    XyStrong,
}

fn paulis() -> Vec<Unitary> {
    PauliString::all(2).map(|p| Unitary::new(p.matrix()).expect("Pauli strings are unitary")).collect()
}

impl TwirlFamily {
    /// Conjugations averaged over at each site.
    pub fn twirl_set(&self) -> Vec<Unitary> {
        match self {
            TwirlFamily::Tau(dec) => dec.gamma(),
            TwirlFamily::XyWeak => Pauli::ALL.iter().map(|&p| Unitary::from_pauli(p).kron(&Unitary::from_pauli(p))).collect(),
            TwirlFamily::XyStrong => paulis(),
        }
    }

    /// Unitaries the twirled noise is a mixture of.
    pub fn mixture_basis(&self) -> Vec<Unitary> {
        match self {
            TwirlFamily::Tau(dec) => dec.gamma(),
            TwirlFamily::XyWeak | TwirlFamily::XyStrong => paulis(),
        }
    }
}

/// Averaged execution next to the execution with every two-qubit channel replaced by its twirled mixture.
#[derive(Clone, Debug)]
pub struct StochasticEquivalent {
    pub averaged: Distribution,
    pub stochastic: Distribution,
    pub mixtures: Vec<(NoiseSite, ConjugationMixture)>,
    pub model: NoiseModel,
}

/// Twirls each two-qubit site channel, checks it is a stochastic mixture and re-executes with the mixtures.
/// Single-qubit slots must be noiseless, since the dressing gates sit in those slots.
pub fn stochastic_pauli_equivalent(ens: &Ensemble, nm: &NoiseModel, family: &TwirlFamily) -> Result<StochasticEquivalent> {
    if nm.is_gate_dependent() {
        return Err(Error::NoiseModel("gate-dependent noise is outside the twirl assumptions".into()));
    }
    let probe = ens.branches[0].template.first();
    let sites = NoiseModel::sites_of(&probe);
    if let Some((site, _)) = sites.iter().find(|(s, _)| s.kind == SiteKind::SingleQubitSlot && nm.lookup(*s).is_some()) {
        return Err(Error::NoiseModel(format!("{site}: single-qubit slot noise is not supported here")));
    }
    let twirl = family.twirl_set();
    let basis = family.mixture_basis();
    let mut mixtures = Vec::new();
    let mut replacements = Vec::new();
    for (site, _) in sites.iter().filter(|(s, _)| s.kind == SiteKind::TwoQubitGate) {
        let Some(noise) = nm.lookup(*site) else { continue };
        if noise.env > 0 {
            return Err(Error::NoiseModel(format!("{site}: ancilla noise has no system-only mixture")));
        }
        let mixture = extract_mixture(&generalized_twirl(&noise.channel, &twirl)?, &basis)?;
        if !mixture.is_stochastic(MIXTURE_TOL) {
            return Err(Error::NotStochastic(format!(
                "{site}: residual {:.3e}, smallest weight {:.3e}",
                mixture.residual,
                mixture.min_weight()
            )));
        }
        replacements.push((*site, SiteNoise::new(mixture.to_channel(&basis)?)));
        mixtures.push((*site, mixture));
    }
    let model = nm.replacing(replacements)?;
    Ok(StochasticEquivalent {
        averaged: ensemble_distribution(ens, nm)?,
        stochastic: ensemble_distribution(ens, &model)?,
        mixtures,
        model,
    })
}
