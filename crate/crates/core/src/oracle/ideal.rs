use super::dense_tvd;
use crate::accredit::{protocol_ensembles, AccreditationConfig};
use crate::circuits::{ideal_probabilities, Circuit};
use crate::error::{Error, Result};
use crate::noisesim::{ensemble_distribution, execute_probabilities, NoiseModel};
use crate::qalg::PauliString;
use crate::twirl::{extract_mixture, MIXTURE_TOL};
use crate::{Distribution, Unitary};

pub const ORACLE_MAX_QUBITS: usize = 10;

fn check_size(c: &Circuit) -> Result<()> {
    if c.qubits > ORACLE_MAX_QUBITS {
        return Err(Error::SizeLimit(format!("{} qubits exceeds the oracle limit of {ORACLE_MAX_QUBITS}", c.qubits)));
    }
    Ok(())
}

/// Exact noiseless output distribution.
pub fn ideal_distribution(c: &Circuit) -> Result<Distribution> {
    check_size(c)?;
    c.validate()?;
    Distribution::from_dense(c.qubits, &ideal_probabilities(c))
}

/// TVD between the ideal output of `c` and its noisy output under `nm`.
///
/// With `averaged` set, the noisy side is the target of that protocol averaged over every draw.
pub fn ideal_actual_vd(c: &Circuit, nm: &NoiseModel, averaged: Option<&AccreditationConfig>) -> Result<f64> {
    check_size(c)?;
    c.validate()?;
    let ideal = ideal_probabilities(c);
    let noisy = match averaged {
        None => execute_probabilities(c, nm)?,
        Some(cfg) => {
            let target = protocol_ensembles(c, cfg)?.target;
            let dist = ensemble_distribution(&target, nm)?;
            (0..1usize << c.qubits).map(|i| dist.prob(&crate::qalg::bitstring(i, c.qubits))).collect()
        }
    };
    Ok(dense_tvd(&ideal, &noisy))
}

/// Probability that at least one site of `c` applies a non-identity Pauli, for Pauli-stochastic noise.
pub fn probability_of_any_error(c: &Circuit, nm: &NoiseModel) -> Result<f64> {
    if nm.is_gate_dependent() {
        return Err(Error::InvalidArgument("gate-dependent noise has no per-site error probability".into()));
    }
    let mut none = 1.0;
    for (site, _) in NoiseModel::sites_of(c) {
        let Some(noise) = nm.lookup(site) else { continue };
        if noise.env > 0 {
            return Err(Error::NotStochastic(format!("{site} uses ancillas")));
        }
        let n = site.kind.arity();
        let basis: Vec<Unitary> = PauliString::all(n).map(|p| Unitary::new(p.matrix()).expect("Pauli is unitary")).collect();
        let mixture = extract_mixture(&noise.channel, &basis)?;
        if !mixture.is_stochastic(MIXTURE_TOL) {
            return Err(Error::NotStochastic(format!("{site} is not a Pauli mixture")));
        }
        let identity = PauliString::identity(n).index();
        none *= mixture.weights[identity].clamp(0.0, 1.0);
    }
    Ok(1.0 - none)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::random::random_circuit;
    use crate::circuits::GateKind;
    use crate::noisesim::{execute_exact, NoiseSite, SiteKind, SiteNoise};
    use crate::qalg::tvd;
    use crate::Channel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_distributions() {
        assert_eq!(ideal_distribution(&Circuit::new(1)).unwrap().prob("0"), 1.0);
        let bell = Circuit::new(2).gate(GateKind::H, &[0]).gate(GateKind::Cnot, &[0, 1]);
        let d = ideal_distribution(&bell).unwrap();
        assert!((d.prob("00") - 0.5).abs() < 1e-15 && (d.prob("11") - 0.5).abs() < 1e-15);
        assert!(matches!(ideal_distribution(&Circuit::new(11)), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn agrees_with_noiseless_simulator() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let c = random_circuit(4, 5, &[GateKind::Cnot, GateKind::Xy { t: 0.3 }], &mut rng);
            let a = ideal_distribution(&c).unwrap();
            let b = execute_exact(&c, &NoiseModel::noiseless()).unwrap().exact;
            assert!(tvd(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn flip_before_measurement() {
        let flip = SiteNoise::new(Channel::pauli(&[0.7, 0.3, 0.0, 0.0], 1).unwrap());
        let nm = NoiseModel::noiseless().with_site(NoiseSite::new(SiteKind::Measurement, 0), flip).unwrap();
        assert!((ideal_actual_vd(&Circuit::new(1), &nm, None).unwrap() - 0.3).abs() < 1e-14);
        assert_eq!(ideal_actual_vd(&Circuit::new(1), &NoiseModel::noiseless(), None).unwrap(), 0.0);
        assert!((probability_of_any_error(&Circuit::new(1), &nm).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn non_pauli_noise_has_no_error_probability() {
        let nm = NoiseModel::noiseless()
            .with_default(SiteKind::Prep, SiteNoise::new(Channel::amplitude_damping(0.1, 1).unwrap()))
            .unwrap();
        assert!(probability_of_any_error(&Circuit::new(1), &nm).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::circuits::random::random_circuit;
    use crate::circuits::GateKind;
    use crate::noisesim::SiteNoise;
    use crate::Channel;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pauli_noise<R: Rng>(qubits: usize, rng: &mut R) -> Channel {
        let n = 4usize.pow(qubits as u32);
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        w[0] += n as f64 * rng.gen_range(1.0..20.0);
        let total: f64 = w.iter().sum();
        Channel::pauli(&w.iter().map(|x| x / total).collect::<Vec<_>>(), qubits).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn nu_is_at_most_the_error_probability(seed in any::<u64>(), qubits in 1usize..=4, noisy in 1usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_circuit(qubits, 5, &[GateKind::Cnot, GateKind::Xy { t: 0.7 }], &mut rng);
            let mut sites = NoiseModel::sites_of(&c);
            sites.shuffle(&mut rng);
            let mut nm = NoiseModel::noiseless();
            for (site, _) in sites.into_iter().take(noisy) {
                nm = nm.with_site(site, SiteNoise::new(pauli_noise(site.kind.arity(), &mut rng))).unwrap();
            }
            let nu = ideal_actual_vd(&c, &nm, None).unwrap();
            prop_assert!(nu <= probability_of_any_error(&c, &nm).unwrap() + 1e-12);
        }
    }
}
