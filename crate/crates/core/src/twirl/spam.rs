use crate::qalg::gates;
use crate::Unitary;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `τ†Zτ`.
pub fn frame_z(tau: &Unitary) -> Unitary {
    &(&tau.adjoint() * &gates::z()) * tau
}

/// Independent fair coins for a preparation layer and a measurement layer, each `τ†Zτ` or identity.
pub fn spam_twirl_layers(tau: &Unitary, seed: u64) -> (Unitary, Unitary) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layer = || if rng.gen_bool(0.5) { frame_z(tau) } else { Unitary::identity(2) };
    let prep = layer();
    let meas = layer();
    (prep, meas)
}
