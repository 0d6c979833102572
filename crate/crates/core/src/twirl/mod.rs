//! Twirling: τ-decompositions and vesicle sets, the generalised twirl and mixture
//! extraction, XY-gate twirls, SPAM twirls and the decomposition search.

mod decomposition;
mod general;
mod search;
mod spam;
mod xy;

pub use decomposition::{is_clifford, push_pauli_through_clifford, pushed_pair, PushedPair, Role, TauDecomposition, VesicleSet};
pub use general::{check_lambda_summation, extract_mixture, generalized_twirl, ConjugationMixture, MIXTURE_TOL};
pub use search::{
    admissible_cliffords, search_tau_decomposition, search_tau_decomposition_with, two_qubit_cliffords, SearchEffort,
    SearchOutcome,
};
pub use spam::{frame_z, spam_twirl_layers};
pub use xy::{
    composition_contained, composition_escapes, composition_set, is_unflippable, sign_table, strong_xy_twirl_instruction,
    weak_lambda, xi_signs, xy_twirl_instruction, xy_twirl_instruction_for, CompositionEscape, NoiseAssumptions,
    UnflippableSet,
};


use crate::error::Result;
use crate::qalg::Pauli;
use crate::Unitary;

/// Single-qubit dressings around a two-qubit gate.
#[derive(Clone, Debug, PartialEq)]
pub struct TwirlInstruction {
    /// Applied after the gate, `(first qubit, second qubit)`.
    pub left: (Unitary, Unitary),
    /// Applied before the gate.
    pub right: (Unitary, Unitary),
    /// Gate executed in place of the original, if any.
    pub replaced_gate: Option<Unitary>,
}

impl TwirlInstruction {
    /// Error-free unitary of the dressed gate.
    pub fn dressed(&self, gate: &Unitary) -> Unitary {
        let core = self.replaced_gate.as_ref().unwrap_or(gate);
        let left = self.left.0.kron(&self.left.1);
        let right = self.right.0.kron(&self.right.1);
        &(&left * core) * &right
    }
}

/// τ twirl for the Γ element `(P_j, P_k)`.
pub fn tau_twirl_instruction(dec: &TauDecomposition, j: Pauli, k: Pauli) -> Result<TwirlInstruction> {
    let pair = pushed_pair(j, k, dec)?;
    Ok(TwirlInstruction {
        left: (dec.vesicles(Role::First).element(j).clone(), dec.vesicles(Role::Second).element(k).clone()),
        right: (pair.p, pair.q),
        replaced_gate: None,
    })
}

/// All 16 Γ elements of the τ twirl, index `4j + k`.
pub fn tau_twirl_instructions(dec: &TauDecomposition) -> Result<Vec<TwirlInstruction>> {
    Pauli::ALL
        .iter()
        .flat_map(|&j| Pauli::ALL.iter().map(move |&k| (j, k)))
        .map(|(j, k)| tau_twirl_instruction(dec, j, k))
        .collect()
}
