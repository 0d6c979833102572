use super::ir::{Circuit, GateKind, PlacedGate};
use crate::qalg::random::haar_unitary;
use rand::seq::SliceRandom;
use rand::Rng;

/// Layered random circuit: Haar single-qubit gates, then random disjoint pairs
/// carrying gates drawn from `two_qubit_kinds`.
pub fn random_circuit<R: Rng + ?Sized>(qubits: usize, depth: usize, two_qubit_kinds: &[GateKind], rng: &mut R) -> Circuit {
    let mut c = Circuit::new(qubits);
    let mut order: Vec<usize> = (0..qubits).collect();
    for _ in 0..depth {
        for q in 0..qubits {
            if rng.gen_bool(0.7) {
                c.ops.push(PlacedGate::new(GateKind::U1(haar_unitary::<f64, _>(2, rng)), vec![q]));
            }
        }
        if two_qubit_kinds.is_empty() {
            continue;
        }
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            if rng.gen_bool(0.6) {
                let kind = two_qubit_kinds.choose(rng).expect("non-empty").clone();
                c.ops.push(PlacedGate::new(kind, vec![pair[0], pair[1]]));
            }
        }
    }
    c
}
