use super::ir::{Circuit, GateKind, Measurement, PlacedGate, Prep, Provenance};

/// Rewrites preparations as `|0⟩` plus a gate and measurements as a gate plus a Z readout.
pub fn standard_form(c: &Circuit) -> Circuit {
    let mut ops = Vec::with_capacity(c.ops.len() + 2 * c.qubits);
    for (q, p) in c.preps.iter().enumerate() {
        let kind = match p {
            Prep::Zero => continue,
            Prep::One => GateKind::X,
            Prep::Plus => GateKind::H,
            Prep::Unitary(u) => GateKind::U1(u.clone()),
        };
        ops.push(PlacedGate::single(kind, q, Provenance::Input));
    }
    ops.extend(c.ops.iter().cloned());
    for (q, m) in c.measurements.iter().enumerate() {
        if let Measurement::Basis(u) = m {
            ops.push(PlacedGate::single(GateKind::U1(u.clone()), q, Provenance::Input));
        }
    }
    Circuit { qubits: c.qubits, preps: vec![Prep::Zero; c.qubits], ops, measurements: vec![Measurement::Z; c.qubits] }
}

pub fn is_standard_form(c: &Circuit) -> bool {
    c.preps.iter().all(|p| *p == Prep::Zero) && c.measurements.iter().all(|m| *m == Measurement::Z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::random::random_circuit;
    use crate::circuits::statevector::ideal_probabilities;
    use crate::qalg::gates;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_circuit_unchanged() {
        let c = Circuit::new(2).gate(GateKind::H, &[0]).gate(GateKind::Cnot, &[0, 1]);
        assert_eq!(standard_form(&c), c);
    }

    #[test]
    fn plus_becomes_h() {
        let mut c = Circuit::new(1);
        c.preps[0] = Prep::Plus;
        let s = standard_form(&c);
        assert_eq!(s.preps[0], Prep::Zero);
        assert_eq!(s.ops[0].kind, GateKind::H);
    }

    #[test]
    fn distributions_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let mut c = random_circuit(3, 6, &[GateKind::Cnot, GateKind::Xy { t: 0.3 }], &mut rng);
            c.preps[1] = Prep::Plus;
            c.preps[2] = Prep::Unitary(gates::euler(0.2, 0.9, 1.3));
            c.measurements[0] = Measurement::Basis(gates::h());
            let s = standard_form(&c);
            assert!(is_standard_form(&s));
            for (a, b) in ideal_probabilities(&c).iter().zip(ideal_probabilities(&s)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
