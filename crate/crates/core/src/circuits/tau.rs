use super::ir::{Circuit, GateKind, Measurement, PlacedGate, Prep, Provenance};
use super::standard::standard_form;
use super::statevector::ideal_probabilities;
use super::template::{Branch, CircuitTemplate, Ensemble, GateBound};
use crate::error::{Error, Result};
use crate::qalg::{bitstring, gates};
use crate::twirl::{frame_z, tau_twirl_instructions, Role, TauDecomposition, TwirlInstruction};
use crate::Unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Size constants of the τ generators, counted against the original input.
pub const TAU_BOUND: GateBound = GateBound { per_gate: 7, per_qubit: 10 };

/// Error-free outcome probability below which a trap is rejected as non-deterministic.
const DETERMINISM_TOL: f64 = 1e-9;

/// Entrywise agreement required between an input gate and the decomposed gate.
const GATE_MATCH_TOL: f64 = 1e-6;

/// Per-qubit role sequence of the two-qubit gates, in circuit order.
struct RoleMap {
    /// For each op index, the next role on each of its qubits (if any).
    next: Vec<Vec<Option<Role>>>,
    first: Vec<Option<Role>>,
    last: Vec<Option<Role>>,
}

impl RoleMap {
    fn new(c: &Circuit) -> Self {
        let mut next = vec![Vec::new(); c.ops.len()];
        let mut first = vec![None; c.qubits];
        let mut last = vec![None; c.qubits];
        let mut upcoming: Vec<Option<Role>> = vec![None; c.qubits];
        for (i, g) in c.ops.iter().enumerate().rev() {
            if !g.is_two_qubit() {
                continue;
            }
            next[i] = g.qubits.iter().map(|&q| upcoming[q]).collect();
            for (&q, role) in g.qubits.iter().zip([Role::First, Role::Second]) {
                upcoming[q] = Some(role);
                if last[q].is_none() {
                    last[q] = Some(role);
                }
            }
        }
        first.copy_from_slice(&upcoming);
        Self { next, first, last }
    }
}

fn u1(u: Unitary, q: usize, tag: Provenance) -> PlacedGate {
    PlacedGate::single(GateKind::U1(u), q, tag)
}

fn identity(q: usize, tag: Provenance) -> PlacedGate {
    PlacedGate::single(GateKind::Identity, q, tag)
}

fn check_gates(c: &Circuit, dec: &TauDecomposition) -> Result<()> {
    c.validate()?;
    for (index, g) in c.ops.iter().enumerate().filter(|(_, g)| g.is_two_qubit()) {
        if !dec.matches_within(&g.unitary(), GATE_MATCH_TOL) {
            return Err(Error::ForeignGate {
                index,
                detail: format!("{} does not match the τ-decomposed gate", g.kind.name()),
            });
        }
    }
    Ok(())
}

fn twirled_gate(g: &PlacedGate, ins: &TwirlInstruction) -> Vec<PlacedGate> {
    let (a, b) = (g.qubits[0], g.qubits[1]);
    vec![
        u1(ins.right.0.clone(), a, Provenance::Twirl),
        u1(ins.right.1.clone(), b, Provenance::Twirl),
        g.clone(),
        u1(ins.left.0.clone(), a, Provenance::Twirl),
        u1(ins.left.1.clone(), b, Provenance::Twirl),
    ]
}

/// Global coins of one branch.
#[derive(Clone, Copy)]
struct Coins {
    trap: bool,
    hadamard: bool,
    frame_z: bool,
}

fn build_template(s: &Circuit, dec: &TauDecomposition, coins: Coins) -> Result<CircuitTemplate> {
    let tau1 = dec.tau1();
    let delta = dec.delta();
    let roles = RoleMap::new(s);
    let instructions = tau_twirl_instructions(dec)?;
    let frame_h = &(&tau1.adjoint() * &gates::h()) * tau1;
    let h_layer = |q| if coins.trap && coins.hadamard { u1(frame_h.clone(), q, Provenance::TrapLayer) } else { identity(q, Provenance::TrapLayer) };
    let z_layer = |q| if coins.frame_z { u1(frame_z(tau1), q, Provenance::SpamTwirl) } else { identity(q, Provenance::SpamTwirl) };
    // Δ moves a qubit from the τ₂ frame to the τ₁ frame, Δ† the other way
    let seam = |q, from: Role, to: Role| -> Option<PlacedGate> {
        if from == to {
            return None;
        }
        Some(match (coins.trap, to) {
            (false, _) => identity(q, Provenance::Delta),
            (true, Role::First) => u1(delta.clone(), q, Provenance::Delta),
            (true, Role::Second) => u1(delta.adjoint(), q, Provenance::Delta),
        })
    };

    let mut t = CircuitTemplate::new(s.qubits);
    t.preps = vec![Prep::Unitary(tau1.adjoint()); s.qubits];
    t.measurements = vec![Measurement::Basis(tau1.clone()); s.qubits];
    for q in 0..s.qubits {
        t.fixed(h_layer(q));
        t.fixed(z_layer(q));
        t.fixed(if coins.trap { identity(q, Provenance::BasisChange) } else { u1(tau1.clone(), q, Provenance::BasisChange) });
        if let Some(g) = roles.first[q].and_then(|r| seam(q, Role::First, r)) {
            t.fixed(g);
        }
    }
    for (i, g) in s.ops.iter().enumerate() {
        if !g.is_two_qubit() {
            t.fixed(if coins.trap { identity(g.qubits[0], Provenance::Input) } else { g.clone() });
            continue;
        }
        t.choice(instructions.iter().map(|ins| twirled_gate(g, ins)).collect());
        for ((&q, role), next) in g.qubits.iter().zip([Role::First, Role::Second]).zip(&roles.next[i]) {
            if let Some(d) = next.and_then(|n| seam(q, role, n)) {
                t.fixed(d);
            }
        }
    }
    for q in 0..s.qubits {
        if let Some(g) = roles.last[q].and_then(|r| seam(q, r, Role::First)) {
            t.fixed(g);
        }
        t.fixed(if coins.trap { identity(q, Provenance::BasisChange) } else { u1(tau1.adjoint(), q, Provenance::BasisChange) });
        t.fixed(z_layer(q));
        t.fixed(h_layer(q));
    }
    Ok(t)
}

/// Deterministic error-free outcome of a circuit.
pub(crate) fn deterministic_outcome(c: &Circuit) -> Result<String> {
    let probs = ideal_probabilities(c);
    let (index, p) = probs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Internal("empty register".into()))?;
    if *p < 1.0 - DETERMINISM_TOL {
        return Err(Error::Internal(format!("trap output is not deterministic (max probability {p})")));
    }
    Ok(bitstring(index, c.qubits))
}

/// All target circuits for `c`, one branch per SPAM coin.
pub fn tau_target_ensemble(c: &Circuit, dec: &TauDecomposition) -> Result<Ensemble> {
    check_gates(c, dec)?;
    let s = standard_form(c);
    let branches = [false, true]
        .into_iter()
        .map(|z| {
            Ok(Branch {
                weight: 0.5,
                template: build_template(&s, dec, Coins { trap: false, hadamard: false, frame_z: z })?,
                expected: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble { branches, bound: TAU_BOUND })
}

/// All trap circuits for `c`, one branch per (Hadamard, SPAM) coin pair.
pub fn tau_trap_ensemble(c: &Circuit, dec: &TauDecomposition) -> Result<Ensemble> {
    check_gates(c, dec)?;
    let s = standard_form(c);
    let mut branches = Vec::with_capacity(4);
    for hadamard in [false, true] {
        for z in [false, true] {
            let template = build_template(&s, dec, Coins { trap: true, hadamard, frame_z: z })?;
            let expected = deterministic_outcome(&template.first())?;
            branches.push(Branch { weight: 0.25, template, expected: Some(expected) });
        }
    }
    Ok(Ensemble { branches, bound: TAU_BOUND })
}

pub fn build_tau_target(c: &Circuit, dec: &TauDecomposition, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(tau_target_ensemble(c, dec)?.sample(&mut rng).circuit)
}

/// A trap circuit and its error-free outcome `m`.
pub fn build_tau_trap(c: &Circuit, dec: &TauDecomposition, seed: u64) -> Result<(Circuit, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = tau_trap_ensemble(c, dec)?.sample(&mut rng);
    let m = g.expected.ok_or_else(|| Error::Internal("trap without expected outcome".into()))?;
    Ok((g.circuit, m))
}
