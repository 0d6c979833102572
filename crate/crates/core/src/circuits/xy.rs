use super::ir::{Circuit, GateKind, PlacedGate, Provenance};
use super::standard::standard_form;
use super::tau::deterministic_outcome;
use super::template::{Branch, CircuitTemplate, Ensemble, GateBound};
use crate::error::{Error, Result};
use crate::qalg::{gates, Pauli, PauliString};
use crate::twirl::xi_signs;
use crate::Unitary;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Size constants of the XY generators, counted against the original input.
pub const XY_BOUND: GateBound = GateBound { per_gate: 8, per_qubit: 4 };

/// Which XY twirl dresses the half-angle gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XyTwirl {
    /// `P⊗P` dressings, valid for unflippable-supported noise.
    Weak,
    /// Arbitrary Pauli pairs with sign-adjusted gates; needs identical noise on sign variants.
    Strong,
}

/// Two half-angle XY gates dressed so that the block is `exp(−iHt)` for `j = 0` and `I` for `j = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingBlock {
    pub j: bool,
    pub t: f64,
    pub p1: PauliString,
    pub p2: PauliString,
    pub qubits: (usize, usize),
    pub twirl: XyTwirl,
}

fn pauli_u(p: Pauli) -> Unitary {
    Unitary::from_pauli(p)
}

impl VanishingBlock {
    /// Eight gates: two pre-dressings, a half gate, two middle dressings, a half gate, two post-dressings.
    pub fn gates(&self) -> Vec<PlacedGate> {
        let (a, b) = self.qubits;
        let zj = if self.j { gates::z() } else { Unitary::identity(2) };
        let (p1a, p1b) = (pauli_u(self.p1.letters()[0]), pauli_u(self.p1.letters()[1]));
        let (p2a, p2b) = (pauli_u(self.p2.letters()[0]), pauli_u(self.p2.letters()[1]));
        let half = |p: &PauliString| match self.twirl {
            XyTwirl::Weak => GateKind::Xy { t: self.t / 2.0 },
            XyTwirl::Strong => {
                let (sxx, syy) = xi_signs(p).expect("two-qubit string");
                GateKind::XySigned { t: self.t / 2.0, sxx: sxx as i8, syy: syy as i8 }
            }
        };
        let v = |u: Unitary, q| PlacedGate::single(GateKind::U1(u), q, Provenance::Vanishing);
        vec![
            v(&p1a * &zj, a),
            v(p1b.clone(), b),
            PlacedGate::two(half(&self.p1), a, b, Provenance::Input),
            v(&(&p2a * &zj) * &p1a, a),
            v(&p2b * &p1b, b),
            PlacedGate::two(half(&self.p2), a, b, Provenance::Input),
            v(p2a, a),
            v(p2b, b),
        ]
    }

    /// Error-free two-qubit unitary of the block, first qubit as the first factor.
    pub fn unitary(&self) -> Unitary {
        let (a, _) = self.qubits;
        self.gates().iter().fold(Unitary::identity(4), |acc, g| {
            let u = g.unitary();
            let full = if g.is_two_qubit() {
                u
            } else if g.qubits[0] == a {
                u.kron(&Unitary::identity(2))
            } else {
                Unitary::identity(2).kron(&u)
            };
            &full * &acc
        })
    }
}

/// The Pauli dressings available to each half gate.
fn dressings(twirl: XyTwirl) -> Vec<PauliString> {
    match twirl {
        XyTwirl::Weak => Pauli::ALL.iter().map(|&p| PauliString::pair(p, p)).collect(),
        XyTwirl::Strong => PauliString::all(2).collect(),
    }
}

/// Every block for the given `j`, `t` and qubits, in dressing order.
pub fn vanishing_block_options(j: bool, t: f64, qubits: (usize, usize), twirl: XyTwirl) -> Vec<VanishingBlock> {
    let ds = dressings(twirl);
    ds.iter()
        .flat_map(|p1| ds.iter().map(move |p2| (p1.clone(), p2.clone())))
        .map(|(p1, p2)| VanishingBlock { j, t, p1, p2, qubits, twirl })
        .collect()
}

/// A uniformly drawn block on qubits `(0, 1)`.
pub fn build_vanishing_block(j: bool, t: f64, seed: u64, strong: bool) -> VanishingBlock {
    let twirl = if strong { XyTwirl::Strong } else { XyTwirl::Weak };
    let mut options = vanishing_block_options(j, t, (0, 1), twirl);
    let pick = ChaCha8Rng::seed_from_u64(seed).gen_range(0..options.len());
    options.swap_remove(pick)
}

fn check_xy_gates(c: &Circuit) -> Result<()> {
    c.validate()?;
    for (index, g) in c.ops.iter().enumerate().filter(|(_, g)| g.is_two_qubit()) {
        if !matches!(g.kind, GateKind::Xy { .. } | GateKind::XySigned { sxx: 1, syy: 1, .. }) {
            return Err(Error::ForeignGate { index, detail: format!("{} is not an XY-interaction gate", g.kind.name()) });
        }
    }
    Ok(())
}

fn u1(u: Unitary, q: usize) -> PlacedGate {
    PlacedGate::single(GateKind::U1(u), q, Provenance::TrapLayer)
}

fn build(c: &Circuit, twirl: XyTwirl, trap: Option<bool>) -> Result<CircuitTemplate> {
    check_xy_gates(c)?;
    let s = standard_form(c);
    let mut t = CircuitTemplate::new(s.qubits);
    let (h, z, id) = (gates::h(), gates::z(), Unitary::identity(2));
    for q in 0..s.qubits {
        match trap {
            None => t.fixed(PlacedGate::single(GateKind::Identity, q, Provenance::TrapLayer)),
            Some(true) => t.choice(vec![vec![u1(h.clone(), q)], vec![u1(&h * &z, q)]]),
            Some(false) => t.choice(vec![vec![u1(id.clone(), q)], vec![u1(z.clone(), q)]]),
        }
    }
    for g in &s.ops {
        if !g.is_two_qubit() {
            t.fixed(if trap.is_some() { PlacedGate::single(GateKind::Identity, g.qubits[0], Provenance::Input) } else { g.clone() });
            continue;
        }
        let angle = g.kind.xy_angle().ok_or_else(|| Error::Internal("unchecked two-qubit gate".into()))?;
        let options = vanishing_block_options(trap.is_some(), angle, (g.qubits[0], g.qubits[1]), twirl);
        t.choice(options.iter().map(VanishingBlock::gates).collect());
    }
    for q in 0..s.qubits {
        match trap {
            None => t.fixed(PlacedGate::single(GateKind::Identity, q, Provenance::TrapLayer)),
            Some(true) => t.choice(vec![vec![u1(h.clone(), q)], vec![u1(&z * &h, q)]]),
            Some(false) => t.choice(vec![vec![u1(id.clone(), q)], vec![u1(z.clone(), q)]]),
        }
    }
    Ok(t)
}

pub fn xy_target_ensemble(c: &Circuit, twirl: XyTwirl) -> Result<Ensemble> {
    let template = build(c, twirl, None)?;
    Ok(Ensemble { branches: vec![Branch { weight: 1.0, template, expected: None }], bound: XY_BOUND })
}

pub fn xy_trap_ensemble(c: &Circuit, twirl: XyTwirl) -> Result<Ensemble> {
    let branches = [false, true]
        .into_iter()
        .map(|hadamard| {
            let template = build(c, twirl, Some(hadamard))?;
            let expected = deterministic_outcome(&template.first())?;
            Ok(Branch { weight: 0.5, template, expected: Some(expected) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble { branches, bound: XY_BOUND })
}

pub fn build_xy_target(c: &Circuit, twirl: XyTwirl, seed: u64) -> Result<Circuit> {
    Ok(xy_target_ensemble(c, twirl)?.sample(&mut ChaCha8Rng::seed_from_u64(seed)).circuit)
}

pub fn build_xy_trap(c: &Circuit, twirl: XyTwirl, seed: u64) -> Result<(Circuit, String)> {
    let g = xy_trap_ensemble(c, twirl)?.sample(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok((g.circuit, g.expected.unwrap_or_default()))
}
