use crate::error::{Error, Result};
use crate::qalg::gates;
use crate::Unitary;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Initial single-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub enum Prep {
    Zero,
    One,
    Plus,
    /// `U|0⟩`.
    Unitary(Unitary),
}

impl Prep {
    /// Unitary taking `|0⟩` to this state.
    pub fn unitary(&self) -> Unitary {
        match self {
            Prep::Zero => Unitary::identity(2),
            Prep::One => gates::x(),
            Prep::Plus => gates::h(),
            Prep::Unitary(u) => u.clone(),
        }
    }
}

/// Measurement basis: the listed unitary is applied, then the qubit is read in Z.
#[derive(Clone, Debug, PartialEq)]
pub enum Measurement {
    Z,
    Basis(Unitary),
}

impl Measurement {
    pub fn unitary(&self) -> Unitary {
        match self {
            Measurement::Z => Unitary::identity(2),
            Measurement::Basis(u) => u.clone(),
        }
    }
}

/// Why a gate is in a circuit; everything except `Input` was added by a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    #[default]
    Input,
    Twirl,
    Delta,
    Vanishing,
    SpamTwirl,
    TrapLayer,
    BasisChange,
}

/// Gate kinds understood by the simulators and the file format.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Y,
    Z,
    /// Arbitrary single-qubit unitary.
    U1(Unitary),
    /// Placeholder occupying a single-qubit slot.
    Identity,
    Cnot,
    Cz,
    /// `exp(−i t (XX + YY))`.
    Xy { t: f64 },
    /// `exp(−i t (s_xx XX + s_yy YY))` with signs ±1.
    XySigned { t: f64, sxx: i8, syy: i8 },
    /// Arbitrary two-qubit unitary.
    U2(Unitary),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Xy { .. } | GateKind::XySigned { .. } | GateKind::U2(_) => 2,
            _ => 1,
        }
    }

    pub fn unitary(&self) -> Unitary {
        match self {
            GateKind::H => gates::h(),
            GateKind::S => gates::s(),
            GateKind::Sdg => gates::s().adjoint(),
            GateKind::T => gates::t(),
            GateKind::Tdg => gates::t().adjoint(),
            GateKind::X => gates::x(),
            GateKind::Y => gates::y(),
            GateKind::Z => gates::z(),
            GateKind::U1(u) | GateKind::U2(u) => u.clone(),
            GateKind::Identity => Unitary::identity(2),
            GateKind::Cnot => gates::cnot(),
            GateKind::Cz => gates::cz(),
            GateKind::Xy { t } => gates::xy(*t),
            GateKind::XySigned { t, sxx, syy } => gates::xy_signed(*t, f64::from(*sxx), f64::from(*syy)),
        }
    }

    /// XY angle ignoring the signs, if this is an XY-family gate.
    pub fn xy_angle(&self) -> Option<f64> {
        match self {
            GateKind::Xy { t } | GateKind::XySigned { t, .. } => Some(*t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::U1(_) => "u1",
            GateKind::Identity => "id",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
            GateKind::Xy { .. } => "xy",
            GateKind::XySigned { .. } => "xy_signed",
            GateKind::U2(_) => "u2",
        }
    }
}

/// A gate on specific qubits; for two-qubit gates `qubits[0]` is the first tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub tag: Provenance,
}

impl PlacedGate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self { kind, qubits, tag: Provenance::Input }
    }

    pub fn single(kind: GateKind, q: usize, tag: Provenance) -> Self {
        Self { kind, qubits: vec![q], tag }
    }

    pub fn two(kind: GateKind, a: usize, b: usize, tag: Provenance) -> Self {
        Self { kind, qubits: vec![a, b], tag }
    }

    pub fn unitary(&self) -> Unitary {
        self.kind.unitary()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }
}

/// Preparations, an ordered gate list and measurements on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub qubits: usize,
    pub preps: Vec<Prep>,
    pub ops: Vec<PlacedGate>,
    pub measurements: Vec<Measurement>,
}

impl Circuit {
    /// All-`|0⟩` preps and Z measurements.
    pub fn new(qubits: usize) -> Self {
        Self { qubits, preps: vec![Prep::Zero; qubits], ops: Vec::new(), measurements: vec![Measurement::Z; qubits] }
    }

    pub fn push(&mut self, gate: PlacedGate) -> &mut Self {
        self.ops.push(gate);
        self
    }

    pub fn gate(mut self, kind: GateKind, qubits: &[usize]) -> Self {
        self.ops.push(PlacedGate::new(kind, qubits.to_vec()));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.preps.len() != self.qubits {
            return Err(Error::Circuit(format!("preps: {} entries for {} qubits", self.preps.len(), self.qubits)));
        }
        if self.measurements.len() != self.qubits {
            return Err(Error::Circuit(format!(
                "measurements: {} entries for {} qubits",
                self.measurements.len(),
                self.qubits
            )));
        }
        for (i, g) in self.ops.iter().enumerate() {
            if g.qubits.len() != g.kind.arity() {
                return Err(Error::Circuit(format!(
                    "ops[{i}].qubits: gate {} needs {} qubit(s), got {}",
                    g.kind.name(),
                    g.kind.arity(),
                    g.qubits.len()
                )));
            }
            if let Some(q) = g.qubits.iter().find(|&&q| q >= self.qubits) {
                return Err(Error::Circuit(format!("ops[{i}].qubits: qubit {q} out of range for {} qubits", self.qubits)));
            }
            if g.qubits.len() == 2 && g.qubits[0] == g.qubits[1] {
                return Err(Error::Circuit(format!("ops[{i}].qubits: two-qubit gate on a repeated qubit")));
            }
            let want = 1usize << g.kind.arity();
            if g.unitary().dim() != want {
                return Err(Error::Circuit(format!("ops[{i}]: matrix dimension does not match gate arity")));
            }
        }
        Ok(())
    }

    pub fn two_qubit_count(&self) -> usize {
        self.ops.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Gate locations with two-qubit gate classes, used to compare traps and targets.
    pub fn skeleton(&self) -> Vec<SkeletonEntry> {
        self.ops
            .iter()
            .map(|g| {
                if g.is_two_qubit() {
                    SkeletonEntry::Two { qubits: (g.qubits[0], g.qubits[1]), class: TwoQubitClass::of(&g.kind) }
                } else {
                    SkeletonEntry::Single(g.qubits[0])
                }
            })
            .collect()
    }

    /// Greedy left-aligned layers of op indices.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut depth_of_qubit = vec![0usize; self.qubits];
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (i, g) in self.ops.iter().enumerate() {
            let layer = g.qubits.iter().map(|&q| depth_of_qubit[q]).max().unwrap_or(0);
            if layers.len() <= layer {
                layers.push(Vec::new());
            }
            layers[layer].push(i);
            for &q in &g.qubits {
                depth_of_qubit[q] = layer + 1;
            }
        }
        layers
    }

    pub fn depth(&self) -> usize {
        self.layers().len()
    }
}

/// Two-qubit gate identity relevant to noise keying: XY gates match on angle regardless of signs.
#[derive(Clone, Debug)]
pub enum TwoQubitClass {
    Xy(f64),
    Fixed(Unitary),
}

impl TwoQubitClass {
    pub fn of(kind: &GateKind) -> Self {
        match kind.xy_angle() {
            Some(t) => TwoQubitClass::Xy(t),
            None => TwoQubitClass::Fixed(kind.unitary()),
        }
    }
}

impl PartialEq for TwoQubitClass {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TwoQubitClass::Xy(a), TwoQubitClass::Xy(b)) => (a - b).abs() < 1e-12,
            (TwoQubitClass::Fixed(a), TwoQubitClass::Fixed(b)) => a.approx_eq_up_to_phase(b, 1e-9),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SkeletonEntry {
    Single(usize),
    Two { qubits: (usize, usize), class: TwoQubitClass },
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit on {} qubit(s), {} op(s)", self.qubits, self.ops.len())?;
        for g in &self.ops {
            writeln!(f, "  {:<10} {:?} [{:?}]", g.kind.name(), g.qubits, g.tag)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_names_fields() {
        let c = Circuit::new(2).gate(GateKind::Cnot, &[0, 2]);
        let msg = c.validate().unwrap_err().to_string();
        assert!(msg.contains("ops[0].qubits"), "{msg}");
        let c = Circuit::new(2).gate(GateKind::H, &[0, 1]);
        assert!(c.validate().is_err());
        let c = Circuit::new(2).gate(GateKind::Cz, &[1, 1]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn layers_left_align() {
        let c = Circuit::new(3)
            .gate(GateKind::H, &[0])
            .gate(GateKind::H, &[1])
            .gate(GateKind::Cnot, &[0, 1])
            .gate(GateKind::X, &[2]);
        assert_eq!(c.layers(), vec![vec![0, 1, 3], vec![2]]);
    }
}
