use super::ir::{Circuit, Measurement, PlacedGate, Prep};
use rand::Rng;

/// A fixed gate or a uniform choice among gate sequences with a common skeleton.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Fixed(PlacedGate),
    Choice(Vec<Vec<PlacedGate>>),
}

impl Segment {
    pub fn option_count(&self) -> usize {
        match self {
            Segment::Fixed(_) => 1,
            Segment::Choice(options) => options.len(),
        }
    }
}

/// A circuit with independent uniform choices left open.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitTemplate {
    pub qubits: usize,
    pub preps: Vec<Prep>,
    pub segments: Vec<Segment>,
    pub measurements: Vec<Measurement>,
}

impl CircuitTemplate {
    pub fn new(qubits: usize) -> Self {
        Self { qubits, preps: vec![Prep::Zero; qubits], segments: Vec::new(), measurements: vec![Measurement::Z; qubits] }
    }

    pub fn fixed(&mut self, gate: PlacedGate) {
        self.segments.push(Segment::Fixed(gate));
    }

    pub fn choice(&mut self, options: Vec<Vec<PlacedGate>>) {
        match options.len() {
            0 => {}
            1 => self.segments.extend(options.into_iter().flatten().map(Segment::Fixed)),
            _ => self.segments.push(Segment::Choice(options)),
        }
    }

    /// Number of distinct draws, saturating.
    pub fn draw_count(&self) -> u128 {
        self.segments.iter().fold(1u128, |acc, s| acc.saturating_mul(s.option_count() as u128))
    }

    /// Circuit for explicit option indices, one per segment (ignored for fixed segments).
    pub fn instantiate(&self, picks: &[usize]) -> Circuit {
        let mut ops = Vec::new();
        for (seg, &pick) in self.segments.iter().zip(picks.iter().chain(std::iter::repeat(&0))) {
            match seg {
                Segment::Fixed(g) => ops.push(g.clone()),
                Segment::Choice(options) => ops.extend(options[pick].iter().cloned()),
            }
        }
        Circuit { qubits: self.qubits, preps: self.preps.clone(), ops, measurements: self.measurements.clone() }
    }

    /// Circuit using the first option everywhere.
    pub fn first(&self) -> Circuit {
        self.instantiate(&[])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Circuit {
        let picks: Vec<usize> = self.segments.iter().map(|s| rng.gen_range(0..s.option_count())).collect();
        self.instantiate(&picks)
    }

    /// Upper bound on the op count of any instance.
    pub fn max_op_count(&self) -> usize {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Fixed(_) => 1,
                Segment::Choice(options) => options.iter().map(Vec::len).max().unwrap_or(0),
            })
            .sum()
    }
}

/// One outcome of the global coins of a generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub weight: f64,
    pub template: CircuitTemplate,
    /// Error-free outcome for traps.
    pub expected: Option<String>,
}

/// Linear size guarantee `ops ≤ per_gate · |C| + per_qubit · N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateBound {
    pub per_gate: usize,
    pub per_qubit: usize,
}

impl GateBound {
    pub fn limit(&self, input_gates: usize, qubits: usize) -> usize {
        self.per_gate * input_gates + self.per_qubit * qubits
    }
}

/// The full output distribution of a randomized generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub branches: Vec<Branch>,
    pub bound: GateBound,
}

/// A drawn circuit with its expected outcome, if it is a trap.
#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub circuit: Circuit,
    pub expected: Option<String>,
}

impl Ensemble {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Generated {
        let mut u: f64 = rng.gen();
        let last = self.branches.len() - 1;
        let mut chosen = last;
        for (i, b) in self.branches.iter().enumerate() {
            if u < b.weight {
                chosen = i;
                break;
            }
            u -= b.weight;
        }
        let branch = &self.branches[chosen];
        Generated { circuit: branch.template.sample(rng), expected: branch.expected.clone() }
    }

    pub fn qubits(&self) -> usize {
        self.branches[0].template.qubits
    }
}
