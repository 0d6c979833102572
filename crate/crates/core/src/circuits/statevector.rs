use super::ir::Circuit;
use crate::{CMatrix, Complex};

/// Applies a `2^k × 2^k` operator to `targets` of an `n`-qubit register stored at
/// `data[offset + i * stride]`; qubit 0 is the most significant bit of `i`.
pub(crate) fn apply_local(
    data: &mut [Complex],
    n: usize,
    offset: usize,
    stride: usize,
    op: &CMatrix,
    targets: &[usize],
    conjugate: bool,
) {
    let k = targets.len();
    let dim = 1usize << k;
    debug_assert_eq!(op.rows(), dim);
    let positions: Vec<usize> = targets.iter().map(|&q| n - 1 - q).collect();
    let target_mask: usize = positions.iter().map(|p| 1usize << p).sum();
    let offsets: Vec<usize> = (0..dim)
        .map(|a| (0..k).filter(|j| (a >> (k - 1 - j)) & 1 == 1).map(|j| 1usize << positions[j]).sum())
        .collect();
    let entries: Vec<Complex> =
        if conjugate { op.data().iter().map(|z| z.conj()).collect() } else { op.data().to_vec() };
    let mut gathered = vec![Complex::default(); dim];
    for base in (0..1usize << n).filter(|i| i & target_mask == 0) {
        for (a, off) in offsets.iter().enumerate() {
            gathered[a] = data[offset + (base | off) * stride];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &entries[r * dim..(r + 1) * dim];
            data[offset + (base | off) * stride] = row.iter().zip(&gathered).map(|(m, v)| m * v).sum();
        }
    }
}

/// Pure state of a register, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Self {
        let mut amplitudes = vec![Complex::default(); 1 << qubits];
        amplitudes[0] = Complex::new(1.0, 0.0);
        Self { qubits, amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn apply(&mut self, op: &CMatrix, targets: &[usize]) {
        apply_local(&mut self.amplitudes, self.qubits, 0, 1, op, targets, false);
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Noiseless final state of a circuit, with measurement rotations applied.
pub fn simulate(c: &Circuit) -> StateVector {
    let mut psi = StateVector::zero(c.qubits);
    for (q, p) in c.preps.iter().enumerate() {
        psi.apply(p.unitary().matrix(), &[q]);
    }
    for g in &c.ops {
        psi.apply(g.unitary().matrix(), &g.qubits);
    }
    for (q, m) in c.measurements.iter().enumerate() {
        psi.apply(m.unitary().matrix(), &[q]);
    }
    psi
}

/// Noiseless outcome probabilities indexed by basis state.
pub fn ideal_probabilities(c: &Circuit) -> Vec<f64> {
    simulate(c).probabilities()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::ir::{GateKind, Prep};
    use crate::qalg::gates;
    use crate::Unitary;

    #[test]
    fn bell_state() {
        let c = Circuit::new(2).gate(GateKind::H, &[0]).gate(GateKind::Cnot, &[0, 1]);
        let p = ideal_probabilities(&c);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn local_action_matches_kron() {
        // a gate on qubits (2, 0) of three must equal the permuted full operator
        let u = gates::sqrt_iswap::<f64>();
        let mut c = Circuit::new(3);
        c.preps = vec![Prep::Plus, Prep::One, Prep::Unitary(gates::euler(0.3, 1.1, -0.4))];
        let c = c.gate(GateKind::U2(u.clone()), &[2, 0]);
        let got = simulate(&c);
        let prep = gates::h::<f64>().kron(&gates::x()).kron(&gates::euler(0.3, 1.1, -0.4));
        let bit = |i: usize, q: usize| (i >> (2 - q)) & 1;
        let full = Unitary::new(CMatrix::from_fn(8, 8, |r, col| {
            if bit(r, 1) != bit(col, 1) {
                return Complex::default();
            }
            u.matrix()[(2 * bit(r, 2) + bit(r, 0), 2 * bit(col, 2) + bit(col, 0))]
        }))
        .unwrap();
        let mut zero = vec![Complex::default(); 8];
        zero[0] = Complex::new(1.0, 0.0);
        let want = (&full * &prep).matrix().mul_vec(&zero);
        for (a, b) in got.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
