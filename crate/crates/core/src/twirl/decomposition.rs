use crate::error::{Error, Result};
use crate::qalg::{gates, Pauli, PauliString, Phase};
use crate::{Complex, Unitary};

const PHASE_TOL: f64 = 1e-9;

/// Which factor of a τ-decomposed gate a qubit occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Role {
    First,
    Second,
}

/// `G = (τ₁⊗τ₂)† M (τ₁⊗τ₂)` with `M` a Clifford fixing `|00⟩` and `|++⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauDecomposition {
    tau1: Unitary,
    tau2: Unitary,
    clifford: Unitary,
    gate: Unitary,
}

impl TauDecomposition {
    pub fn new(tau1: Unitary, tau2: Unitary, clifford: Unitary) -> Result<Self> {
        if tau1.dim() != 2 || tau2.dim() != 2 || clifford.dim() != 4 {
            return Err(Error::InvalidDecomposition("expected 2x2, 2x2 and 4x4 unitaries".into()));
        }
        if !is_clifford(&clifford) {
            return Err(Error::InvalidDecomposition("M is not Clifford".into()));
        }
        if !fixes_reference_states(&clifford) {
            return Err(Error::InvalidDecomposition("M does not fix |00⟩ and |++⟩".into()));
        }
        let frame = tau1.kron(&tau2);
        let gate = &(&frame.adjoint() * &clifford) * &frame;
        Ok(Self { tau1, tau2, clifford, gate })
    }

    /// The `(T, T, cNOT)` decomposition of `(T⊗T)† cNOT (T⊗T)`.
    pub fn t_cnot() -> Self {
        Self::new(gates::t(), gates::t(), gates::cnot()).expect("valid decomposition")
    }

    pub fn tau1(&self) -> &Unitary {
        &self.tau1
    }

    pub fn tau2(&self) -> &Unitary {
        &self.tau2
    }

    pub fn tau(&self, role: Role) -> &Unitary {
        match role {
            Role::First => &self.tau1,
            Role::Second => &self.tau2,
        }
    }

    pub fn clifford(&self) -> &Unitary {
        &self.clifford
    }

    /// The decomposed two-qubit gate.
    pub fn gate(&self) -> &Unitary {
        &self.gate
    }

    /// `Δ = τ₁†τ₂`.
    pub fn delta(&self) -> Unitary {
        &self.tau1.adjoint() * &self.tau2
    }

    pub fn matches(&self, g: &Unitary) -> bool {
        self.matches_within(g, PHASE_TOL)
    }

    /// Agreement up to global phase, entrywise within `tol`.
    pub fn matches_within(&self, g: &Unitary, tol: f64) -> bool {
        g.dim() == 4 && self.gate.approx_eq_up_to_phase(g, tol)
    }

    /// Vesicle set of one role.
    pub fn vesicles(&self, role: Role) -> VesicleSet {
        VesicleSet::new(self.tau(role).clone())
    }

    /// The 16 elements `τ₁†P_jτ₁ ⊗ τ₂†P_kτ₂`, index `4j + k`.
    pub fn gamma(&self) -> Vec<Unitary> {
        let (a, b) = (self.vesicles(Role::First), self.vesicles(Role::Second));
        Pauli::ALL
            .iter()
            .flat_map(|&j| Pauli::ALL.iter().map(move |&k| (j, k)))
            .map(|(j, k)| a.element(j).kron(b.element(k)))
            .collect()
    }
}

/// `{τ†Pτ : P ∈ {I, X, Y, Z}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VesicleSet {
    tau: Unitary,
    elements: [Unitary; 4],
}

impl VesicleSet {
    pub fn new(tau: Unitary) -> Self {
        let elements = Pauli::ALL.map(|p| &(&tau.adjoint() * &Unitary::from_pauli(p)) * &tau);
        Self { tau, elements }
    }

    pub fn tau(&self) -> &Unitary {
        &self.tau
    }

    pub fn element(&self, p: Pauli) -> &Unitary {
        &self.elements[p.index()]
    }

    pub fn elements(&self) -> &[Unitary; 4] {
        &self.elements
    }
}

fn fixes_reference_states(m: &Unitary) -> bool {
    let zero = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)];
    let plus = [Complex::new(0.5, 0.0); 4];
    [zero, plus].iter().all(|v| {
        let out = m.matrix().mul_vec(v);
        let overlap: Complex = v.iter().zip(&out).map(|(a, b)| a.conj() * b).sum();
        (overlap.norm() - 1.0).abs() <= PHASE_TOL
    })
}

/// Writes a matrix as `phase · P` for a Pauli string, if it is one.
pub(crate) fn as_pauli_string(m: &crate::CMatrix, qubits: usize) -> Option<PauliString> {
    let d = (1usize << qubits) as f64;
    let (best, overlap) = PauliString::all(qubits)
        .map(|p| {
            let ov = p.matrix::<f64>().inner(m) / d;
            (p, ov)
        })
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    if (overlap.norm() - 1.0).abs() > PHASE_TOL {
        return None;
    }
    let k = (overlap.arg() / std::f64::consts::FRAC_PI_2).round().rem_euclid(4.0) as u8;
    let phase = Phase::from_power(k);
    if (overlap - phase.value::<f64>()).norm() > PHASE_TOL {
        return None;
    }
    let candidate = PauliString::with_phase(best.letters().to_vec(), phase);
    (candidate.matrix::<f64>().max_abs_diff(m) <= PHASE_TOL).then_some(candidate)
}

/// `p̄` with `m† p m = phase · p̄`, phase included in the result.
pub fn push_pauli_through_clifford(p: &PauliString, m: &Unitary) -> Result<PauliString> {
    if m.dim() != 1 << p.qubits() {
        return Err(Error::DimensionMismatch(format!("{}-qubit Pauli through {}x{} unitary", p.qubits(), m.dim(), m.dim())));
    }
    let conj = &(&m.matrix().adjoint() * &p.matrix()) * m.matrix();
    as_pauli_string(&conj, p.qubits())
        .ok_or_else(|| Error::NotClifford(format!("conjugate of {p} is not a Pauli string")))
}

/// True iff every Pauli string conjugates to a Pauli string up to phase.
pub fn is_clifford(u: &Unitary) -> bool {
    let n = u.qubits();
    if u.dim() != 1 << n {
        return false;
    }
    // conjugation is a homomorphism, so the single-qubit X and Z generators suffice
    (0..n).all(|q| {
        [Pauli::X, Pauli::Z].iter().all(|&g| {
            let mut letters = vec![Pauli::I; n];
            letters[q] = g;
            push_pauli_through_clifford(&PauliString::new(letters), u).is_ok()
        })
    })
}

/// Vesicle partners `(P′, Q′)` placed before `G` so that
/// `(τ₁†P_jτ₁ ⊗ τ₂†P_kτ₂) G (P′ ⊗ Q′) = G` up to phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PushedPair {
    pub first: Pauli,
    pub second: Pauli,
    pub p: Unitary,
    pub q: Unitary,
}

pub fn pushed_pair(j: Pauli, k: Pauli, dec: &TauDecomposition) -> Result<PushedPair> {
    let m = dec.clifford();
    let bar1 = push_pauli_through_clifford(&PauliString::pair(j, Pauli::I), m)
        .map_err(|e| Error::InvalidDecomposition(e.to_string()))?;
    let bar2 = push_pauli_through_clifford(&PauliString::pair(Pauli::I, k), m)
        .map_err(|e| Error::InvalidDecomposition(e.to_string()))?;
    let product = &bar1 * &bar2;
    let (first, second) = (product.letters()[0], product.letters()[1]);
    Ok(PushedPair {
        first,
        second,
        p: dec.vesicles(Role::First).element(first).clone(),
        q: dec.vesicles(Role::Second).element(second).clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::random::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn cnot_pushes() {
        let c = gates::cnot();
        assert_eq!(push_pauli_through_clifford(&ps("XI"), &c).unwrap(), ps("XX"));
        assert_eq!(push_pauli_through_clifford(&ps("IX"), &c).unwrap(), ps("IX"));
        assert_eq!(push_pauli_through_clifford(&ps("II"), &c).unwrap(), ps("II"));
        assert_eq!(push_pauli_through_clifford(&ps("ZI"), &c).unwrap(), ps("ZI"));
        assert_eq!(push_pauli_through_clifford(&ps("IZ"), &c).unwrap(), ps("ZZ"));
    }

    #[test]
    fn pushing_tracks_phase() {
        // S† X S = -Y
        let s = gates::s::<f64>();
        assert_eq!(push_pauli_through_clifford(&ps("X"), &s).unwrap(), ps("-Y"));
    }

    #[test]
    fn clifford_recognition() {
        assert!(is_clifford(&gates::cnot()));
        assert!(is_clifford(&gates::xy(0.0)));
        assert!(!is_clifford(TauDecomposition::t_cnot().gate()));
        assert!(push_pauli_through_clifford(&ps("XI"), TauDecomposition::t_cnot().gate()).is_err());
    }

    #[test]
    fn rejects_non_admissible_clifford() {
        let h = gates::h::<f64>();
        assert!(TauDecomposition::new(gates::t(), gates::t(), h.kron(&h)).is_err());
        assert!(TauDecomposition::new(gates::t(), gates::t(), gates::sqrt_iswap()).is_err());
    }

    #[test]
    fn t_cnot_example_pair() {
        let dec = TauDecomposition::t_cnot();
        let pair = pushed_pair(Pauli::X, Pauli::I, &dec).unwrap();
        let txt = &(&gates::t::<f64>().adjoint() * &gates::x()) * &gates::t();
        assert!(pair.p.approx_eq_up_to_phase(&txt, 1e-12));
        assert!(pair.q.approx_eq_up_to_phase(&txt, 1e-12));
    }

    #[test]
    fn pushing_identity_holds_for_random_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [gates::cnot(), gates::cnot_reversed(), Unitary::identity(4)] {
            let dec = TauDecomposition::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), m).unwrap();
            let gamma = dec.gamma();
            for (idx, g) in gamma.iter().enumerate() {
                let pair = pushed_pair(Pauli::from_index(idx / 4), Pauli::from_index(idx % 4), &dec).unwrap();
                let lhs = g * dec.gate();
                let rhs = dec.gate() * &pair.p.kron(&pair.q);
                assert!(lhs.approx_eq_up_to_phase(&rhs, 1e-9));
            }
        }
    }

    #[test]
    fn identity_cnot_pairs_reproduce_standard_propagation() {
        let dec = TauDecomposition::new(Unitary::identity(2), Unitary::identity(2), gates::cnot()).unwrap();
        for j in Pauli::ALL {
            for k in Pauli::ALL {
                let pair = pushed_pair(j, k, &dec).unwrap();
                // brute force: find the Pauli pair R with (P_j⊗P_k) cNOT = cNOT R
                let pk = Unitary::from_pauli(j).kron(&Unitary::from_pauli(k));
                let lhs = &pk * &gates::cnot();
                let found = PauliString::all(2)
                    .find(|r| lhs.approx_eq_up_to_phase(&(&gates::cnot() * &Unitary::new(r.matrix()).unwrap()), 1e-12))
                    .unwrap();
                assert_eq!((pair.first, pair.second), (found.letters()[0], found.letters()[1]));
            }
        }
    }
}
