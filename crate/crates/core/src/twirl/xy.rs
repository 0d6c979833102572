use super::TwirlInstruction;
use crate::error::{Error, Result};
use crate::qalg::{gates, pauli_commutator, Pauli, PauliString, Sign};
use crate::Unitary;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Two-qubit Pauli strings with no member whose factor-swapped partner is also a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnflippableSet {
    members: BTreeSet<(Pauli, Pauli)>,
}

impl UnflippableSet {
    pub fn new(members: impl IntoIterator<Item = (Pauli, Pauli)>) -> Result<Self> {
        let members: BTreeSet<_> = members.into_iter().collect();
        if !is_unflippable_pairs(&members) {
            return Err(Error::InvalidArgument("set contains a flip pair".into()));
        }
        Ok(Self { members })
    }

    pub fn from_strings(strings: &[PauliString]) -> Result<Self> {
        Self::new(strings.iter().map(as_pair).collect::<Result<Vec<_>>>()?)
    }

    pub fn members(&self) -> impl Iterator<Item = (Pauli, Pauli)> + '_ {
        self.members.iter().copied()
    }

    pub fn strings(&self) -> Vec<PauliString> {
        self.members.iter().map(|&(a, b)| PauliString::pair(a, b)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Uniformly random subset of the 16 strings that passes the definition.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let members: BTreeSet<_> = PauliString::all(2)
                .filter(|_| rng.gen_bool(0.5))
                .map(|p| (p.letters()[0], p.letters()[1]))
                .collect();
            if !members.is_empty() && is_unflippable_pairs(&members) {
                return Self { members };
            }
        }
    }
}

fn as_pair(p: &PauliString) -> Result<(Pauli, Pauli)> {
    match p.letters() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::DimensionMismatch(format!("{p} is not a two-qubit string"))),
    }
}

fn is_unflippable_pairs(members: &BTreeSet<(Pauli, Pauli)>) -> bool {
    members.iter().all(|&(a, b)| (a, b) == (Pauli::I, Pauli::I) || !members.contains(&(b, a)))
}

/// True iff no member other than `II` has its swapped partner in the set.
pub fn is_unflippable(s: &[PauliString]) -> bool {
    match s.iter().map(as_pair).collect::<Result<BTreeSet<_>>>() {
        Ok(members) => is_unflippable_pairs(&members),
        Err(_) => false,
    }
}

/// `{II, XX, YY, ZZ}`.
pub fn weak_lambda() -> Vec<PauliString> {
    [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z].iter().map(|&p| PauliString::pair(p, p)).collect()
}

/// The twelve strings heading the sign table, followed by `II`.
pub fn composition_set() -> Vec<PauliString> {
    ["XY", "XZ", "YX", "YZ", "ZX", "ZY", "IX", "IY", "IZ", "XI", "YI", "ZI", "II"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

/// Signs `ξ(A, λ)` with rows `λ ∈ {II, XX, YY, ZZ}` and columns the first twelve of [`composition_set`].
pub fn sign_table() -> Vec<Vec<Sign>> {
    let cols = &composition_set()[..12];
    weak_lambda()
        .iter()
        .map(|l| cols.iter().map(|a| pauli_commutator(a, l).expect("two-qubit strings")).collect())
        .collect()
}

/// A pair of members whose product falls outside [`composition_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionEscape {
    pub a: PauliString,
    pub b: PauliString,
    pub product: PauliString,
}

/// Lists every ordered pair whose product (up to phase) is outside [`composition_set`].
pub fn composition_escapes(set: &UnflippableSet) -> Vec<CompositionEscape> {
    let allowed = composition_set();
    let strings = set.strings();
    let mut out = Vec::new();
    for a in &strings {
        for b in &strings {
            let product = (a * b).unsigned();
            if !allowed.contains(&product) {
                out.push(CompositionEscape { a: a.clone(), b: b.clone(), product });
            }
        }
    }
    out
}

/// True iff every pair product lies in [`composition_set`].
pub fn composition_contained(set: &UnflippableSet) -> bool {
    composition_escapes(set).is_empty()
}

/// Dressing `P⊗P` on both sides for a given `P`.
pub fn xy_twirl_instruction_for(p: Pauli) -> TwirlInstruction {
    let pp = Unitary::from_pauli(p);
    TwirlInstruction { left: (pp.clone(), pp.clone()), right: (pp.clone(), pp), replaced_gate: None }
}

/// Weak XY twirl with `P` uniform over `{I, X, Y, Z}`.
pub fn xy_twirl_instruction(seed: u64) -> TwirlInstruction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    xy_twirl_instruction_for(Pauli::from_index(rng.gen_range(0..4)))
}

/// Commutation sign of a single-qubit letter with one factor.
fn xi_letter(axis: Pauli, p: Pauli) -> f64 {
    if axis.commutes(p) {
        1.0
    } else {
        -1.0
    }
}

/// Signs `(s_xx, s_yy)` with `p (XX + YY) p = s_xx XX + s_yy YY`.
pub fn xi_signs(p: &PauliString) -> Result<(f64, f64)> {
    let (a, b) = as_pair(p)?;
    Ok((xi_letter(Pauli::X, a) * xi_letter(Pauli::X, b), xi_letter(Pauli::Y, a) * xi_letter(Pauli::Y, b)))
}

/// Declares that sign-variant XY gates share one noise channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoiseAssumptions {
    pub identical_sign_variant_noise: bool,
}

/// Strong XY twirl: `p` on both sides and the gate replaced by `exp(−iΞ(p)t)`.
pub fn strong_xy_twirl_instruction(p: &PauliString, t: f64, assumptions: NoiseAssumptions) -> Result<TwirlInstruction> {
    if !assumptions.identical_sign_variant_noise {
        return Err(Error::MissingN3);
    }
    let (a, b) = as_pair(p)?;
    let (sxx, syy) = xi_signs(p)?;
    let (pa, pb) = (Unitary::from_pauli(a), Unitary::from_pauli(b));
    Ok(TwirlInstruction {
        left: (pa.clone(), pb.clone()),
        right: (pa, pb),
        replaced_gate: Some(gates::xy_signed(t, sxx, syy)),
    })
}
