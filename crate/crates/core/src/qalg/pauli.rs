use super::matrix::Matrix;
use super::scalar::{cplx, Real};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i % 4]
    }

    pub fn matrix<T: Real>(self) -> Matrix<T> {
        let pairs: [(f64, f64); 4] = match self {
            Pauli::I => [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
            Pauli::X => [(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
            Pauli::Y => [(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)],
            Pauli::Z => [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)],
        };
        Matrix::from_pairs(2, &pairs).expect("2x2 literal")
    }

    /// Product `self · other` as (phase, letter).
    pub fn product(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::One, p),
            (a, b) if a == b => (Phase::One, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MinusI, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MinusI, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MinusI, Y),
            _ => unreachable!(),
        }
    }

    pub fn commutes(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Phase in {+1, +i, −1, −i}, stored as a power of i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn power(self) -> u8 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn from_power(k: u8) -> Phase {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn value<T: Real>(self) -> num_complex::Complex<T> {
        match self {
            Phase::One => cplx(1.0, 0.0),
            Phase::I => cplx(0.0, 1.0),
            Phase::MinusOne => cplx(-1.0, 0.0),
            Phase::MinusI => cplx(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power(self.power() + rhs.power())
    }
}

/// Commutation sign: `a b = sign · b a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Tensor product of Pauli letters with a global phase; qubit 0 is the first factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
    phase: Phase,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters, phase: Phase::One }
    }

    pub fn with_phase(letters: Vec<Pauli>, phase: Phase) -> Self {
        Self { letters, phase }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    pub fn pair(a: Pauli, b: Pauli) -> Self {
        Self::new(vec![a, b])
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn qubits(&self) -> usize {
        self.letters.len()
    }

    /// Same letters with phase +1.
    pub fn unsigned(&self) -> Self {
        Self::new(self.letters.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Index in `0..4^n` with qubit 0 most significant.
    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, p| acc * 4 + p.index())
    }

    pub fn from_index(n: usize, mut idx: usize) -> Self {
        let mut letters = vec![Pauli::I; n];
        for slot in letters.iter_mut().rev() {
            *slot = Pauli::from_index(idx % 4);
            idx /= 4;
        }
        Self::new(letters)
    }

    /// All `4^n` strings with phase +1, in index order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliString> {
        (0..4usize.pow(n as u32)).map(move |i| Self::from_index(n, i))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_same_size(self, other)?;
        let mut phase = self.phase * other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, c) = a.product(b);
                phase = phase * ph;
                c
            })
            .collect();
        Ok(Self { letters, phase })
    }

    /// Matrix including the phase.
    pub fn matrix<T: Real>(&self) -> Matrix<T> {
        let mut m = Matrix::identity(1);
        for p in &self.letters {
            m = m.kron(&p.matrix());
        }
        m.scale(self.phase.value())
    }
}

fn check_same_size(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.qubits() != b.qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Pauli strings on {} and {} qubits",
            a.qubits(),
            b.qubits()
        )));
    }
    Ok(())
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.try_mul(rhs).expect("Pauli strings of equal length")
    }
}

/// Sign `s` with `a b = s · b a`.
pub fn pauli_commutator(a: &PauliString, b: &PauliString) -> Result<Sign> {
    check_same_size(a, b)?;
    let anti = a.letters.iter().zip(&b.letters).filter(|(x, y)| !x.commutes(**y)).count();
    Ok(if anti % 2 == 0 { Sign::Plus } else { Sign::Minus })
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            Phase::One => "",
            Phase::I => "i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        };
        write!(f, "{prefix}")?;
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MinusI, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MinusOne, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Phase::I, rest)
        } else {
            (Phase::One, s.strip_prefix('+').unwrap_or(s))
        };
        let letters = body
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("unknown Pauli letter '{other}' in \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string \"{s}\"")));
        }
        Ok(Self { letters, phase })
    }
}

/// Parses a whitespace or comma separated list such as `"II XI YI"`.
pub fn parse_pauli_set(s: &str) -> Result<Vec<PauliString>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn string(n: usize) -> impl Strategy<Value = PauliString> {
        (0..4usize.pow(n as u32)).prop_map(move |i| PauliString::from_index(n, i))
    }

    fn pair_of_strings() -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
        (1usize..=4).prop_flat_map(|n| (string(n), string(n), string(n)))
    }

    proptest! {
        #[test]
        fn products_close_with_unit_phase((a, b, _) in pair_of_strings()) {
            let ab = a.try_mul(&b).unwrap();
            prop_assert!(ab.matrix::<f64>().max_abs_diff(&(&a.matrix::<f64>() * &b.matrix::<f64>())) < 1e-12);
        }

        #[test]
        fn commutator_product_rule_and_symmetry((g, a, b) in pair_of_strings()) {
            let ab = a.try_mul(&b).unwrap();
            let xi = |x: &PauliString, y: &PauliString| pauli_commutator(x, y).unwrap().value();
            prop_assert_eq!(xi(&g, &ab), xi(&g, &a) * xi(&g, &b));
            prop_assert_eq!(xi(&a, &b), xi(&b, &a));
        }
    }
}
