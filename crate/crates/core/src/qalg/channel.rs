use super::eigen::hermitian_eigen;
use super::matrix::Matrix;
use super::pauli::PauliString;
use super::scalar::{czero, Real};
use super::unitary::UnitaryMatrix;
use crate::error::{Error, Result};
use num_complex::Complex;

/// Trace-preservation tolerance at construction.
pub const TP_TOL: f64 = 1e-10;

/// CPTP map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel<T: Real> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Matrix<T>>,
}

impl<T: Real> Channel<T> {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<Matrix<T>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("channel needs at least one Kraus operator".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.rows() != dim_out || k.cols() != dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator is {}x{}, expected {}x{}",
                k.rows(),
                k.cols(),
                dim_out,
                dim_in
            )));
        }
        let ch = Self { dim_in, dim_out, kraus };
        let defect = ch.trace_preservation_defect();
        let tol = T::lit(TP_TOL).max(T::epsilon() * T::lit(256.0));
        if defect > tol {
            return Err(Error::NotTracePreserving(defect.to_f64_lossy()));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, kraus: vec![Matrix::identity(dim)] }
    }

    pub fn unitary(u: &UnitaryMatrix<T>) -> Self {
        Self { dim_in: u.dim(), dim_out: u.dim(), kraus: vec![u.matrix().clone()] }
    }

    /// `ρ ↦ Σ p_i U_i ρ U_i†`; zero-weight terms are dropped.
    pub fn mixed_unitary(weights: &[T], unitaries: &[UnitaryMatrix<T>]) -> Result<Self> {
        if weights.len() != unitaries.len() || unitaries.is_empty() {
            return Err(Error::DimensionMismatch("one weight per unitary required".into()));
        }
        check_probabilities(weights)?;
        let dim = unitaries[0].dim();
        let kraus: Vec<Matrix<T>> = weights
            .iter()
            .zip(unitaries)
            .filter(|(w, _)| **w > T::zero())
            .map(|(w, u)| u.matrix().scale_real(w.sqrt()))
            .collect();
        Self::new(dim, dim, kraus)
    }

    /// Pauli channel on `n` qubits with probabilities indexed like [`PauliString::all`].
    pub fn pauli(probabilities: &[T], n: usize) -> Result<Self> {
        if probabilities.len() != 4usize.pow(n as u32) {
            return Err(Error::DimensionMismatch(format!(
                "{} Pauli probabilities for {} qubit(s)",
                probabilities.len(),
                n
            )));
        }
        let unitaries: Vec<_> = PauliString::all(n).map(|p| UnitaryMatrix::new_unchecked(p.matrix())).collect();
        Self::mixed_unitary(probabilities, &unitaries)
    }

    /// Identity with probability `1 − p`, otherwise a uniformly random non-identity Pauli.
    pub fn depolarizing(p: T, n: usize) -> Result<Self> {
        let count = 4usize.pow(n as u32);
        let mut probs = vec![p / T::lit((count - 1) as f64); count];
        probs[0] = T::one() - p;
        Self::pauli(&probs, n)
    }

    /// Independent Z flip with probability `p` on each of `n` qubits.
    pub fn dephasing(p: T, n: usize) -> Result<Self> {
        let single = Self::pauli(&[T::one() - p, T::zero(), T::zero(), p], 1)?;
        Ok(single.tensor_power(n))
    }

    /// Independent amplitude damping with decay `gamma` on each of `n` qubits.
    pub fn amplitude_damping(gamma: T, n: usize) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&gamma) {
            return Err(Error::InvalidArgument("damping rate must lie in [0, 1]".into()));
        }
        let z = czero();
        let k0 = Matrix::new(2, 2, vec![Complex::new(T::one(), T::zero()), z, z, Complex::new((T::one() - gamma).sqrt(), T::zero())])?;
        let k1 = Matrix::new(2, 2, vec![z, Complex::new(gamma.sqrt(), T::zero()), z, z])?;
        Ok(Self::new(2, 2, vec![k0, k1])?.tensor_power(n))
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[Matrix<T>] {
        &self.kraus
    }

    /// Qubit count when square on a power-of-two dimension.
    pub fn qubits(&self) -> Option<usize> {
        (self.dim_in == self.dim_out && self.dim_in.is_power_of_two()).then(|| self.dim_in.trailing_zeros() as usize)
    }

    pub fn trace_preservation_defect(&self) -> T {
        let mut acc = Matrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc.max_abs_diff(&Matrix::identity(self.dim_in))
    }

    pub fn apply(&self, rho: &Matrix<T>) -> Result<Matrix<T>> {
        if rho.rows() != self.dim_in || rho.cols() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} into channel on {}",
                rho.rows(),
                self.dim_in
            )));
        }
        let mut out = Matrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        Ok(out)
    }

    /// Heisenberg-picture adjoint map `X ↦ Σ K† X K`.
    pub fn apply_adjoint(&self, x: &Matrix<T>) -> Matrix<T> {
        let mut out = Matrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out = &out + &(&(&k.adjoint() * x) * k);
        }
        out
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Channel<T>) -> Result<Self> {
        if then.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch("channel composition dims".into()));
        }
        let kraus = then.kraus.iter().flat_map(|b| self.kraus.iter().map(move |a| b * a)).collect();
        Ok(Self { dim_in: self.dim_in, dim_out: then.dim_out, kraus })
    }

    pub fn tensor(&self, other: &Channel<T>) -> Self {
        let kraus = self.kraus.iter().flat_map(|a| other.kraus.iter().map(move |b| a.kron(b))).collect();
        Self { dim_in: self.dim_in * other.dim_in, dim_out: self.dim_out * other.dim_out, kraus }
    }

    pub fn tensor_power(&self, n: usize) -> Self {
        let mut out = Channel::identity(1);
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }

    pub fn superoperator(&self) -> Superoperator<T> {
        Superoperator::from_channel(self)
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)`.
    pub fn choi(&self) -> Matrix<T> {
        let (din, dout) = (self.dim_in, self.dim_out);
        let mut out = Matrix::zeros(din * dout, din * dout);
        for k in &self.kraus {
            for i in 0..din {
                for j in 0..din {
                    for a in 0..dout {
                        for b in 0..dout {
                            out[(i * dout + a, j * dout + b)] += k[(a, i)] * k[(b, j)].conj();
                        }
                    }
                }
            }
        }
        out
    }

    /// Smallest Choi eigenvalue; non-negative for CP maps.
    pub fn choi_min_eigenvalue(&self) -> Result<T> {
        let eig = hermitian_eigen(&self.choi())?;
        Ok(eig.values[0])
    }

    /// Converts the scalar type.
    pub fn cast<U: Real>(&self) -> Channel<U> {
        Channel { dim_in: self.dim_in, dim_out: self.dim_out, kraus: self.kraus.iter().map(Matrix::cast).collect() }
    }
}

fn check_probabilities<T: Real>(weights: &[T]) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| **w < T::zero() || !w.is_finite()) {
        return Err(Error::InvalidArgument(format!("negative or non-finite weight {w}")));
    }
    let total: T = weights.iter().copied().sum();
    if (total - T::one()).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(64.0)) {
        return Err(Error::InvalidArgument(format!("weights sum to {total}, expected 1")));
    }
    Ok(())
}

/// Channel with Kraus operators `u K u†`.
pub fn conjugate_channel<T: Real>(e: &Channel<T>, u: &UnitaryMatrix<T>) -> Result<Channel<T>> {
    if e.dim_in != u.dim() || e.dim_out != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel on {} conjugated by unitary on {}",
            e.dim_in,
            u.dim()
        )));
    }
    let ud = u.matrix().adjoint();
    let kraus = e.kraus.iter().map(|k| &(u.matrix() * k) * &ud).collect();
    Ok(Channel { dim_in: e.dim_in, dim_out: e.dim_out, kraus })
}

/// Convex combination of channels.
pub fn mix_channels<T: Real>(weights: &[T], channels: &[Channel<T>]) -> Result<Channel<T>> {
    if weights.len() != channels.len() || channels.is_empty() {
        return Err(Error::DimensionMismatch("one weight per channel required".into()));
    }
    check_probabilities(weights)?;
    let (din, dout) = (channels[0].dim_in, channels[0].dim_out);
    if channels.iter().any(|c| c.dim_in != din || c.dim_out != dout) {
        return Err(Error::DimensionMismatch("mixed channels must share dimensions".into()));
    }
    let kraus = weights
        .iter()
        .zip(channels)
        .filter(|(w, _)| **w > T::zero())
        .flat_map(|(w, c)| {
            let s = w.sqrt();
            c.kraus.iter().map(move |k| k.scale_real(s))
        })
        .collect();
    Channel::new(din, dout, kraus)
}

/// Matrix acting on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<T: Real> {
    dim: usize,
    matrix: Matrix<T>,
}

impl<T: Real> Superoperator<T> {
    /// `Σ conj(K) ⊗ K` for square channels.
    pub fn from_channel(e: &Channel<T>) -> Self {
        let d = e.dim_in;
        let mut m = Matrix::zeros(d * d, d * d);
        for k in &e.kraus {
            m = &m + &k.conj().kron(k);
        }
        Self { dim: d, matrix: m }
    }

    /// Superoperator of `ρ ↦ u ρ u†`.
    pub fn conjugation(u: &Matrix<T>) -> Self {
        Self { dim: u.rows(), matrix: u.conj().kron(u) }
    }

    pub fn from_matrix(dim: usize, matrix: Matrix<T>) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch("superoperator must be d²×d²".into()));
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn apply(&self, rho: &Matrix<T>) -> Result<Matrix<T>> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch("state dimension".into()));
        }
        Matrix::unvectorize(&self.matrix.mul_vec(&rho.vectorize()), self.dim, self.dim)
    }

    /// Hilbert–Schmidt inner product of the matrices.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.matrix.inner(&other.matrix)
    }

    pub fn distance(&self, other: &Self) -> T {
        (&self.matrix - &other.matrix).frobenius_norm()
    }

    /// `Σ w_i S_i`.
    pub fn combination(weights: &[T], ops: &[Superoperator<T>]) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let mut m = Matrix::zeros(first.matrix.rows(), first.matrix.cols());
        for (w, s) in weights.iter().zip(ops) {
            m = &m + &s.matrix.scale_real(*w);
        }
        Ok(Self { dim: first.dim, matrix: m })
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::qalg::random::{random_channel, random_density};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_channels_are_cptp(seed in any::<u64>(), qubits in 1usize..=2, rank in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e: Channel<f64> = random_channel(1 << qubits, rank, &mut rng);
            prop_assert!(e.trace_preservation_defect() < 1e-10);
            prop_assert!(e.choi_min_eigenvalue().unwrap() > -1e-9);
        }

        #[test]
        fn superoperator_matches_kraus(seed in any::<u64>(), qubits in 1usize..=2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 1 << qubits;
            let e: Channel<f64> = random_channel(d, 3, &mut rng);
            let rho = random_density::<f64, _>(d, &mut rng);
            let via_kraus = e.apply(rho.matrix()).unwrap();
            let via_super = e.superoperator().apply(rho.matrix()).unwrap();
            prop_assert!(via_kraus.max_abs_diff(&via_super) < 1e-10);
        }

        #[test]
        fn pauli_presets_are_cptp(p in 0.0f64..=1.0, qubits in 1usize..=2) {
            for e in [Channel::<f64>::depolarizing(p, qubits).unwrap(), Channel::dephasing(p, qubits).unwrap(), Channel::amplitude_damping(p, qubits).unwrap()] {
                prop_assert!(e.trace_preservation_defect() < 1e-10);
                prop_assert!(e.choi_min_eigenvalue().unwrap() > -1e-9);
            }
        }
    }
}
