use super::eigen::hermitian_eigen;
use super::matrix::Matrix;
use super::scalar::Real;
use crate::error::{Error, Result};
use num_complex::Complex;

/// Validated density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real>(Matrix<T>);

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(256.0));
        if !m.is_square() {
            return Err(Error::InvalidState("not square".into()));
        }
        let herm = m.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm})")));
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = hermitian_eigen(&m)?.values[0];
        if min < -T::lit(1e-9).max(T::epsilon() * T::lit(1024.0)) {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let v = Matrix::column(psi.to_vec());
        Self::new(&v * &v.adjoint())
    }

    /// `|0…0⟩⟨0…0|` on `n` qubits.
    pub fn zero_state(n: usize) -> Self {
        let d = 1usize << n;
        let mut m = Matrix::zeros(d, d);
        m[(0, 0)] = Complex::new(T::one(), T::zero());
        Self(m)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(Matrix::identity(d).scale_real(T::one() / T::lit(d as f64)))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Computational-basis probabilities.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_states() {
        assert!(DensityMatrix::<f64>::new(Matrix::identity(2)).is_err());
        let bad = Matrix::<f64>::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
        assert!(DensityMatrix::<f64>::new(Matrix::identity(2).scale_real(0.5)).is_ok());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::<f64>::pure(&[Complex::new(r, 0.0), Complex::new(r, 0.0)]).unwrap();
        assert!((plus.diagonal()[1] - 0.5).abs() < 1e-15);
    }
}
