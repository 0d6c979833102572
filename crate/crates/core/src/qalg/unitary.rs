use super::eigen::exp_i_hermitian;
use super::matrix::Matrix;
use super::pauli::Pauli;
use super::scalar::{cplx, Real};
use crate::error::{Error, Result};

/// Unitary tolerance used at construction.
pub const UNITARY_TOL: f64 = 1e-10;

/// Square unitary matrix on a power-of-two dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix<T: Real>(Matrix<T>);

impl<T: Real> UnitaryMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        Self::with_tolerance(m, T::lit(UNITARY_TOL).max(T::epsilon() * T::lit(64.0)))
    }

    pub fn with_tolerance(m: Matrix<T>, tol: T) -> Result<Self> {
        if !m.is_square() || !m.rows().is_power_of_two() || m.rows() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square with power-of-two dimension, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.unitarity_defect();
        if defect > tol {
            return Err(Error::NotUnitary(defect.to_f64_lossy()));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Matrix<T>) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.checked_mul(&other.0)?))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }

    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: T) -> bool {
        self.0.approx_eq_up_to_phase(&other.0, tol)
    }

    pub fn is_self_adjoint(&self, tol: T) -> bool {
        self.0.is_hermitian(tol)
    }

    pub fn from_pauli(p: Pauli) -> Self {
        Self(p.matrix())
    }
}

impl<T: Real> std::ops::Mul for &UnitaryMatrix<T> {
    type Output = UnitaryMatrix<T>;
    fn mul(self, rhs: &UnitaryMatrix<T>) -> UnitaryMatrix<T> {
        UnitaryMatrix(&self.0 * &rhs.0)
    }
}

/// Standard gates.
pub mod gates {
    use super::*;

    fn u<T: Real>(n: usize, pairs: &[(f64, f64)]) -> UnitaryMatrix<T> {
        UnitaryMatrix(Matrix::from_pairs(n, pairs).expect("literal gate"))
    }

    pub fn x<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix::from_pauli(Pauli::X)
    }

    pub fn y<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix::from_pauli(Pauli::Y)
    }

    pub fn z<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix::from_pauli(Pauli::Z)
    }

    pub fn h<T: Real>() -> UnitaryMatrix<T> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        u(2, &[(r, 0.0), (r, 0.0), (r, 0.0), (-r, 0.0)])
    }

    pub fn s<T: Real>() -> UnitaryMatrix<T> {
        u(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0)])
    }

    pub fn t<T: Real>() -> UnitaryMatrix<T> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        u(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (r, r)])
    }

    /// `Rz(a) Ry(b) Rz(c)`.
    pub fn euler<T: Real>(a: f64, b: f64, c: f64) -> UnitaryMatrix<T> {
        let (sb, cb) = (b / 2.0).sin_cos();
        let e = |phi: f64| num_complex::Complex::from_polar(T::one(), T::lit(phi));
        let m = Matrix::new(
            2,
            2,
            vec![
                e(-(a + c) / 2.0).scale(T::lit(cb)),
                -e(-(a - c) / 2.0).scale(T::lit(sb)),
                e((a - c) / 2.0).scale(T::lit(sb)),
                e((a + c) / 2.0).scale(T::lit(cb)),
            ],
        )
        .expect("2x2");
        UnitaryMatrix(m)
    }

    /// Controlled-NOT with qubit 0 as control.
    pub fn cnot<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix(
            Matrix::from_real(
                4,
                &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
            )
            .expect("4x4"),
        )
    }

    /// Controlled-NOT with qubit 1 as control.
    pub fn cnot_reversed<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix(
            Matrix::from_real(
                4,
                &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            )
            .expect("4x4"),
        )
    }

    pub fn cz<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix(Matrix::diagonal(&[cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(-1.0, 0.0)]))
    }

    pub fn swap<T: Real>() -> UnitaryMatrix<T> {
        UnitaryMatrix(
            Matrix::from_real(
                4,
                &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            )
            .expect("4x4"),
        )
    }

    /// `s_xx·XX + s_yy·YY`.
    pub fn xy_hamiltonian<T: Real>(s_xx: f64, s_yy: f64) -> Matrix<T> {
        let xx = Pauli::X.matrix::<T>().kron(&Pauli::X.matrix());
        let yy = Pauli::Y.matrix::<T>().kron(&Pauli::Y.matrix());
        &xx.scale_real(T::lit(s_xx)) + &yy.scale_real(T::lit(s_yy))
    }

    /// `exp(−i t (s_xx·XX + s_yy·YY))`.
    pub fn xy_signed<T: Real>(t: f64, s_xx: f64, s_yy: f64) -> UnitaryMatrix<T> {
        let m = exp_i_hermitian(&xy_hamiltonian::<T>(s_xx, s_yy), T::lit(t)).expect("Hermitian generator");
        UnitaryMatrix(m)
    }

    /// `exp(−i t (XX + YY))`.
    pub fn xy<T: Real>(t: f64) -> UnitaryMatrix<T> {
        xy_signed(t, 1.0, 1.0)
    }

    /// `√iSWAP`, equal to `xy(−π/8)` up to convention.
    pub fn sqrt_iswap<T: Real>() -> UnitaryMatrix<T> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        u(
            4,
            &[
                (1.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (r, 0.0),
                (0.0, r),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, r),
                (r, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
            ],
        )
    }
}
