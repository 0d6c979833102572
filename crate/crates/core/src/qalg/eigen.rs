use super::matrix::Matrix;
use super::scalar::Real;
use crate::error::{Error, Result};
use num_complex::Complex;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: Matrix<T>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi diagonalisation.
pub fn hermitian_eigen<T: Real>(a: &Matrix<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigendecomposition needs a square matrix".into()));
    }
    let n = a.rows();
    let scale = a.max_abs().max(T::min_positive_value());
    if a.hermiticity_defect() > T::lit(1e-6) * scale.max(T::one()) {
        return Err(Error::InvalidArgument("eigendecomposition needs a Hermitian matrix".into()));
    }
    // symmetrise to drop rounding asymmetry
    let mut m = Matrix::from_fn(n, n, |r, c| (a[(r, c)] + a[(c, r)].conj()).scale(T::lit(0.5)));
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| m[(r, c)].norm_sqr())
            .sum();
        let diag: T = (0..n).map(|i| m[(i, i)].norm_sqr()).sum();
        if off <= eps * eps * (diag + off) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = T::lit(0.5) * (T::lit(2.0) * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // rotation U on (p, q): columns [c, -s e^{-iφ}], [s, c e^{-iφ}]
                let u_pp = Complex::new(c, T::zero());
                let u_pq = Complex::new(s, T::zero());
                let u_qp = -phase.conj().scale(s);
                let u_qq = phase.conj().scale(c);
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * u_pp + mkq * u_qp;
                    m[(k, q)] = mkp * u_pq + mkq * u_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
                    m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

impl<T: Real> HermitianEigen<T> {
    /// Rebuilds `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> Matrix<T> {
        let diag: Vec<Complex<T>> = self.values.iter().map(|&x| f(x)).collect();
        let scaled = &self.vectors * &Matrix::diagonal(&diag);
        &scaled * &self.vectors.adjoint()
    }

    /// Column `i` of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<Complex<T>> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, i)]).collect()
    }
}

/// `exp(−i h t)` for Hermitian `h`.
pub fn exp_i_hermitian<T: Real>(h: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    let eig = hermitian_eigen(h)?;
    Ok(eig.map_spectrum(|x| Complex::from_polar(T::one(), -x * t)))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm<T: Real>(h: &Matrix<T>) -> Result<T> {
    Ok(hermitian_eigen(h)?.values.iter().map(|x| x.abs()).sum())
}
