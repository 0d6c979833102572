//! Seeded random matrices, states and channels.

use super::channel::Channel;
use super::density::DensityMatrix;
use super::matrix::Matrix;
use super::scalar::{czero, Real};
use super::unitary::UnitaryMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v: Vec<Complex<T>> = (0..n).map(|r| g[(r, c)]).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = q.iter().zip(&v).fold(czero::<T>(), |acc, (a, b)| acc + a.conj() * b);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for x in v.iter_mut() {
            *x = *x / norm;
        }
        cols.push(v);
    }
    let m = Matrix::from_fn(n, n, |r, c| cols[c][r]);
    UnitaryMatrix::new_unchecked(m)
}

pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    (&g + &g.adjoint()).scale_real(T::lit(0.5))
}

/// Random pure state vector of unit norm.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    let mut v: Vec<Complex<T>> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    for x in v.iter_mut() {
        *x = *x / norm;
    }
    v
}

/// Random full-rank density matrix (Hilbert–Schmidt measure).
pub fn random_density<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(T::one() / tr)).expect("Ginibre construction is a valid state")
}

/// Random CPTP map on dimension `d` with `rank` Kraus operators, from a Haar isometry.
pub fn random_channel<T: Real, R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Channel<T> {
    let u = haar_unitary::<T, R>(d * rank, rng);
    let kraus = (0..rank)
        .map(|k| Matrix::from_fn(d, d, |r, c| u.matrix()[(k * d + r, c)]))
        .collect();
    Channel::new(d, d, kraus).expect("isometry blocks are trace preserving")
}
