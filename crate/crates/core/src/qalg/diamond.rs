use super::channel::Channel;
use super::eigen::hermitian_eigen;
use super::matrix::Matrix;
use super::random::random_pure_state;
use super::scalar::Real;
use crate::error::{Error, Result};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_ASCENT_STEPS: usize = 200;

/// Lower bound on `‖a − b‖⋄` from seeded pure-state restarts with see-saw ascent.
///
/// Each restart starts from a random state on the system and an equal-sized ancilla and
/// alternates between the optimal sign observable and the best state for it, which never
/// decreases the trace norm. The result is the maximum over restarts, so adding restarts
/// with the same seed can only raise it.
pub fn diamond_distance_estimate<T: Real>(a: &Channel<T>, b: &Channel<T>, restarts: usize, seed: u64) -> Result<T> {
    if a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out() || a.dim_in() != a.dim_out() {
        return Err(Error::DimensionMismatch("diamond distance needs equal square channels".into()));
    }
    let d = a.dim_in();
    let lift = |c: &Channel<T>| -> Vec<Matrix<T>> {
        let id = Matrix::identity(d);
        c.kraus().iter().map(|k| k.kron(&id)).collect()
    };
    let (ka, kb) = (lift(a), lift(b));
    let forward = |rho: &Matrix<T>| -> Matrix<T> {
        let mut out = Matrix::zeros(d * d, d * d);
        for k in &ka {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        for k in &kb {
            out = &out - &(&(k * rho) * &k.adjoint());
        }
        out
    };
    let backward = |s: &Matrix<T>| -> Matrix<T> {
        let mut out = Matrix::zeros(d * d, d * d);
        for k in &ka {
            out = &out + &(&(&k.adjoint() * s) * k);
        }
        for k in &kb {
            out = &out - &(&(&k.adjoint() * s) * k);
        }
        out
    };

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut best = T::zero();
    for _ in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
        let mut psi = random_pure_state::<T, _>(d * d, &mut rng);
        let mut last = -T::one();
        for _ in 0..MAX_ASCENT_STEPS {
            let v = Matrix::column(psi.clone());
            let delta = forward(&(&v * &v.adjoint()));
            let eig = hermitian_eigen(&delta)?;
            let value: T = eig.values.iter().map(|x| x.abs()).sum();
            best = best.max(value);
            if value - last <= T::lit(1e-13) {
                break;
            }
            last = value;
            let sign = eig.map_spectrum(|x| Complex::new(if x >= T::zero() { T::one() } else { -T::one() }, T::zero()));
            let m = backward(&sign);
            let top = hermitian_eigen(&m)?;
            psi = top.vector(d * d - 1);
        }
    }
    Ok(best)
}
