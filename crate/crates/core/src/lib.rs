//! Accreditation of noisy quantum circuits whose two-qubit gates are non-Clifford.
//!
//! The linear-algebra layer in [`qalg`] is generic over the real scalar; the protocol
//! layers above it work in double precision through the aliases below.

pub mod error;
pub mod qalg;
pub mod twirl;
pub mod circuits;
pub mod noisesim;
pub mod accredit;
pub mod oracle;

pub use error::{Error, Result};

pub type CMatrix = qalg::Matrix<f64>;
pub type Unitary = qalg::UnitaryMatrix<f64>;
pub type Channel = qalg::Channel<f64>;
pub type Superoperator = qalg::Superoperator<f64>;
pub type DensityMatrix = qalg::DensityMatrix<f64>;
pub type Distribution = qalg::DistributionTable<f64>;
pub type Complex = num_complex::Complex<f64>;
