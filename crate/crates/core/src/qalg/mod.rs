//! Dense complex linear algebra, Pauli algebra, channels and distances.

mod channel;
mod density;
mod diamond;
mod distribution;
mod eigen;
mod matrix;
mod pauli;
pub mod random;
mod scalar;
mod unitary;

pub use channel::{conjugate_channel, mix_channels, Channel, Superoperator};
pub use density::DensityMatrix;
pub use diamond::diamond_distance_estimate;
pub use distribution::{bitstring, tvd, DistributionTable};
pub use eigen::{exp_i_hermitian, hermitian_eigen, trace_norm, HermitianEigen};
pub use matrix::Matrix;
pub use pauli::{parse_pauli_set, pauli_commutator, Pauli, PauliString, Phase, Sign};
pub use scalar::{cplx, Real};
pub use unitary::{gates, UnitaryMatrix};
