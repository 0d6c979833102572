//! Exact density-matrix execution under site-keyed noise, exact averaging over generator
//! randomness, outcome sampling and the stochastic equivalent of twirled executions.

mod engine;
mod file;
mod model;
mod stochastic;

pub use engine::{
    ensemble_distribution, ensemble_failure_probability, ensemble_outcomes, execute_exact, execute_probabilities, sample,
    sample_dense, template_probabilities, BranchOutcome, DensityState, ExecutionResult, SiteRecord, MAX_SIMULATED_QUBITS,
};
pub use file::ChannelSpec;
pub use model::{GateDependence, NoiseModel, NoiseSite, SiteKind, SiteNoise};
pub use stochastic::{stochastic_pauli_equivalent, StochasticEquivalent, TwirlFamily};
