//! Circuit representation, file format, noiseless simulation and the trap and target generators.

mod io;
mod ir;
pub mod random;
mod standard;
mod statevector;
mod tau;
mod template;
mod xy;

pub use io::MatrixRepr;
pub use ir::{Circuit, GateKind, Measurement, PlacedGate, Prep, Provenance, SkeletonEntry, TwoQubitClass};
pub use standard::{is_standard_form, standard_form};
pub use statevector::{ideal_probabilities, simulate, StateVector};
pub use tau::{build_tau_target, build_tau_trap, tau_target_ensemble, tau_trap_ensemble, TAU_BOUND};
pub use template::{Branch, CircuitTemplate, Ensemble, GateBound, Generated, Segment};
pub use xy::{
    build_vanishing_block, build_xy_target, build_xy_trap, vanishing_block_options, xy_target_ensemble, xy_trap_ensemble,
    VanishingBlock, XyTwirl, XY_BOUND,
};

pub(crate) use io::json_error;
pub(crate) use statevector::apply_local;
