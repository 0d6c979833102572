//! Exact references for checking the protocol: ideal distributions, variation distances,
//! soundness and robustness harnesses, and fault-injection detection rates.

mod detection;
mod ideal;
mod robustness;
mod soundness;

pub use detection::{detection_rates, fault_catalogue, inject_fault, relocate_fault, FaultDetection, InjectedFault};
pub use ideal::{ideal_actual_vd, ideal_distribution, probability_of_any_error, ORACLE_MAX_QUBITS};
pub use robustness::{check_corollary, site_channel, verify_robustness, CorollaryVerdict, RobustnessStatus, RobustnessVerdict};
pub use soundness::{verify_soundness, SoundnessRun, SoundnessVerdict};

pub(crate) fn dense_tvd(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
