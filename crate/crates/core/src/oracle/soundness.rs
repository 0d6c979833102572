use super::dense_tvd;
use super::ideal::ideal_actual_vd;
use crate::accredit::{resolve_decomposition, run_accreditation, AccreditationConfig, Protocol};
use crate::circuits::{ideal_probabilities, Circuit};
use crate::error::Result;
use crate::noisesim::{execute_probabilities, NoiseModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Slack absorbing rounding when comparing a bound against ν.
const VIOLATION_SLACK: f64 = 1e-9;

/// One protocol run of the soundness harness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoundnessRun {
    pub run: usize,
    pub seed: u64,
    pub bound: f64,
    pub true_nu: f64,
    /// ν of the single target circuit drawn in this run.
    pub per_draw_nu: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessVerdict {
    pub runs: usize,
    pub violations: usize,
    pub true_nu: f64,
    pub mean_bound: f64,
    pub alpha: f64,
    pub per_run: Vec<SoundnessRun>,
}

impl SoundnessVerdict {
    pub fn violation_rate(&self) -> f64 {
        self.violations as f64 / self.runs as f64
    }

    /// Largest violation count consistent with confidence `alpha` at three binomial standard deviations.
    pub fn allowed_violations(&self) -> f64 {
        let n = self.runs as f64;
        let q = 1.0 - self.alpha;
        n * q + 3.0 * (n * q * (1.0 - q)).sqrt()
    }

    pub fn is_sound(&self) -> bool {
        self.violations as f64 <= self.allowed_violations()
    }
}

/// Runs the protocol `runs` times with seeds derived from `seed` and counts runs whose bound falls below
/// ν of the draw-averaged target.
pub fn verify_soundness(c: &Circuit, nm: &NoiseModel, cfg: &AccreditationConfig, runs: usize, seed: u64) -> Result<SoundnessVerdict> {
    let mut cfg = cfg.clone();
    if cfg.protocol == Protocol::Tau {
        cfg.decomposition = Some(resolve_decomposition(c, cfg.decomposition.as_ref(), cfg.seed)?);
    }
    let true_nu = ideal_actual_vd(c, nm, Some(&cfg))?;
    let ideal = ideal_probabilities(c);
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..runs).map(|_| master.gen()).collect();
    let per_run = seeds
        .par_iter()
        .enumerate()
        .map(|(run, &s)| {
            let report = run_accreditation(c, nm, &cfg.clone().with_seed(s))?;
            let per_draw_nu = dense_tvd(&ideal, &execute_probabilities(&report.target_circuit, nm)?);
            Ok(SoundnessRun { run, seed: s, bound: report.bound, true_nu, per_draw_nu, violated: report.bound < true_nu - VIOLATION_SLACK })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = per_run.iter().filter(|r| r.violated).count();
    let mean_bound = per_run.iter().map(|r| r.bound).sum::<f64>() / runs.max(1) as f64;
    Ok(SoundnessVerdict { runs, violations, true_nu, mean_bound, alpha: cfg.alpha, per_run })
}
