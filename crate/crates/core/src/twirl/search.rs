use super::decomposition::TauDecomposition;
use crate::qalg::gates;
use crate::{CMatrix, Unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Canonical key of a matrix modulo global phase.
fn phase_key(m: &CMatrix) -> Vec<(i64, i64)> {
    let pivot = m.data().iter().find(|z| z.norm() > 1e-6).copied().unwrap_or_default();
    let phase = pivot.conj() / pivot.norm();
    m.data()
        .iter()
        .map(|z| {
            let w = z * phase;
            ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
        })
        .collect()
}

/// All two-qubit Cliffords modulo phase, by breadth-first closure over H, S and cNOT.
pub fn two_qubit_cliffords() -> &'static [Unitary] {
    static GROUP: OnceLock<Vec<Unitary>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let id2 = Unitary::identity(2);
        let generators = [
            gates::h().kron(&id2),
            id2.kron(&gates::h()),
            gates::s().kron(&id2),
            id2.kron(&gates::s()),
            gates::cnot(),
            gates::cnot_reversed(),
        ];
        let start = Unitary::identity(4);
        let mut seen = HashMap::from([(phase_key(start.matrix()), ())]);
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for g in &generators {
                let next = g * &u;
                if seen.insert(phase_key(next.matrix()), ()).is_none() {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    })
}

/// Cliffords fixing `|00⟩` and `|++⟩` up to phase, identity first.
pub fn admissible_cliffords() -> &'static [Unitary] {
    static ADMISSIBLE: OnceLock<Vec<Unitary>> = OnceLock::new();
    ADMISSIBLE.get_or_init(|| {
        two_qubit_cliffords()
            .iter()
            .filter(|m| TauDecomposition::new(Unitary::identity(2), Unitary::identity(2), (*m).clone()).is_ok())
            .cloned()
            .collect()
    })
}

/// Outcome of a decomposition search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub decomposition: Option<TauDecomposition>,
    /// Smallest phase-invariant Frobenius residual seen over all candidates.
    pub best_residual: f64,
    /// Other admissible Cliffords that also reached the tolerance.
    pub alternatives: Vec<TauDecomposition>,
}

/// Search effort per admissible Clifford.
#[derive(Clone, Copy, Debug)]
pub struct SearchEffort {
    pub restarts: usize,
    pub max_evaluations: usize,
}

impl Default for SearchEffort {
    fn default() -> Self {
        Self { restarts: 24, max_evaluations: 4000 }
    }
}

fn frame(params: &[f64]) -> (Unitary, Unitary) {
    (gates::euler(params[0], params[1], params[2]), gates::euler(params[3], params[4], params[5]))
}

fn residual(params: &[f64], m: &Unitary, g: &Unitary) -> f64 {
    let (t1, t2) = frame(params);
    let f = t1.kron(&t2);
    let candidate = &(&f.adjoint() * m) * &f;
    candidate.matrix().phase_distance(g.matrix())
}

/// Nelder–Mead minimisation; returns the best point and value.
pub(crate) fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    max_evaluations: usize,
    target: f64,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let mut p = start.to_vec();
            if i > 0 {
                p[i - 1] += step;
            }
            p
        })
        .collect();
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    while evals < max_evaluations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let spread = values[n] - values[0];
        if values[0] <= target || spread.abs() < 1e-30 {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
        let towards = |coef: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n]).map(|(c, w)| c + coef * (w - c)).collect()
        };
        let reflected = towards(-1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = towards(-2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < values[n] { towards(-0.5) } else { towards(0.5) };
            let fc = f(&contracted);
            evals += 1;
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = best.iter().zip(&simplex[i]).map(|(b, p)| b + 0.5 * (p - b)).collect();
                    values[i] = f(&simplex[i]);
                }
                evals += n;
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[best].clone(), values[best])
}

/// Fits `τ₁, τ₂` for one Clifford; returns parameters and residual.
fn fit_frame(g: &Unitary, m: &Unitary, tolerance: f64, effort: SearchEffort, rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
    let objective = |p: &[f64]| residual(p, m, g).powi(2);
    let mut best = (vec![0.0; 6], residual(&[0.0; 6], m, g));
    if best.1 < tolerance {
        return best;
    }
    for restart in 0..effort.restarts {
        let start: Vec<f64> = if restart == 0 {
            vec![0.0; 6]
        } else {
            (0..6).map(|_| rng.gen_range(-PI..PI)).collect()
        };
        let mut point = start;
        let mut value = f64::INFINITY;
        // restart the simplex around the incumbent to escape premature collapse
        for round in 0..4 {
            let step = if round == 0 { 0.8 } else { 0.05 };
            let (p, v) = nelder_mead(objective, &point, step, effort.max_evaluations / 4, (tolerance * 1e-3).powi(2));
            point = p;
            value = v;
        }
        let r = value.max(0.0).sqrt();
        if r < best.1 {
            best = (point, r);
        }
        if best.1 < tolerance * 1e-3 {
            break;
        }
    }
    best
}

/// Searches admissible Cliffords `M` and frames `τ₁, τ₂` reproducing `g` up to phase.
pub fn search_tau_decomposition(g: &Unitary, tolerance: f64, seed: u64) -> SearchOutcome {
    search_tau_decomposition_with(g, tolerance, seed, SearchEffort::default())
}

pub fn search_tau_decomposition_with(g: &Unitary, tolerance: f64, seed: u64, effort: SearchEffort) -> SearchOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_residual = f64::INFINITY;
    let mut found = Vec::new();
    if g.dim() != 4 {
        return SearchOutcome { decomposition: None, best_residual, alternatives: found };
    }
    for m in admissible_cliffords() {
        let (params, r) = fit_frame(g, m, tolerance, effort, &mut rng);
        best_residual = best_residual.min(r);
        if r < tolerance {
            let (t1, t2) = frame(&params);
            if let Ok(dec) = TauDecomposition::new(t1, t2, m.clone()) {
                found.push(dec);
            }
        }
    }
    let mut found = found.into_iter();
    let decomposition = found.next();
    SearchOutcome { decomposition, best_residual, alternatives: found.collect() }
}
