use crate::error::{Error, Result};
use crate::qalg::{pauli_commutator, PauliString, Sign};
use crate::{Channel, Superoperator, Unitary};

const SELF_ADJOINT_TOL: f64 = 1e-10;

/// `(1/|Λ|) Σ_λ λ ∘ e ∘ λ†` in Kraus form.
pub fn generalized_twirl(e: &Channel, lambda: &[Unitary]) -> Result<Channel> {
    if lambda.is_empty() {
        return Err(Error::InvalidArgument("empty twirl set".into()));
    }
    if let Some(l) = lambda.iter().find(|l| l.dim() != e.dim_in() || e.dim_in() != e.dim_out()) {
        return Err(Error::DimensionMismatch(format!("twirl element on {} vs channel on {}", l.dim(), e.dim_in())));
    }
    if lambda.iter().any(|l| !l.is_self_adjoint(SELF_ADJOINT_TOL)) {
        return Err(Error::InvalidArgument("twirl elements must be self-adjoint".into()));
    }
    let scale = (1.0 / lambda.len() as f64).sqrt();
    let kraus = lambda
        .iter()
        .flat_map(|l| {
            let ld = l.adjoint();
            e.kraus().iter().map(move |k| (&(l.matrix() * k) * ld.matrix()).scale_real(scale))
        })
        .collect();
    Channel::new(e.dim_in(), e.dim_out(), kraus)
}

/// Least-squares fit of a superoperator onto conjugations by an orthogonal unitary basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationMixture {
    pub weights: Vec<f64>,
    /// Frobenius norm of the part of the map outside the span.
    pub residual: f64,
}

impl ConjugationMixture {
    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Residual below `tol` and no weight below `−tol`.
    pub fn is_stochastic(&self, tol: f64) -> bool {
        self.residual < tol && self.min_weight() >= -tol
    }

    /// Rebuilds the mixture as a channel, clipping rounding-level negative weights.
    pub fn to_channel(&self, basis: &[Unitary]) -> Result<Channel> {
        let clipped: Vec<f64> = self.weights.iter().map(|w| w.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let normalized: Vec<f64> = clipped.iter().map(|w| w / total).collect();
        Channel::mixed_unitary(&normalized, basis)
    }
}

/// Default tolerance for declaring a mixture stochastic.
pub const MIXTURE_TOL: f64 = 1e-8;

/// Projects `e` onto `{ρ ↦ bρb†}` for a trace-orthogonal basis.
pub fn extract_mixture(e: &Channel, basis: &[Unitary]) -> Result<ConjugationMixture> {
    let d = e.dim_in();
    if basis.iter().any(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch("basis and channel dimensions differ".into()));
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if a.matrix().inner(b.matrix()).norm() > 1e-9 {
                return Err(Error::InvalidArgument("mixture basis is not trace-orthogonal".into()));
            }
        }
    }
    let target = e.superoperator();
    let supers: Vec<Superoperator> = basis.iter().map(|b| Superoperator::conjugation(b.matrix())).collect();
    let norm = (d * d) as f64;
    let weights: Vec<f64> = supers.iter().map(|s| s.inner(&target).re / norm).collect();
    let fit = Superoperator::combination(&weights, &supers)?;
    Ok(ConjugationMixture { weights, residual: target.distance(&fit) })
}

/// Checks `Σ_λ ξ(γ₁γ₂, λ) = δ_{γ₁γ₂} |Λ|` for all pairs of `q`; phases are ignored.
pub fn check_lambda_summation(q: &[PauliString], lambda: &[PauliString]) -> bool {
    q.iter().all(|g1| {
        q.iter().all(|g2| {
            let product = (g1 * g2).unsigned();
            let sum: i32 = lambda
                .iter()
                .map(|l| pauli_commutator(&product, l).map(Sign::value).unwrap_or(i32::MIN / 64))
                .sum();
            let expected = if g1.unsigned() == g2.unsigned() { lambda.len() as i32 } else { 0 };
            sum == expected
        })
    })
}
