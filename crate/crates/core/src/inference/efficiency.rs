use std::sync::Arc;

use crate::models::{Dataset, LikelihoodModel, ModelError};
use crate::numerics::{pairwise_sum, shannon_neg_entropy, Grid, GriddedDensity};
use crate::priors::PriorMeasure;

use super::{check_grid, grid_posterior, posterior, summarize, InferenceError, PosteriorResult};

/// `|delta|` at or below this counts as full efficiency.
pub const EFFICIENCY_TOL: f64 = 1e-8;

/// Output information minus input information for one candidate output
/// density.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoReport {
    /// `integral g ln g + ln m`
    pub output_info: f64,
    /// `integral g ln prior + integral g ln likelihood` (prior term absent in
    /// the likelihood-only variant)
    pub input_info: f64,
    pub delta: f64,
    /// `exp(-delta)`, exactly 1 when `delta <= 1e-8`.
    pub efficiency: f64,
    pub candidate_label: String,
}

impl InfoReport {
    fn new(output_info: f64, input_info: f64) -> Self {
        let delta = output_info - input_info;
        let efficiency = if delta <= EFFICIENCY_TOL {
            1.0
        } else {
            (-delta).exp()
        };
        InfoReport {
            output_info,
            input_info,
            delta,
            efficiency,
            candidate_label: "candidate".to_string(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.candidate_label = label.into();
        self
    }
}

fn scalar_domain<M: LikelihoodModel + ?Sized>(
    model: &M,
) -> Result<crate::numerics::ParamDomain, InferenceError> {
    match model.theta_domain() {
        [d] => Ok(*d),
        ds => Err(ModelError::NotScalar {
            model: model.label().to_string(),
            dim: ds.len(),
        }
        .into()),
    }
}

fn check_continuous_proper(prior: &PriorMeasure) -> Result<(), InferenceError> {
    if prior.has_atoms() {
        return Err(InferenceError::AtomsNotSupported(prior.label().to_string()));
    }
    if !prior.is_proper() {
        return Err(InferenceError::ImproperPrior(prior.label().to_string()));
    }
    Ok(())
}

/// The Bayes posterior density, which minimizes [`info_delta`].
pub fn optimal_output<M: LikelihoodModel + ?Sized>(
    prior: &PriorMeasure,
    model: &M,
    data: &Dataset,
    grid: &Arc<Grid>,
) -> Result<GriddedDensity, InferenceError> {
    check_continuous_proper(prior)?;
    Ok(posterior(prior, model, data, grid)?.density)
}

/// Output minus input information of `candidate`; `ln_prior` and the
/// reference posterior share its grid.
fn report<M: LikelihoodModel + ?Sized>(
    candidate: &GriddedDensity,
    reference: &PosteriorResult,
    model: &M,
    data: &Dataset,
    ln_prior: Option<&dyn Fn(usize) -> f64>,
) -> Result<InfoReport, InferenceError> {
    if !candidate.is_normalized() {
        return Err(InferenceError::NotNormalized(candidate.mass()?));
    }
    let grid = candidate.grid();
    let mut prior_terms = Vec::new();
    let mut lik_terms = Vec::new();
    for (i, ((a, &g), &w)) in grid
        .abscissae()
        .zip(candidate.values())
        .zip(grid.weights())
        .enumerate()
    {
        if g == 0.0 {
            continue;
        }
        // The posterior may underflow at extreme nodes; support is decided by
        // the log terms, which stay finite there.
        let lp = ln_prior.map(|f| f(i));
        let ll = model.loglik(std::slice::from_ref(&a), data)?;
        if ll == f64::NEG_INFINITY || lp == Some(f64::NEG_INFINITY) {
            return Err(InferenceError::SupportViolation { index: i, node: a.x });
        }
        if let Some(lp) = lp {
            prior_terms.push(w * g * lp);
        }
        lik_terms.push(w * g * ll);
    }
    let output = shannon_neg_entropy(candidate)? + reference.log_marginal;
    let input = pairwise_sum(&prior_terms) + pairwise_sum(&lik_terms);
    Ok(InfoReport::new(output, input))
}

/// Information report of a candidate output density for a proper, purely
/// continuous prior. For the Bayes posterior `delta` vanishes; for any other
/// candidate it equals the Kullback-Leibler divergence from the posterior.
pub fn info_delta<M: LikelihoodModel + ?Sized>(
    candidate: &GriddedDensity,
    prior: &PriorMeasure,
    model: &M,
    data: &Dataset,
) -> Result<InfoReport, InferenceError> {
    check_continuous_proper(prior)?;
    let grid = candidate.grid();
    let reference = posterior(prior, model, data, grid)?;
    let ln_prior: Vec<f64> = grid.abscissae().map(|a| prior.density_at(&a).ln()).collect();
    report(candidate, &reference, model, data, Some(&|i| ln_prior[i]))
}

fn normalized_likelihood<M: LikelihoodModel + ?Sized>(
    model: &M,
    data: &Dataset,
    grid: &Arc<Grid>,
) -> Result<PosteriorResult, InferenceError> {
    let domain = scalar_domain(model)?;
    check_grid(grid, &domain)?;
    model.check_dataset(data)?;
    let flat = PriorMeasure::from_kernel("likelihood only", domain, |_| 1.0);
    grid_posterior(
        &flat,
        grid,
        |a| model.loglik(std::slice::from_ref(a), data),
        summarize(data),
    )
    .map_err(|e| match e {
        InferenceError::ImproperPosterior(_) => InferenceError::ImproperPosterior(format!(
            "the likelihood of {} is not integrable",
            summarize(data)
        )),
        other => other,
    })
}

/// The likelihood normalized as a density over the parameter.
pub fn likelihood_only_output<M: LikelihoodModel + ?Sized>(
    model: &M,
    data: &Dataset,
    grid: &Arc<Grid>,
) -> Result<GriddedDensity, InferenceError> {
    Ok(normalized_likelihood(model, data, grid)?.density)
}

/// [`info_delta`] with no prior input: the input is `integral g ln
/// likelihood` alone and the output uses `ln integral likelihood`.
pub fn info_delta_likelihood_only<M: LikelihoodModel + ?Sized>(
    candidate: &GriddedDensity,
    model: &M,
    data: &Dataset,
) -> Result<InfoReport, InferenceError> {
    let reference = normalized_likelihood(model, data, candidate.grid())?;
    report(candidate, &reference, model, data, None)
}
