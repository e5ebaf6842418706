use std::sync::Arc;

use crate::models::{ar1_model, Dataset, LikelihoodModel};
use crate::numerics::{Abscissa, Grid, ParamDomain};
use crate::priors::{ar1_slope_prior, Ar1PriorKind};

use super::{check_grid, grid_posterior, InferenceError, PosteriorResult};

/// Posterior over the AR(1) slope `b` at known `sigma`, under the chosen
/// closed-form prior kernel and the likelihood conditional on `y_1`.
pub fn ar1_posterior_b(
    data: &Dataset,
    sigma: f64,
    kind: Ar1PriorKind,
    grid: &Arc<Grid>,
) -> Result<PosteriorResult, InferenceError> {
    let prior = ar1_slope_prior(kind, sigma)?;
    check_grid(grid, prior.domain())?;
    let model = ar1_model(data.len())?;
    model.check_dataset(data)?;
    let s = Abscissa::in_domain(sigma, &ParamDomain::positive());
    grid_posterior(
        &prior,
        grid,
        |b| model.loglik(&[*b, s], data),
        format!("{} values, sigma = {sigma}", data.len()),
    )
}
