//! Grid posteriors with atoms, the rule of succession, and the
//! information-processing report comparing output and input information.

mod ar1;
mod efficiency;
mod perturb;
mod succession;

use std::sync::Arc;

use thiserror::Error;

use crate::models::{Dataset, LikelihoodModel, ModelError};
use crate::numerics::{
    diverges_at_ends, pairwise_sum, Abscissa, Grid, GriddedDensity, NumericsError, ParamDomain,
};
use crate::priors::{Atom, PriorError, PriorMeasure};

pub use crate::priors::Ar1PriorKind;
pub use ar1::ar1_posterior_b;
pub use efficiency::{
    info_delta, info_delta_likelihood_only, likelihood_only_output, optimal_output, InfoReport,
    EFFICIENCY_TOL,
};
pub use perturb::random_candidates;
pub use succession::{
    rule_of_succession, rule_of_succession_on, rule_of_succession_with, SuccessionMode,
    SUCCESSION_GRID_SIZE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("the data have zero probability under the whole prior")]
    ZeroMarginal,
    #[error("improper posterior: {0}")]
    ImproperPosterior(String),
    #[error("{0} has atoms; information functionals need a purely continuous prior")]
    AtomsNotSupported(String),
    #[error("{0} is not a proper prior")]
    ImproperPrior(String),
    #[error("candidate density is not normalized (mass {0})")]
    NotNormalized(f64),
    #[error("candidate is positive at node {index} (theta = {node}) where the posterior vanishes")]
    SupportViolation { index: usize, node: f64 },
    #[error("prior kernel value {value} at node {index} (theta = {node}) is not finite")]
    NonFinitePrior { index: usize, node: f64, value: f64 },
    #[error("grid spans [{lower}, {upper}], which is not the parameter domain")]
    DomainMismatch { lower: f64, upper: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Prior(#[from] PriorError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A posterior measure on a grid: the continuous part tabulated on the grid,
/// posterior atom masses, and the marginal probability of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorResult {
    /// Continuous part; together with the atoms it has mass one.
    pub density: GriddedDensity,
    pub atoms: Vec<Atom>,
    /// `integral prior * likelihood`, scaled like the prior when the prior is
    /// not normalized.
    pub marginal: f64,
    /// `ln marginal`, finite even when `marginal` underflows.
    pub log_marginal: f64,
    pub prior_label: String,
    pub data_summary: String,
    /// Whether the prior had unit mass, so that `marginal` is a probability.
    pub prior_normalized: bool,
}

impl PosteriorResult {
    pub fn grid(&self) -> &Arc<Grid> {
        self.density.grid()
    }

    /// Atoms plus the continuous mass.
    pub fn total_mass(&self) -> Result<f64, InferenceError> {
        Ok(self.density.mass()? + self.atoms.iter().map(|a| a.mass).sum::<f64>())
    }

    /// `k`-th raw moment of the whole posterior measure.
    pub fn moment(&self, k: i32) -> Result<f64, InferenceError> {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * a.location.powi(k)).sum();
        Ok(self.density.moment(k)? + atoms)
    }

    pub fn mean(&self) -> Result<f64, InferenceError> {
        self.moment(1)
    }

    pub fn sd(&self) -> Result<f64, InferenceError> {
        let m = self.mean()?;
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.mass * (a.location - m) * (a.location - m))
            .sum();
        let v: Vec<f64> = self
            .density
            .values()
            .iter()
            .zip(self.density.nodes())
            .map(|(g, x)| g * (x - m) * (x - m))
            .collect();
        let cont = crate::numerics::integrate_values(self.grid(), &v)?;
        Ok((cont + atoms).max(0.0).sqrt())
    }

    /// The posterior as a prior for further data.
    pub fn to_prior(&self) -> Result<PriorMeasure, InferenceError> {
        Ok(PriorMeasure::tabulated(
            format!("posterior({})", self.prior_label),
            self.grid().clone(),
            self.density.values().to_vec(),
            self.atoms.clone(),
        )?)
    }
}

/// Checks that `grid` spans `domain`.
pub(crate) fn check_grid(grid: &Grid, domain: &ParamDomain) -> Result<(), InferenceError> {
    let g = grid.domain();
    if g.lower != domain.lower || g.upper != domain.upper {
        return Err(InferenceError::DomainMismatch {
            lower: g.lower,
            upper: g.upper,
        });
    }
    Ok(())
}

/// `prior * exp(loglik)` normalized on `grid`, with each atom reweighted by
/// the likelihood at its location.
pub(crate) fn grid_posterior(
    prior: &PriorMeasure,
    grid: &Arc<Grid>,
    loglik: impl Fn(&Abscissa) -> Result<f64, ModelError>,
    data_summary: String,
) -> Result<PosteriorResult, InferenceError> {
    check_grid(grid, prior.domain())?;
    let log_post = |a: &Abscissa, index: usize| -> Result<f64, InferenceError> {
        let d = prior.density_at(a);
        if !(d >= 0.0 && d.is_finite()) {
            return Err(InferenceError::NonFinitePrior {
                index,
                node: a.x,
                value: d,
            });
        }
        if d == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let l = loglik(a)?;
        if l.is_nan() || l == f64::INFINITY {
            return Err(ModelError::InvalidSetup(format!("log-likelihood {l} at theta = {}", a.x)).into());
        }
        Ok(d.ln() + l)
    };
    let node_logs = grid
        .abscissae()
        .enumerate()
        .map(|(i, a)| log_post(&a, i))
        .collect::<Result<Vec<_>, _>>()?;
    let domain = *prior.domain();
    let atom_logs = prior
        .atoms()
        .iter()
        .map(|atom| {
            if atom.mass == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            Ok(atom.mass.ln() + loglik(&Abscissa::in_domain(atom.location, &domain))?)
        })
        .collect::<Result<Vec<_>, InferenceError>>()?;
    let shift = node_logs
        .iter()
        .chain(&atom_logs)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return Err(InferenceError::ZeroMarginal);
    }
    if !prior.is_proper() {
        let kernel = |a: &Abscissa| -> f64 {
            let d = prior.density_at(a);
            if d == 0.0 {
                return 0.0;
            }
            match loglik(a) {
                Ok(l) => (d.ln() + l - shift).exp(),
                Err(_) => f64::NAN,
            }
        };
        if diverges_at_ends(kernel, &domain) {
            return Err(InferenceError::ImproperPosterior(format!(
                "{} times the likelihood of {} has infinite mass",
                prior.label(),
                data_summary
            )));
        }
    }
    let scaled: Vec<f64> = node_logs.iter().map(|l| (l - shift).exp()).collect();
    let atoms_scaled: Vec<f64> = atom_logs.iter().map(|l| (l - shift).exp()).collect();
    let cont = crate::numerics::integrate_values(grid, &scaled)?;
    let z = cont + pairwise_sum(&atoms_scaled);
    if !(z > 0.0 && z.is_finite()) {
        return Err(InferenceError::ZeroMarginal);
    }
    let density = GriddedDensity::new(grid.clone(), scaled.iter().map(|v| v / z).collect())?;
    let atoms = prior
        .atoms()
        .iter()
        .zip(&atoms_scaled)
        .map(|(a, m)| Atom {
            location: a.location,
            mass: m / z,
        })
        .collect();
    let log_marginal = shift + z.ln();
    Ok(PosteriorResult {
        density,
        atoms,
        marginal: log_marginal.exp(),
        log_marginal,
        prior_label: prior.label().to_string(),
        data_summary,
        prior_normalized: prior.is_proper(),
    })
}

pub(crate) fn summarize(data: &Dataset) -> String {
    if data.model_label() == "bernoulli" {
        let (s, f) = data.success_failure_counts();
        format!("{s} successes, {f} failures")
    } else {
        format!("{} observations ({})", data.len(), data.model_label())
    }
}

/// Grid posterior of a one-parameter model.
pub fn posterior<M: LikelihoodModel + ?Sized>(
    prior: &PriorMeasure,
    model: &M,
    data: &Dataset,
    grid: &Arc<Grid>,
) -> Result<PosteriorResult, InferenceError> {
    let domain = match model.theta_domain() {
        [d] => *d,
        ds => {
            return Err(ModelError::NotScalar {
                model: model.label().to_string(),
                dim: ds.len(),
            }
            .into())
        }
    };
    check_grid(grid, &domain)?;
    model.check_dataset(data)?;
    grid_posterior(
        prior,
        grid,
        |a| model.loglik(std::slice::from_ref(a), data),
        summarize(data),
    )
}
