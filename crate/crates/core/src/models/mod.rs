//! Likelihood models: Bernoulli, multinomial, zero-mean bivariate normal with
//! unknown correlation, and the AR(1) process conditional on its first value.
//!
//! Parameters are passed as [`Abscissa`] slices so that models can evaluate
//! `ln p` and `ln (1 - p)` from whichever endpoint gap is small.

mod ar1;
mod bernoulli;
mod correlation;
mod dataset;
mod information;
mod multinomial;

use std::fmt;

use thiserror::Error;

use crate::numerics::{pairwise_sum, Abscissa, NumericsError, ParamDomain};

pub use ar1::{ar1_model, simulate_ar1, Ar1Model};
pub use bernoulli::{bernoulli_model, BernoulliModel};
pub use correlation::{correlation_model, CorrelationModel};
pub use dataset::{Dataset, DatasetParseError, ModelFamily};
pub use information::{
    data_density_information, fisher_information, fisher_information_at,
    quadrature_information, sample_space_integral, DEFAULT_FD_STEP,
};
pub use multinomial::{multinomial_model, MultinomialModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parameter {coord} = {value} outside {domain}")]
    ParameterOutOfDomain {
        coord: usize,
        value: f64,
        domain: String,
    },
    #[error("parameter {coord} = {value} sits on a singular boundary")]
    SingularBoundary { coord: usize, value: f64 },
    #[error("expected {expected} parameter coordinates, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("observation {index} ({observation}) is outside the sample space of {model}")]
    BadObservation {
        index: usize,
        observation: String,
        model: String,
    },
    #[error("dataset is labelled '{found}' but the model is '{expected}'")]
    LabelMismatch { expected: String, found: String },
    #[error("invalid model setup: {0}")]
    InvalidSetup(String),
    #[error("finite-difference step {step} outside [1e-6, 1e-3]")]
    InvalidStep { step: f64 },
    #[error("theta = {theta} is within 2h = {} of a boundary", 2.0 * step)]
    TooCloseToBoundary { theta: f64, step: f64 },
    #[error("operation needs a one-parameter model, {model} has {dim}")]
    NotScalar { model: String, dim: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// One observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observation {
    /// A category index (Bernoulli: 1 = success, 0 = failure).
    Category(usize),
    Value(f64),
    Pair(f64, f64),
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Category(k) => write!(f, "{k}"),
            Observation::Value(v) => write!(f, "{v}"),
            Observation::Pair(a, b) => write!(f, "{a},{b}"),
        }
    }
}

/// The space a single observation lives in.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleSpace {
    /// Categories `0..outcomes`.
    Discrete { outcomes: usize },
    /// `dims` real coordinates, each ranging over `support`. When
    /// `conditional` is set the density of an observation is conditional on
    /// the previous one.
    Continuous {
        support: ParamDomain,
        dims: usize,
        conditional: bool,
    },
}

/// A parametric sampling model.
pub trait LikelihoodModel: fmt::Debug + Send + Sync {
    fn label(&self) -> &str;

    /// One domain per parameter coordinate.
    fn theta_domain(&self) -> &[ParamDomain];

    fn sample_space(&self) -> SampleSpace;

    /// `ln f(y | theta)` for one observation.
    fn per_obs_logdensity(&self, theta: &[Abscissa], y: &Observation) -> Result<f64, ModelError>;

    /// Whether `y` belongs to the sample space.
    fn accepts(&self, y: &Observation) -> bool;

    /// Log-likelihood of a whole dataset; independent observations unless
    /// the model says otherwise.
    fn loglik(&self, theta: &[Abscissa], data: &Dataset) -> Result<f64, ModelError> {
        self.check_dataset(data)?;
        let terms = data
            .observations()
            .iter()
            .map(|y| self.per_obs_logdensity(theta, y))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(pairwise_sum(&terms))
    }

    /// `integral f ln f` over the sample space when a closed form is known.
    fn closed_form_information(&self, _theta: &[Abscissa]) -> Option<f64> {
        None
    }

    /// Truncated box for continuous sample-space quadrature.
    fn sample_box(&self, _theta: &[Abscissa]) -> Vec<(f64, f64)> {
        Vec::new()
    }

    /// Observation at quadrature coordinates of [`LikelihoodModel::sample_box`].
    fn observation_at(&self, coords: &[f64]) -> Observation {
        match coords {
            [v] => Observation::Value(*v),
            [a, b, ..] => Observation::Pair(*a, *b),
            [] => Observation::Category(0),
        }
    }

    fn dim(&self) -> usize {
        self.theta_domain().len()
    }

    /// Abscissae for the given coordinates, gaps measured against the domain.
    fn point(&self, coords: &[f64]) -> Vec<Abscissa> {
        coords
            .iter()
            .zip(self.theta_domain())
            .map(|(&x, d)| Abscissa::in_domain(x, d))
            .collect()
    }

    fn check_dataset(&self, data: &Dataset) -> Result<(), ModelError> {
        if data.model_label() != self.label() {
            return Err(ModelError::LabelMismatch {
                expected: self.label().to_string(),
                found: data.model_label().to_string(),
            });
        }
        for (index, y) in data.observations().iter().enumerate() {
            if !self.accepts(y) {
                return Err(ModelError::BadObservation {
                    index,
                    observation: y.to_string(),
                    model: self.label().to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Checks dimension and domain membership of a parameter point.
pub(crate) fn check_theta(
    theta: &[Abscissa],
    domains: &[ParamDomain],
) -> Result<(), ModelError> {
    if theta.len() != domains.len() {
        return Err(ModelError::Dimension {
            expected: domains.len(),
            found: theta.len(),
        });
    }
    for (coord, (a, d)) in theta.iter().zip(domains).enumerate() {
        let inside_lower = if d.lower_open { a.below > 0.0 } else { a.below >= 0.0 };
        let inside_upper = if d.upper_open { a.above > 0.0 } else { a.above >= 0.0 };
        if !(inside_lower && inside_upper) || a.x.is_nan() {
            return Err(ModelError::ParameterOutOfDomain {
                coord,
                value: a.x,
                domain: format!(
                    "{}{}, {}{}",
                    if d.lower_open { '(' } else { '[' },
                    d.lower,
                    d.upper,
                    if d.upper_open { ')' } else { ']' }
                ),
            });
        }
    }
    Ok(())
}

/// `ln p` for a point of `[0, 1]`, taken from the smaller gap.
pub(crate) fn ln_p(a: &Abscissa) -> f64 {
    if a.below <= a.above {
        a.below.ln()
    } else {
        (-a.above).ln_1p()
    }
}

/// `ln (1 - p)` for a point of `[0, 1]`, taken from the smaller gap.
pub(crate) fn ln_q(a: &Abscissa) -> f64 {
    if a.below <= a.above {
        (-a.below).ln_1p()
    } else {
        a.above.ln()
    }
}

/// `1 - x^2` for a point of `(-1, 1)`.
pub(crate) fn one_minus_square(a: &Abscissa) -> f64 {
    a.below * a.above
}
