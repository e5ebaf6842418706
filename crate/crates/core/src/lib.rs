//! Noninformative priors for canonical likelihood models.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: parameter domains, quadrature grids (midpoint, Gauss-Legendre,
//!   tanh-sinh), adaptive integration and Shannon-information primitives.
//! - [`models`]: Bernoulli, multinomial, bivariate-normal correlation and
//!   conditional AR(1) likelihoods, with sampling-distribution information and
//!   finite-difference Fisher information.
//! - [`priors`]: Laplace uniform, Haldane, Beta, Jeffreys-rule, maximal data
//!   information (MDIP), lump-augmented uniform and the two AR(1) kernels.
//! - [`inference`]: grid posteriors with point atoms, the rule of succession and
//!   the information-processing efficiency report.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod inference;
pub mod models;
pub mod numerics;
pub mod priors;

pub use inference::{
    ar1_posterior_b, info_delta, info_delta_likelihood_only, likelihood_only_output,
    optimal_output, posterior, rule_of_succession, rule_of_succession_on, rule_of_succession_with,
    Ar1PriorKind, InferenceError, InfoReport, PosteriorResult, SuccessionMode,
};
pub use models::{
    ar1_model, bernoulli_model, correlation_model, data_density_information, fisher_information,
    multinomial_model, Dataset, LikelihoodModel, ModelError, Observation, SampleSpace,
};

pub use numerics::{
    adaptive_integrate, build_grid, integrate, integrate_fn, kl_divergence, shannon_neg_entropy,
    Abscissa, Grid, GriddedDensity, NumericsError, ParamDomain, Scheme,
};
pub use priors::{
    haldane_prior, jeffreys_mixed_prior, jeffreys_rule_prior, laplace_uniform, mdip_prior,
    normalize, PriorError, PriorMeasure,
};
