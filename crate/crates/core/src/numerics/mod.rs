//! Domains, quadrature grids, adaptive integration and Shannon-information
//! primitives. Every function here is pure.

mod domain;
mod grid;
mod information;
mod quadrature;
mod sum;

use thiserror::Error;

pub use domain::{Abscissa, Endpoint, ParamDomain};
pub use grid::{build_grid, build_grid_with, Accuracy, Grid, Scheme, DEFAULT_GRID_SIZE};
pub use information::{kl_divergence, shannon_neg_entropy, GriddedDensity, NORMALIZATION_TOL};
pub use quadrature::{
    adaptive_integrate, adaptive_integrate_at, diverges_at_ends, integrate_at, integrate_fn, integrate_values,
    Estimate, DEFAULT_REL_TOL, MAX_NODES,
};
pub use sum::pairwise_sum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("a grid needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("unknown quadrature scheme '{0}'")]
    UnknownScheme(String),
    #[error("scheme {scheme} not allowed: {reason}")]
    SchemeNotAllowed { scheme: Scheme, reason: &'static str },
    #[error("expected {expected} node values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite value {value} at node {index} (x = {node})")]
    NonFinite { index: usize, node: f64, value: f64 },
    #[error("density value {value} at node {index} (x = {node}) is not a finite nonnegative number")]
    NegativeDensity { index: usize, node: f64, value: f64 },
    #[error("relative tolerance {0} outside (0, 1e-2]")]
    InvalidTolerance(f64),
    #[error("no convergence after {nodes} nodes: last estimate {estimate}, relative change {achieved}")]
    NoConvergence { estimate: f64, achieved: f64, nodes: usize },
    #[error("density is not normalized (mass {0})")]
    NotNormalized(f64),
    #[error("cannot normalize a density of mass {0}")]
    NotNormalizable(f64),
    #[error("densities live on different grids")]
    GridMismatch,
    #[error("support violation at node {index} (x = {node}): first density positive, second zero")]
    SupportViolation { index: usize, node: f64 },
}

/// `integral f` for a tabulated density.
pub fn integrate(f: &GriddedDensity) -> Result<f64, NumericsError> {
    f.mass()
}
