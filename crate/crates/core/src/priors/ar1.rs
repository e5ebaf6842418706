use std::fmt;
use std::str::FromStr;

use crate::models::one_minus_square;
use crate::numerics::{Abscissa, ParamDomain};

use super::{PriorError, PriorMeasure};

/// The two closed-form AR(1) priors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ar1PriorKind {
    /// `(1 - b^2)^(1/2) / sigma`
    Mdip,
    /// `1 / ((1 - b^2)^(1/2) sigma)`
    Jeffreys,
}

impl fmt::Display for Ar1PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ar1PriorKind::Mdip => "mdip",
            Ar1PriorKind::Jeffreys => "jeffreys",
        })
    }
}

impl FromStr for Ar1PriorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mdip" => Ok(Ar1PriorKind::Mdip),
            "jeffreys" => Ok(Ar1PriorKind::Jeffreys),
            other => Err(format!("unknown AR(1) prior '{other}'")),
        }
    }
}

fn check(b: &Abscissa, sigma: f64) -> Result<f64, PriorError> {
    if !(b.below > 0.0 && b.above > 0.0) || b.x.is_nan() {
        return Err(PriorError::InvalidParameter(format!("|b| must be below 1, got {}", b.x)));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(PriorError::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    Ok(one_minus_square(b).sqrt())
}

/// [`mdip_ar1_density`] with `b` given through its gaps to `-1` and `1`.
pub fn mdip_ar1_density_at(b: &Abscissa, sigma: f64) -> Result<f64, PriorError> {
    Ok(check(b, sigma)? / sigma)
}

/// [`jeffreys_ar1_density`] with `b` given through its gaps to `-1` and `1`.
pub fn jeffreys_ar1_density_at(b: &Abscissa, sigma: f64) -> Result<f64, PriorError> {
    Ok(1.0 / (check(b, sigma)? * sigma))
}

/// Unnormalized MDIP kernel `(1 - b^2)^(1/2) / sigma`.
pub fn mdip_ar1_density(b: f64, sigma: f64) -> Result<f64, PriorError> {
    mdip_ar1_density_at(&Abscissa::in_domain(b, &ParamDomain::symmetric_singular()), sigma)
}

/// Unnormalized Jeffreys kernel `1 / ((1 - b^2)^(1/2) sigma)`.
pub fn jeffreys_ar1_density(b: f64, sigma: f64) -> Result<f64, PriorError> {
    jeffreys_ar1_density_at(&Abscissa::in_domain(b, &ParamDomain::symmetric_singular()), sigma)
}

/// The kernel of `kind` as an unnormalized measure over `b` at fixed `sigma`.
pub fn ar1_slope_prior(kind: Ar1PriorKind, sigma: f64) -> Result<PriorMeasure, PriorError> {
    check(&Abscissa::in_domain(0.0, &ParamDomain::symmetric_singular()), sigma)?;
    let domain = ParamDomain::symmetric_singular();
    let label = format!("{kind}-ar1");
    Ok(match kind {
        Ar1PriorKind::Mdip => PriorMeasure::from_kernel(label, domain, move |b| {
            mdip_ar1_density_at(b, sigma).unwrap_or(0.0)
        }),
        Ar1PriorKind::Jeffreys => PriorMeasure::from_kernel(label, domain, move |b| {
            jeffreys_ar1_density_at(b, sigma).unwrap_or(f64::INFINITY)
        }),
    })
}
