use std::f64::consts::{E, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::numerics::{pairwise_sum, Abscissa, ParamDomain};

use super::{check_theta, Dataset, LikelihoodModel, ModelError, Observation, SampleSpace};

const TRUNCATION_SDS: f64 = 8.0;

/// `y_t = b y_{t-1} + sigma e_t` with `|b| < 1`, Gaussian `e_t`, likelihood
/// conditional on `y_1`.
///
/// Parameters are `(b, sigma)`. A single observation is the transition
/// `Pair(y_{t-1}, y_t)`; a dataset is the series itself as `Value`s.
#[derive(Debug, Clone)]
pub struct Ar1Model {
    len: usize,
    domains: [ParamDomain; 2],
}

pub fn ar1_model(len: usize) -> Result<Ar1Model, ModelError> {
    if len < 2 {
        return Err(ModelError::InvalidSetup(format!(
            "an AR(1) series needs at least 2 values, got {len}"
        )));
    }
    Ok(Ar1Model {
        len,
        domains: [ParamDomain::symmetric_singular(), ParamDomain::positive()],
    })
}

impl Ar1Model {
    pub fn series_len(&self) -> usize {
        self.len
    }

    fn slope_and_scale(&self, theta: &[Abscissa]) -> Result<(f64, f64), ModelError> {
        check_theta(theta, &self.domains)?;
        Ok((theta[0].x, theta[1].x))
    }
}

fn log_normal(y: f64, mean: f64, sigma: f64) -> f64 {
    let z = (y - mean) / sigma;
    -0.5 * (2.0 * PI).ln() - sigma.ln() - 0.5 * z * z
}

impl LikelihoodModel for Ar1Model {
    fn label(&self) -> &str {
        "ar1"
    }

    fn theta_domain(&self) -> &[ParamDomain] {
        &self.domains
    }

    fn sample_space(&self) -> SampleSpace {
        SampleSpace::Continuous {
            support: ParamDomain::real_line(),
            dims: 1,
            conditional: true,
        }
    }

    fn accepts(&self, y: &Observation) -> bool {
        match y {
            Observation::Value(v) => v.is_finite(),
            Observation::Pair(a, b) => a.is_finite() && b.is_finite(),
            Observation::Category(_) => false,
        }
    }

    fn per_obs_logdensity(&self, theta: &[Abscissa], y: &Observation) -> Result<f64, ModelError> {
        let (b, sigma) = self.slope_and_scale(theta)?;
        match y {
            Observation::Pair(prev, cur) => Ok(log_normal(*cur, b * prev, sigma)),
            other => Err(ModelError::BadObservation {
                index: 0,
                observation: other.to_string(),
                model: self.label().to_string(),
            }),
        }
    }

    /// `sum_{t >= 2} ln N(y_t; b y_{t-1}, sigma^2)`.
    fn loglik(&self, theta: &[Abscissa], data: &Dataset) -> Result<f64, ModelError> {
        let (b, sigma) = self.slope_and_scale(theta)?;
        self.check_dataset(data)?;
        let series = data.values()?;
        if series.len() != self.len {
            return Err(ModelError::InvalidSetup(format!(
                "model expects a series of {} values, dataset has {}",
                self.len,
                series.len()
            )));
        }
        let terms: Vec<f64> = series
            .windows(2)
            .map(|w| log_normal(w[1], b * w[0], sigma))
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// Conditional information `-ln(2 pi e sigma^2) / 2`; free of `b`.
    fn closed_form_information(&self, theta: &[Abscissa]) -> Option<f64> {
        let (_, sigma) = self.slope_and_scale(theta).ok()?;
        Some(-0.5 * (2.0 * PI * E * sigma * sigma).ln())
    }

    /// Transitions out of `y_{t-1} = 0`.
    fn sample_box(&self, theta: &[Abscissa]) -> Vec<(f64, f64)> {
        let sigma = theta.get(1).map_or(1.0, |a| a.x);
        vec![(-TRUNCATION_SDS * sigma, TRUNCATION_SDS * sigma)]
    }

    fn observation_at(&self, coords: &[f64]) -> Observation {
        Observation::Pair(0.0, coords[0])
    }
}

/// Simulates `len` values of a stationary AR(1) series; `y_1` is drawn from
/// the stationary law `N(0, sigma^2 / (1 - b^2))`.
pub fn simulate_ar1(len: usize, b: f64, sigma: f64, seed: u64) -> Result<Dataset, ModelError> {
    if !(b.abs() < 1.0) {
        return Err(ModelError::InvalidSetup(format!("|b| must be below 1, got {b}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(ModelError::InvalidSetup(format!("sigma must be positive, got {sigma}")));
    }
    if len < 2 {
        return Err(ModelError::InvalidSetup(format!("series length {len} below 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Vec::with_capacity(len);
    let z: f64 = StandardNormal.sample(&mut rng);
    let mut y = z * sigma / (1.0 - b * b).sqrt();
    series.push(y);
    for _ in 1..len {
        let e: f64 = StandardNormal.sample(&mut rng);
        y = b * y + sigma * e;
        series.push(y);
    }
    Ok(Dataset::series("ar1", series))
}
