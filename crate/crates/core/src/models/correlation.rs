use std::f64::consts::{E, PI};

use crate::numerics::{Abscissa, ParamDomain};

use super::{check_theta, one_minus_square, LikelihoodModel, ModelError, Observation, SampleSpace};

/// Half-width of the truncated sample space, in standard deviations.
const TRUNCATION_SDS: f64 = 8.0;

/// Pairs `(y1, y2)` from a zero-mean bivariate normal with common standard
/// deviation `scale` and unknown correlation `rho` in `(-1, 1)`.
///
/// `scale` other than 1 describes the same data after multiplying both
/// coordinates by `scale`.
#[derive(Debug, Clone)]
pub struct CorrelationModel {
    scale: f64,
    domain: [ParamDomain; 1],
}

pub fn correlation_model() -> CorrelationModel {
    CorrelationModel {
        scale: 1.0,
        domain: [ParamDomain::symmetric_singular()],
    }
}

impl CorrelationModel {
    /// The model for data rescaled by a common factor `a > 0`.
    pub fn rescaled(&self, a: f64) -> Result<Self, ModelError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(ModelError::InvalidSetup(format!("scale must be positive, got {a}")));
        }
        Ok(CorrelationModel {
            scale: self.scale * a,
            domain: self.domain,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl LikelihoodModel for CorrelationModel {
    fn label(&self) -> &str {
        "correlation"
    }

    fn theta_domain(&self) -> &[ParamDomain] {
        &self.domain
    }

    fn sample_space(&self) -> SampleSpace {
        SampleSpace::Continuous {
            support: ParamDomain::real_line(),
            dims: 2,
            conditional: false,
        }
    }

    fn accepts(&self, y: &Observation) -> bool {
        matches!(y, Observation::Pair(a, b) if a.is_finite() && b.is_finite())
    }

    fn per_obs_logdensity(&self, theta: &[Abscissa], y: &Observation) -> Result<f64, ModelError> {
        check_theta(theta, &self.domain)?;
        let (y1, y2) = match y {
            Observation::Pair(a, b) if a.is_finite() && b.is_finite() => (*a, *b),
            other => {
                return Err(ModelError::BadObservation {
                    index: 0,
                    observation: other.to_string(),
                    model: self.label().to_string(),
                })
            }
        };
        let rho = theta[0].x;
        let det = one_minus_square(&theta[0]);
        let (u1, u2) = (y1 / self.scale, y2 / self.scale);
        let quad = (u1 * u1 - 2.0 * rho * u1 * u2 + u2 * u2) / det;
        Ok(-(2.0 * PI).ln() - 2.0 * self.scale.ln() - 0.5 * det.ln() - 0.5 * quad)
    }

    /// `-ln(2 pi e) - ln(1 - rho^2) / 2 - ln(scale^2)`
    fn closed_form_information(&self, theta: &[Abscissa]) -> Option<f64> {
        check_theta(theta, &self.domain).ok()?;
        let det = one_minus_square(&theta[0]);
        Some(-(2.0 * PI * E).ln() - 0.5 * det.ln() - 2.0 * self.scale.ln())
    }

    fn sample_box(&self, _theta: &[Abscissa]) -> Vec<(f64, f64)> {
        let r = TRUNCATION_SDS * self.scale;
        vec![(-r, r), (-r, r)]
    }
}
