use crate::numerics::{Abscissa, ParamDomain};

use super::{check_theta, ln_p, ln_q, Dataset, LikelihoodModel, ModelError, Observation, SampleSpace};

/// A single success/failure trial with success probability `p` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct BernoulliModel {
    domain: [ParamDomain; 1],
}

pub fn bernoulli_model() -> BernoulliModel {
    BernoulliModel {
        domain: [ParamDomain::unit()],
    }
}

impl LikelihoodModel for BernoulliModel {
    fn label(&self) -> &str {
        "bernoulli"
    }

    fn theta_domain(&self) -> &[ParamDomain] {
        &self.domain
    }

    fn sample_space(&self) -> SampleSpace {
        SampleSpace::Discrete { outcomes: 2 }
    }

    fn accepts(&self, y: &Observation) -> bool {
        matches!(y, Observation::Category(0 | 1))
    }

    fn per_obs_logdensity(&self, theta: &[Abscissa], y: &Observation) -> Result<f64, ModelError> {
        check_theta(theta, &self.domain)?;
        let p = &theta[0];
        match y {
            Observation::Category(1) => Ok(ln_p(p)),
            Observation::Category(0) => Ok(ln_q(p)),
            other => Err(ModelError::BadObservation {
                index: 0,
                observation: other.to_string(),
                model: self.label().to_string(),
            }),
        }
    }

    /// `s ln p + f ln (1 - p)`; a zero count contributes nothing even at the
    /// boundary where its logarithm diverges.
    fn loglik(&self, theta: &[Abscissa], data: &Dataset) -> Result<f64, ModelError> {
        check_theta(theta, &self.domain)?;
        self.check_dataset(data)?;
        let (s, f) = data.success_failure_counts();
        let p = &theta[0];
        let mut ll = 0.0;
        if s > 0 {
            ll += s as f64 * ln_p(p);
        }
        if f > 0 {
            ll += f as f64 * ln_q(p);
        }
        Ok(ll)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_observation_log_densities() {
        let m = bernoulli_model();
        let half = m.point(&[0.5]);
        let ll = m.per_obs_logdensity(&half, &Observation::Category(1)).unwrap();
        assert_eq!(ll, 0.5f64.ln());
        let p = m.point(&[0.3]);
        let total: f64 = [0, 1]
            .iter()
            .map(|&y| m.per_obs_logdensity(&p, &Observation::Category(y)).unwrap().exp())
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn all_successes() {
        let m = bernoulli_model();
        let d = Dataset::bernoulli(5, 0);
        let p = m.point(&[0.7]);
        assert!((m.loglik(&p, &d).unwrap() - 5.0 * 0.7f64.ln()).abs() < 1e-14);
        // p = 1 is admissible and the failure term is absent
        assert_eq!(m.loglik(&m.point(&[1.0]), &d).unwrap(), 0.0);
        assert_eq!(m.loglik(&m.point(&[0.0]), &d).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn rejects_out_of_domain_and_bad_outcomes() {
        let m = bernoulli_model();
        assert!(m.per_obs_logdensity(&m.point(&[1.5]), &Observation::Category(1)).is_err());
        assert!(m.per_obs_logdensity(&m.point(&[0.5]), &Observation::Category(2)).is_err());
        let two = vec![Abscissa::in_domain(0.5, &ParamDomain::unit()); 2];
        assert!(m.loglik(&two, &Dataset::bernoulli(1, 1)).is_err());
        let wrong = Dataset::new("correlation", vec![Observation::Pair(0.0, 0.0)]);
        assert!(matches!(
            m.loglik(&m.point(&[0.5]), &wrong),
            Err(ModelError::LabelMismatch { .. })
        ));
    }
}
