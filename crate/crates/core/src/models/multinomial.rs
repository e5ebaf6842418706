use crate::numerics::{Abscissa, ParamDomain};

use super::{check_theta, ln_p, ln_q, LikelihoodModel, ModelError, Observation, SampleSpace};

/// A single trial over `k` categories. Coordinates `theta[j - 1]` are the
/// probabilities of categories `j = 1..k`; category 0 takes the remainder,
/// so `k = 2` is the Bernoulli model with category 1 as success.
#[derive(Debug, Clone)]
pub struct MultinomialModel {
    k: usize,
    label: String,
    domains: Vec<ParamDomain>,
}

pub fn multinomial_model(k: usize) -> Result<MultinomialModel, ModelError> {
    if k < 2 {
        return Err(ModelError::InvalidSetup(format!(
            "multinomial needs at least 2 categories, got {k}"
        )));
    }
    Ok(MultinomialModel {
        k,
        label: format!("multinomial-{k}"),
        domains: vec![ParamDomain::unit(); k - 1],
    })
}

impl MultinomialModel {
    pub fn categories(&self) -> usize {
        self.k
    }

    /// Category probabilities, remainder first.
    pub fn probabilities(&self, theta: &[Abscissa]) -> Result<Vec<f64>, ModelError> {
        check_theta(theta, &self.domains)?;
        let rest = self.remainder(theta)?;
        let mut out = Vec::with_capacity(self.k);
        out.push(rest);
        out.extend(theta.iter().map(|a| a.x));
        Ok(out)
    }

    fn remainder(&self, theta: &[Abscissa]) -> Result<f64, ModelError> {
        if self.k == 2 {
            return Ok(theta[0].above);
        }
        let rest = 1.0 - theta.iter().map(|a| a.x).sum::<f64>();
        if rest < -1e-12 {
            return Err(ModelError::ParameterOutOfDomain {
                coord: self.k - 2,
                value: theta[self.k - 2].x,
                domain: "the probability simplex".to_string(),
            });
        }
        Ok(rest.max(0.0))
    }
}

impl LikelihoodModel for MultinomialModel {
    fn label(&self) -> &str {
        &self.label
    }

    fn theta_domain(&self) -> &[ParamDomain] {
        &self.domains
    }

    fn sample_space(&self) -> SampleSpace {
        SampleSpace::Discrete { outcomes: self.k }
    }

    fn accepts(&self, y: &Observation) -> bool {
        matches!(y, Observation::Category(c) if *c < self.k)
    }

    fn per_obs_logdensity(&self, theta: &[Abscissa], y: &Observation) -> Result<f64, ModelError> {
        check_theta(theta, &self.domains)?;
        let c = match y {
            Observation::Category(c) if *c < self.k => *c,
            other => {
                return Err(ModelError::BadObservation {
                    index: 0,
                    observation: other.to_string(),
                    model: self.label.clone(),
                })
            }
        };
        if self.k == 2 {
            return Ok(if c == 1 { ln_p(&theta[0]) } else { ln_q(&theta[0]) });
        }
        if c == 0 {
            Ok(self.remainder(theta)?.ln())
        } else {
            self.remainder(theta)?;
            Ok(ln_p(&theta[c - 1]))
        }
    }
}
