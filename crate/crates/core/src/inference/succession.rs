use std::sync::Arc;

use statrs::function::beta::ln_beta;

use crate::models::{bernoulli_model, Dataset};
use crate::numerics::{build_grid, Grid, ParamDomain, Scheme};
use crate::priors::PriorMeasure;

use super::{posterior, InferenceError};

/// Grid size used when a prior has no closed-form moments.
pub const SUCCESSION_GRID_SIZE: usize = 2048;

/// How to treat a posterior that cannot be normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SuccessionMode {
    /// Report the improper posterior as an error.
    #[default]
    Strict,
    /// For the Haldane prior, return the `eps -> 0` limit of the Beta(eps, eps)
    /// answer: 1 for `n >= 1` and 1/2 for `n = 0`.
    HaldaneLimit,
}

/// Probability of a success on trial `n + 1` after `n` successes in `n` trials.
pub fn rule_of_succession(prior: &PriorMeasure, n: u64) -> Result<f64, InferenceError> {
    rule_of_succession_with(prior, n, SuccessionMode::Strict)
}

/// [`rule_of_succession`] with an explicit improper-posterior mode. Beta
/// kernels use exact Beta-function moments; other kernels are integrated on a
/// 2048-node tanh-sinh grid.
pub fn rule_of_succession_with(
    prior: &PriorMeasure,
    n: u64,
    mode: SuccessionMode,
) -> Result<f64, InferenceError> {
    check_unit(prior)?;
    if let Some((a, b)) = prior.beta_shape() {
        return beta_succession(prior, a, b, n, mode);
    }
    let grid = Arc::new(build_grid(&ParamDomain::unit(), SUCCESSION_GRID_SIZE, Scheme::TanhSinh)?);
    rule_of_succession_on(prior, n, &grid, mode)
}

/// [`rule_of_succession`] as a posterior mean on `grid`.
pub fn rule_of_succession_on(
    prior: &PriorMeasure,
    n: u64,
    grid: &Arc<Grid>,
    mode: SuccessionMode,
) -> Result<f64, InferenceError> {
    check_unit(prior)?;
    let data = Dataset::bernoulli(n as usize, 0);
    match posterior(prior, &bernoulli_model(), &data, grid) {
        Ok(post) => post.mean(),
        Err(InferenceError::ImproperPosterior(_))
            if mode == SuccessionMode::HaldaneLimit && prior.beta_shape() == Some((0.0, 0.0)) =>
        {
            Ok(haldane_limit(n))
        }
        Err(e) => Err(e),
    }
}

fn haldane_limit(n: u64) -> f64 {
    if n == 0 {
        0.5
    } else {
        1.0
    }
}

fn check_unit(prior: &PriorMeasure) -> Result<(), InferenceError> {
    let d = prior.domain();
    if d.lower != 0.0 || d.upper != 1.0 {
        return Err(InferenceError::InvalidArgument(format!(
            "the rule of succession needs a prior on [0, 1], {} lives on [{}, {}]",
            prior.label(),
            d.lower,
            d.upper
        )));
    }
    Ok(())
}

/// `(c B(a + n + 1, b) + sum m loc^(n+1)) / (c B(a + n, b) + sum m loc^n)`.
/// The continuous numerator is the denominator term times `(a + n) / (a + n + b)`,
/// so atom-free Beta priors give that ratio exactly.
fn beta_succession(
    prior: &PriorMeasure,
    a: f64,
    b: f64,
    n: u64,
    mode: SuccessionMode,
) -> Result<f64, InferenceError> {
    let nf = n as f64;
    let c = prior.coef();
    if c > 0.0 && !(a + nf > 0.0 && b > 0.0) {
        if mode == SuccessionMode::HaldaneLimit && a == 0.0 && b == 0.0 {
            return Ok(haldane_limit(n));
        }
        return Err(InferenceError::ImproperPosterior(format!(
            "{} after {n} successes in {n} trials",
            prior.label()
        )));
    }
    let ratio = (a + nf) / (a + nf + b);
    let atoms: Vec<_> = prior.atoms().iter().filter(|a| a.mass > 0.0).collect();
    if atoms.is_empty() && c > 0.0 {
        return Ok(ratio);
    }
    let mut den = Vec::new();
    let mut num = Vec::new();
    if c > 0.0 {
        let l = c.ln() + ln_beta(a + nf, b);
        den.push(l);
        num.push(l + ratio.ln());
    }
    for atom in atoms {
        // 0^0 = 1
        let lp = |k: f64| if k == 0.0 { 0.0 } else { k * atom.location.ln() };
        den.push(atom.mass.ln() + lp(nf));
        num.push(atom.mass.ln() + lp(nf + 1.0));
    }
    let den = log_sum_exp(&den);
    if den == f64::NEG_INFINITY {
        return Err(InferenceError::ZeroMarginal);
    }
    Ok((log_sum_exp(&num) - den).exp())
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}
