use std::fmt;
use std::str::FromStr;

use objprior::models::{bernoulli_model, correlation_model};
use objprior::priors::beta_prior;
use objprior::{
    haldane_prior, jeffreys_mixed_prior, jeffreys_rule_prior, laplace_uniform, mdip_prior, Grid,
    ParamDomain, PriorMeasure, Scheme,
};

use crate::{LumpArgs, Record};

/// Demonstration lump mass used when `--k0` or `--k1` is omitted.
pub const DEMO_LUMP: f64 = 0.25;

/// One-parameter models reachable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Bernoulli,
    Correlation,
}

impl FromStr for ModelChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bernoulli" | "multinomial-2" => Ok(ModelChoice::Bernoulli),
            "correlation" => Ok(ModelChoice::Correlation),
            other => Err(format!("unknown model '{other}' (expected bernoulli or correlation)")),
        }
    }
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelChoice::Bernoulli => "bernoulli",
            ModelChoice::Correlation => "correlation",
        })
    }
}

impl ModelChoice {
    pub fn domain(&self) -> ParamDomain {
        match self {
            ModelChoice::Bernoulli => ParamDomain::unit(),
            ModelChoice::Correlation => ParamDomain::symmetric_singular(),
        }
    }

    pub fn default_scheme(&self) -> Scheme {
        Scheme::TanhSinh
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorKind {
    Uniform,
    Haldane,
    Jeffreys,
    Mdip,
    Mixed,
    Beta(f64, f64),
}

impl FromStr for PriorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "uniform" | "laplace" => Ok(PriorKind::Uniform),
            "haldane" => Ok(PriorKind::Haldane),
            "jeffreys" => Ok(PriorKind::Jeffreys),
            "mdip" => Ok(PriorKind::Mdip),
            "mixed" => Ok(PriorKind::Mixed),
            other => {
                let bad = || format!("unknown prior kind '{other}'");
                let rest = other.strip_prefix("beta:").ok_or_else(bad)?;
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                let a: f64 = a.parse().map_err(|_| bad())?;
                let b: f64 = b.parse().map_err(|_| bad())?;
                if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
                    Ok(PriorKind::Beta(a, b))
                } else {
                    Err(format!("beta shapes must be positive, got {a}, {b}"))
                }
            }
        }
    }
}

impl fmt::Display for PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorKind::Uniform => f.write_str("uniform"),
            PriorKind::Haldane => f.write_str("haldane"),
            PriorKind::Jeffreys => f.write_str("jeffreys"),
            PriorKind::Mdip => f.write_str("mdip"),
            PriorKind::Mixed => f.write_str("mixed"),
            PriorKind::Beta(a, b) => write!(f, "beta:{a}:{b}"),
        }
    }
}

/// Lump masses, with the demonstration default and a warning record for any
/// that were not given.
pub fn lump_masses(lumps: &LumpArgs, records: &mut Vec<Record>) -> (f64, f64) {
    if lumps.k0.is_none() || lumps.k1.is_none() {
        records.push(Record::warning(format!(
            "lump mass defaulted to {DEMO_LUMP}: a demonstration convention, no published value exists"
        )));
    }
    (lumps.k0.unwrap_or(DEMO_LUMP), lumps.k1.unwrap_or(DEMO_LUMP))
}

/// Builds `kind` for `model`; grid-normalized kinds use `grid`.
pub fn build_prior(
    kind: PriorKind,
    model: ModelChoice,
    grid: &Grid,
    lumps: (f64, f64),
) -> Result<PriorMeasure, String> {
    let only_bernoulli = || Err(format!("prior kind '{kind}' is defined for the bernoulli model only"));
    let built = match (kind, model) {
        (PriorKind::Uniform, m) => laplace_uniform(&m.domain()),
        (PriorKind::Jeffreys, ModelChoice::Bernoulli) => jeffreys_rule_prior(&bernoulli_model(), grid),
        (PriorKind::Jeffreys, ModelChoice::Correlation) => {
            jeffreys_rule_prior(&correlation_model(), grid)
        }
        (PriorKind::Mdip, ModelChoice::Bernoulli) => mdip_prior(&bernoulli_model(), grid),
        (PriorKind::Mdip, ModelChoice::Correlation) => mdip_prior(&correlation_model(), grid),
        (PriorKind::Haldane, ModelChoice::Bernoulli) => Ok(haldane_prior()),
        (PriorKind::Mixed, ModelChoice::Bernoulli) => jeffreys_mixed_prior(lumps.0, lumps.1),
        (PriorKind::Beta(a, b), ModelChoice::Bernoulli) => beta_prior(a, b),
        _ => return only_bernoulli(),
    };
    built.map_err(|e| e.to_string())
}
