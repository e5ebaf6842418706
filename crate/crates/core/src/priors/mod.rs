//! Prior measures: a finite list of point atoms plus a (possibly improper,
//! possibly unnormalized) density on a parameter domain.

mod ar1;
mod record;

use std::fmt;
use std::sync::Arc;

use statrs::function::beta::ln_beta;
use thiserror::Error;

use crate::models::{
    data_density_information, fisher_information_at, ln_p, ln_q, LikelihoodModel, ModelError,
    DEFAULT_FD_STEP,
};
use crate::numerics::{
    adaptive_integrate_at, diverges_at_ends, integrate_values, Abscissa, Endpoint, Grid,
    NumericsError, ParamDomain,
};

pub use ar1::{
    ar1_slope_prior, jeffreys_ar1_density, jeffreys_ar1_density_at, mdip_ar1_density,
    mdip_ar1_density_at, Ar1PriorKind,
};
pub use record::{AtomRecord, PriorRecord};

/// Distance from an end at which one-sided endpoint limits are sampled.
pub const ENDPOINT_OFFSET: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PriorError {
    #[error("improper measure: {0} has infinite total mass")]
    ImproperMeasure(String),
    #[error("a uniform prior needs a bounded domain")]
    InfiniteDomain,
    #[error("invalid prior parameter: {0}")]
    InvalidParameter(String),
    #[error("negative Fisher information {value} at node {index} (theta = {node})")]
    NegativeFisher { index: usize, node: f64, value: f64 },
    #[error("non-finite prior kernel {value} at node {index} (theta = {node})")]
    NonFiniteKernel { index: usize, node: f64, value: f64 },
    #[error("grid domain [{found_lower}, {found_upper}] does not match the model parameter domain")]
    DomainMismatch { found_lower: f64, found_upper: f64 },
    #[error("malformed prior record: {0}")]
    BadRecord(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

type KernelFn = Arc<dyn Fn(&Abscissa) -> f64 + Send + Sync>;

/// Shape of the continuous part, up to the measure's coefficient.
#[derive(Clone)]
enum Kernel {
    Constant,
    /// `p^(a-1) (1-p)^(b-1)` on `[0, 1]`.
    Beta(f64, f64),
    Function(KernelFn),
    /// Values on grid nodes, linear in between.
    Tabulated(Arc<Grid>, Arc<Vec<f64>>),
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Constant => f.write_str("Constant"),
            Kernel::Beta(a, b) => write!(f, "Beta({a}, {b})"),
            Kernel::Function(_) => f.write_str("Function"),
            Kernel::Tabulated(g, _) => write!(f, "Tabulated({} nodes)", g.len()),
        }
    }
}

/// `p^(a-1) (1-p)^(b-1)` from the gaps of `p`, exact powers skipped at 1.
fn beta_kernel(a: f64, b: f64, p: &Abscissa) -> f64 {
    let mut l = 0.0;
    if a != 1.0 {
        l += (a - 1.0) * ln_p(p);
    }
    if b != 1.0 {
        l += (b - 1.0) * ln_q(p);
    }
    l.exp()
}

impl Kernel {
    fn eval(&self, a: &Abscissa) -> f64 {
        match self {
            Kernel::Constant => 1.0,
            Kernel::Beta(alpha, beta) => beta_kernel(*alpha, *beta, a),
            Kernel::Function(f) => f(a),
            Kernel::Tabulated(grid, values) => tabulated_value(grid, values, a),
        }
    }
}

fn tabulated_value(grid: &Grid, values: &[f64], a: &Abscissa) -> f64 {
    if let Some(i) = grid.locate(a) {
        return values[i];
    }
    let nodes = grid.nodes();
    let j = nodes.partition_point(|&x| x < a.x);
    if j == 0 {
        values[0]
    } else if j == nodes.len() {
        values[nodes.len() - 1]
    } else {
        let (x0, x1) = (nodes[j - 1], nodes[j]);
        if x1 == x0 {
            return values[j];
        }
        let t = (a.x - x0) / (x1 - x0);
        values[j - 1] + t * (values[j] - values[j - 1])
    }
}

/// A prior: `sum_j mass_j delta(location_j) + coef * kernel(theta) d theta`.
///
/// `proper` means the total mass is known to be one; `total_mass` then records
/// the mass the measure had before it was normalized.
#[derive(Debug, Clone)]
pub struct PriorMeasure {
    label: String,
    domain: ParamDomain,
    atoms: Vec<Atom>,
    kernel: Kernel,
    coef: f64,
    proper: bool,
    total_mass: Option<f64>,
}

impl PriorMeasure {
    fn new(label: impl Into<String>, domain: ParamDomain, kernel: Kernel) -> Self {
        PriorMeasure {
            label: label.into(),
            domain,
            atoms: Vec::new(),
            kernel,
            coef: 1.0,
            proper: false,
            total_mass: None,
        }
    }

    /// An unnormalized measure with density `f` and no atoms.
    pub fn from_kernel(
        label: impl Into<String>,
        domain: ParamDomain,
        f: impl Fn(&Abscissa) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PriorMeasure::new(label, domain, Kernel::Function(Arc::new(f)))
    }

    /// A density tabulated on `grid` (linear between nodes) plus atoms,
    /// taken as proper when the tabulated mass plus atoms is one.
    pub fn tabulated(
        label: impl Into<String>,
        grid: Arc<Grid>,
        values: Vec<f64>,
        atoms: Vec<Atom>,
    ) -> Result<Self, PriorError> {
        if let Some((index, &value)) =
            values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(PriorError::NonFiniteKernel {
                index,
                node: grid.nodes().get(index).copied().unwrap_or(f64::NAN),
                value,
            });
        }
        let mass = integrate_values(&grid, &values)? + atoms.iter().map(|a| a.mass).sum::<f64>();
        let domain = *grid.domain();
        check_atoms(&atoms, &domain)?;
        let proper = (mass - 1.0).abs() <= 1e-8;
        Ok(PriorMeasure {
            label: label.into(),
            domain,
            atoms,
            kernel: Kernel::Tabulated(grid, Arc::new(values)),
            coef: 1.0,
            proper,
            total_mass: proper.then_some(mass),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn total_mass(&self) -> Option<f64> {
        self.total_mass
    }

    /// Factor in front of the kernel; for a normalized MDIP this is the
    /// normalization constant.
    pub fn coef(&self) -> f64 {
        self.coef
    }

    /// `(a, b)` when the continuous part is a Beta kernel on `[0, 1]`
    /// (the constant kernel on `[0, 1]` counts as Beta(1, 1)).
    pub fn beta_shape(&self) -> Option<(f64, f64)> {
        let unit = self.domain.lower == 0.0 && self.domain.upper == 1.0;
        match self.kernel {
            Kernel::Beta(a, b) => Some((a, b)),
            Kernel::Constant if unit => Some((1.0, 1.0)),
            _ => None,
        }
    }

    /// Density of the continuous part at a gap-aware point.
    pub fn density_at(&self, a: &Abscissa) -> f64 {
        self.coef * self.kernel.eval(a)
    }

    /// Density of the continuous part at `x`.
    pub fn density(&self, x: f64) -> f64 {
        self.density_at(&Abscissa::in_domain(x, &self.domain))
    }

    /// One-sided limit of the density at an end, sampled at
    /// [`ENDPOINT_OFFSET`] from it.
    pub fn endpoint_limit(&self, end: Endpoint) -> f64 {
        let w = self.domain.width();
        let g = ENDPOINT_OFFSET;
        let a = match end {
            Endpoint::Lower => Abscissa {
                x: self.domain.lower + g,
                below: g,
                above: w - g,
            },
            Endpoint::Upper => Abscissa {
                x: self.domain.upper - g,
                below: w - g,
                above: g,
            },
        };
        self.density_at(&a)
    }

    /// Tabulates the continuous part on `grid`.
    pub fn density_on(&self, grid: &Grid) -> Vec<f64> {
        grid.abscissae().map(|a| self.density_at(&a)).collect()
    }

    /// The measure multiplied by `c > 0`; no longer proper unless `c = 1`.
    pub fn scaled(&self, c: f64) -> Result<Self, PriorError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(PriorError::InvalidParameter(format!("scale factor {c}")));
        }
        if c == 1.0 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        out.coef *= c;
        for atom in &mut out.atoms {
            atom.mass *= c;
        }
        out.proper = false;
        out.total_mass = None;
        Ok(out)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Whether the continuous part has infinite mass. Beta kernels are
    /// checked analytically, other kernels by [`diverges_at_ends`].
    pub fn is_divergent(&self) -> bool {
        if self.proper {
            return false;
        }
        match &self.kernel {
            Kernel::Constant => !self.domain.is_finite(),
            Kernel::Beta(a, b) => !(*a > 0.0 && *b > 0.0),
            Kernel::Tabulated(..) => false,
            Kernel::Function(f) => !self.domain.is_finite() || diverges_at_ends(|a| f(a), &self.domain),
        }
    }

    /// Mass of the continuous part.
    pub fn continuous_mass(&self) -> Result<f64, PriorError> {
        if self.is_divergent() {
            return Err(PriorError::ImproperMeasure(self.label.clone()));
        }
        let raw = match &self.kernel {
            Kernel::Constant => self.domain.width(),
            Kernel::Beta(a, b) => ln_beta(*a, *b).exp(),
            Kernel::Tabulated(grid, values) => integrate_values(grid, values)?,
            Kernel::Function(f) => {
                // tanh-sinh refinement handles kernels unbounded at either end
                let d = self
                    .domain
                    .with_singular(Endpoint::Lower)
                    .with_singular(Endpoint::Upper);
                adaptive_integrate_at(|a| f(a), &d, 1e-11)?.value
            }
        };
        Ok(self.coef * raw)
    }

    /// Atom masses plus the continuous mass.
    pub fn mass(&self) -> Result<f64, PriorError> {
        if self.proper {
            return Ok(1.0);
        }
        Ok(self.continuous_mass()? + self.atoms.iter().map(|a| a.mass).sum::<f64>())
    }
}

fn check_atoms(atoms: &[Atom], domain: &ParamDomain) -> Result<(), PriorError> {
    for a in atoms {
        if !domain.hull_contains(a.location) || !(a.mass >= 0.0 && a.mass.is_finite()) {
            return Err(PriorError::InvalidParameter(format!(
                "atom of mass {} at {} outside the closed domain",
                a.mass, a.location
            )));
        }
    }
    Ok(())
}

/// Rescales density and atoms jointly to total mass one.
pub fn normalize(prior: &PriorMeasure) -> Result<PriorMeasure, PriorError> {
    if prior.proper {
        return Ok(prior.clone());
    }
    let mass = prior.mass()?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(PriorError::ImproperMeasure(prior.label.clone()));
    }
    let mut out = prior.clone();
    out.coef /= mass;
    for atom in &mut out.atoms {
        atom.mass /= mass;
    }
    out.proper = true;
    out.total_mass = Some(mass);
    Ok(out)
}

/// Constant density `1 / (upper - lower)`.
pub fn laplace_uniform(domain: &ParamDomain) -> Result<PriorMeasure, PriorError> {
    if !domain.is_finite() {
        return Err(PriorError::InfiniteDomain);
    }
    let mut p = PriorMeasure::new("uniform", *domain, Kernel::Constant);
    p.coef = 1.0 / domain.width();
    p.proper = true;
    p.total_mass = Some(1.0);
    Ok(p)
}

/// `1 / (p (1 - p))` on `(0, 1)`; improper.
pub fn haldane_prior() -> PriorMeasure {
    PriorMeasure::new("haldane", ParamDomain::unit_singular(), Kernel::Beta(0.0, 0.0))
}

/// The normalized Beta(a, b) density.
pub fn beta_prior(a: f64, b: f64) -> Result<PriorMeasure, PriorError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(PriorError::InvalidParameter(format!("Beta({a}, {b})")));
    }
    let mut domain = ParamDomain::unit();
    if a < 1.0 {
        domain = domain.with_singular(Endpoint::Lower);
    }
    if b < 1.0 {
        domain = domain.with_singular(Endpoint::Upper);
    }
    let mut p = PriorMeasure::new(format!("beta({a},{b})"), domain, Kernel::Beta(a, b));
    p.coef = (-ln_beta(a, b)).exp();
    p.proper = true;
    p.total_mass = Some(1.0);
    Ok(p)
}

/// Atoms `k0` at 0 and `k1` at 1, the remaining mass uniform on `[0, 1]`.
/// Zero-mass atoms are dropped.
pub fn jeffreys_mixed_prior(k0: f64, k1: f64) -> Result<PriorMeasure, PriorError> {
    if !(k0 >= 0.0 && k1 >= 0.0 && k0 + k1 < 1.0) {
        return Err(PriorError::InvalidParameter(format!(
            "lump masses k0 = {k0}, k1 = {k1} must be nonnegative with sum below 1"
        )));
    }
    let mut p = PriorMeasure::new(format!("mixed({k0},{k1})"), ParamDomain::unit(), Kernel::Constant);
    p.coef = 1.0 - k0 - k1;
    p.atoms = [(0.0, k0), (1.0, k1)]
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|&(location, mass)| Atom { location, mass })
        .collect();
    p.proper = true;
    p.total_mass = Some(1.0);
    Ok(p)
}

fn scalar_domain<M: LikelihoodModel + ?Sized>(model: &M, grid: &Grid) -> Result<ParamDomain, PriorError> {
    let d = match model.theta_domain() {
        [d] => *d,
        ds => {
            return Err(ModelError::NotScalar {
                model: model.label().to_string(),
                dim: ds.len(),
            }
            .into())
        }
    };
    let g = grid.domain();
    if g.lower != d.lower || g.upper != d.upper {
        return Err(PriorError::DomainMismatch {
            found_lower: g.lower,
            found_upper: g.upper,
        });
    }
    Ok(d)
}

/// Normalizes a freshly tabulated kernel on its grid, or leaves it improper
/// when the kernel's tails diverge.
fn finish_on_grid(mut p: PriorMeasure, grid: &Grid, values: &[f64]) -> Result<PriorMeasure, PriorError> {
    if p.is_divergent() {
        return Ok(p);
    }
    let mass = integrate_values(grid, values)?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Ok(p);
    }
    p.coef = 1.0 / mass;
    p.proper = true;
    p.total_mass = Some(mass);
    Ok(p)
}

/// Density proportional to the square root of the Fisher information,
/// normalized over `grid`.
///
/// Fisher information is taken by finite differences at each node, with the
/// step shrunk toward the nearer end so that nodes close to a boundary keep
/// full relative accuracy.
pub fn jeffreys_rule_prior<M>(model: &M, grid: &Grid) -> Result<PriorMeasure, PriorError>
where
    M: LikelihoodModel + Clone + 'static,
{
    let domain = scalar_domain(model, grid)?;
    let mut values = Vec::with_capacity(grid.len());
    for (index, a) in grid.abscissae().enumerate() {
        let i = fisher_information_at(model, &a, DEFAULT_FD_STEP)?;
        if !(i >= 0.0) || !i.is_finite() {
            return Err(PriorError::NegativeFisher { index, node: a.x, value: i });
        }
        values.push(i.sqrt());
    }
    let m = model.clone();
    let kernel = move |a: &Abscissa| {
        fisher_information_at(&m, a, DEFAULT_FD_STEP)
            .map(|i| i.max(0.0).sqrt())
            .unwrap_or(f64::NAN)
    };
    let p = PriorMeasure::from_kernel("jeffreys", domain, kernel);
    finish_on_grid(p, grid, &values)
}

/// `exp(I(theta))`, the unnormalized maximal data information kernel.
pub fn mdip_kernel<M>(model: &M) -> Result<PriorMeasure, PriorError>
where
    M: LikelihoodModel + Clone + 'static,
{
    let domain = match model.theta_domain() {
        [d] => *d,
        ds => {
            return Err(ModelError::NotScalar {
                model: model.label().to_string(),
                dim: ds.len(),
            }
            .into())
        }
    };
    let m = model.clone();
    Ok(PriorMeasure::from_kernel("mdip", domain, move |a: &Abscissa| {
        data_density_information(&m, std::slice::from_ref(a))
            .map(f64::exp)
            .unwrap_or(f64::NAN)
    }))
}

/// Density proportional to `exp(I(theta))`, normalized over `grid`.
pub fn mdip_prior<M>(model: &M, grid: &Grid) -> Result<PriorMeasure, PriorError>
where
    M: LikelihoodModel + Clone + 'static,
{
    scalar_domain(model, grid)?;
    let mut values = Vec::with_capacity(grid.len());
    for (index, a) in grid.abscissae().enumerate() {
        let v = data_density_information(model, std::slice::from_ref(&a))?.exp();
        if !v.is_finite() {
            return Err(PriorError::NonFiniteKernel { index, node: a.x, value: v });
        }
        values.push(v);
    }
    finish_on_grid(mdip_kernel(model)?, grid, &values)
}
