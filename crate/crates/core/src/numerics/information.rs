use std::sync::Arc;

use super::quadrature::integrate_values;
use super::sum::pairwise_sum;
use super::{Abscissa, Grid, NumericsError};

/// Tolerance on `|integral - 1|` for a density to count as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// A nonnegative function tabulated on the nodes of a shared [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedDensity {
    grid: Arc<Grid>,
    values: Vec<f64>,
    normalized: bool,
}

impl GriddedDensity {
    /// Wraps node values; `normalized` is set if they integrate to one.
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self, NumericsError> {
        if values.len() != grid.len() {
            return Err(NumericsError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(NumericsError::NegativeDensity {
                index: i,
                node: grid.nodes()[i],
                value: v,
            });
        }
        let mass = integrate_values(&grid, &values)?;
        Ok(GriddedDensity {
            grid,
            values,
            normalized: (mass - 1.0).abs() <= NORMALIZATION_TOL,
        })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&Abscissa) -> f64) -> Result<Self, NumericsError> {
        let values = grid.abscissae().map(|a| f(&a)).collect();
        GriddedDensity::new(grid, values)
    }

    /// Rescales to unit mass.
    pub fn normalized(mut self) -> Result<Self, NumericsError> {
        let mass = self.mass()?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(NumericsError::NotNormalizable(mass));
        }
        for v in &mut self.values {
            *v /= mass;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn mass(&self) -> Result<f64, NumericsError> {
        integrate_values(&self.grid, &self.values)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    /// Whether `other` lives on the same nodes with the same weights.
    pub fn shares_grid(&self, other: &GriddedDensity) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Node index of the smallest value (first on ties).
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v < self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Node index of the largest value (first on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// `integral theta^k f(theta)`
    pub fn moment(&self, k: i32) -> Result<f64, NumericsError> {
        let v: Vec<f64> = self
            .values
            .iter()
            .zip(self.grid.nodes())
            .map(|(f, x)| f * x.powi(k))
            .collect();
        integrate_values(&self.grid, &v)
    }
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `integral f ln f`, with `0 ln 0 = 0`.
pub fn shannon_neg_entropy(f: &GriddedDensity) -> Result<f64, NumericsError> {
    if !f.is_normalized() {
        return Err(NumericsError::NotNormalized(f.mass()?));
    }
    let terms: Vec<f64> = f
        .values
        .iter()
        .zip(f.grid.weights())
        .map(|(&v, &w)| w * xlnx(v))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `integral g ln(g / h)` for two normalized densities on one grid.
///
/// Each term is accumulated as `g ln(g/h) - g + h`, which is pointwise
/// nonnegative and integrates to the same value when both masses are one.
pub fn kl_divergence(g: &GriddedDensity, h: &GriddedDensity) -> Result<f64, NumericsError> {
    if !g.shares_grid(h) {
        return Err(NumericsError::GridMismatch);
    }
    for d in [g, h] {
        if !d.is_normalized() {
            return Err(NumericsError::NotNormalized(d.mass()?));
        }
    }
    let mut terms = Vec::with_capacity(g.values.len());
    for (i, ((&gv, &hv), &w)) in g.values.iter().zip(&h.values).zip(g.grid.weights()).enumerate() {
        let t = if gv == 0.0 {
            hv
        } else if hv == 0.0 {
            return Err(NumericsError::SupportViolation {
                index: i,
                node: g.grid.nodes()[i],
            });
        } else {
            gv * (gv.ln() - hv.ln()) - gv + hv
        };
        terms.push(w * t.max(0.0));
    }
    Ok(pairwise_sum(&terms))
}
