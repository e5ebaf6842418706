use serde::{Deserialize, Serialize};

use crate::numerics::{Grid, ParamDomain};

use super::{PriorError, PriorMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub location: f64,
    pub mass: f64,
}

/// Text form of a prior: its metadata plus the density sampled on a grid.
/// Numbers are written in shortest round-trip form, so parsing the text
/// restores every sample bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorRecord {
    pub label: String,
    pub domain: ParamDomain,
    pub atoms: Vec<AtomRecord>,
    /// `(node, density)` pairs.
    pub table: Vec<(f64, f64)>,
    pub proper: bool,
    pub total_mass: Option<f64>,
}

impl PriorRecord {
    pub fn new(prior: &PriorMeasure, grid: &Grid) -> Self {
        PriorRecord {
            label: prior.label().to_string(),
            domain: *prior.domain(),
            atoms: prior
                .atoms()
                .iter()
                .map(|a| AtomRecord { location: a.location, mass: a.mass })
                .collect(),
            table: grid.nodes().iter().copied().zip(prior.density_on(grid)).collect(),
            proper: prior.is_proper(),
            total_mass: prior.total_mass(),
        }
    }

    pub fn to_text(&self) -> Result<String, PriorError> {
        let numbers = self
            .table
            .iter()
            .flat_map(|&(x, v)| [x, v])
            .chain(self.atoms.iter().flat_map(|a| [a.location, a.mass]))
            .chain(self.total_mass);
        if let Some(bad) = numbers.into_iter().find(|v| !v.is_finite()) {
            return Err(PriorError::BadRecord(format!("non-finite value {bad}")));
        }
        serde_json::to_string(self).map_err(|e| PriorError::BadRecord(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self, PriorError> {
        serde_json::from_str(text).map_err(|e| PriorError::BadRecord(e.to_string()))
    }
}
