use serde::{Deserialize, Serialize};

use super::NumericsError;

/// Which end of a [`ParamDomain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Lower,
    Upper,
}

/// A real interval, each end open or closed, optionally annotated with the
/// ends at which integrands are allowed to diverge (integrably or not).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain {
    pub lower: f64,
    pub upper: f64,
    pub lower_open: bool,
    pub upper_open: bool,
    pub singular_lower: bool,
    pub singular_upper: bool,
}

impl ParamDomain {
    fn checked(self) -> Result<Self, NumericsError> {
        if self.lower.is_nan() || self.upper.is_nan() || !(self.lower < self.upper) {
            return Err(NumericsError::InvalidDomain(format!(
                "lower {} must be below upper {}",
                self.lower, self.upper
            )));
        }
        if (self.singular_lower && !self.lower_open) || (self.singular_upper && !self.upper_open) {
            return Err(NumericsError::InvalidDomain(
                "a singular endpoint must be open".to_string(),
            ));
        }
        Ok(self)
    }

    pub fn closed(lower: f64, upper: f64) -> Result<Self, NumericsError> {
        ParamDomain {
            lower,
            upper,
            lower_open: false,
            upper_open: false,
            singular_lower: false,
            singular_upper: false,
        }
        .checked()
    }

    pub fn open(lower: f64, upper: f64) -> Result<Self, NumericsError> {
        ParamDomain {
            lower,
            upper,
            lower_open: true,
            upper_open: true,
            singular_lower: false,
            singular_upper: false,
        }
        .checked()
    }

    /// Open interval whose two ends are both declared singular.
    pub fn singular(lower: f64, upper: f64) -> Result<Self, NumericsError> {
        ParamDomain {
            lower,
            upper,
            lower_open: true,
            upper_open: true,
            singular_lower: true,
            singular_upper: true,
        }
        .checked()
    }

    /// Marks `end` singular (and therefore open).
    pub fn with_singular(mut self, end: Endpoint) -> Self {
        match end {
            Endpoint::Lower => {
                self.lower_open = true;
                self.singular_lower = true;
            }
            Endpoint::Upper => {
                self.upper_open = true;
                self.singular_upper = true;
            }
        }
        self
    }

    /// `[0, 1]`, the range of a binomial proportion.
    pub fn unit() -> Self {
        ParamDomain::closed(0.0, 1.0).expect("valid constant domain")
    }

    /// `(0, 1)` with both ends singular.
    pub fn unit_singular() -> Self {
        ParamDomain::singular(0.0, 1.0).expect("valid constant domain")
    }

    /// `(-1, 1)` with both ends singular: correlations and stationary AR(1) slopes.
    pub fn symmetric_singular() -> Self {
        ParamDomain::singular(-1.0, 1.0).expect("valid constant domain")
    }

    /// `(0, inf)`, a scale parameter.
    pub fn positive() -> Self {
        ParamDomain::open(0.0, f64::INFINITY).expect("valid constant domain")
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        ParamDomain::open(f64::NEG_INFINITY, f64::INFINITY).expect("valid constant domain")
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_finite(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn has_singular_endpoint(&self) -> bool {
        self.singular_lower || self.singular_upper
    }

    pub fn is_singular(&self, end: Endpoint) -> bool {
        match end {
            Endpoint::Lower => self.singular_lower,
            Endpoint::Upper => self.singular_upper,
        }
    }

    /// Membership respecting open/closed ends.
    pub fn contains(&self, x: f64) -> bool {
        let above_lower = if self.lower_open { x > self.lower } else { x >= self.lower };
        let below_upper = if self.upper_open { x < self.upper } else { x <= self.upper };
        above_lower && below_upper
    }

    /// Membership in the closed hull `[lower, upper]`.
    pub fn hull_contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn singular_endpoints(&self) -> Vec<Endpoint> {
        let mut out = Vec::new();
        if self.singular_lower {
            out.push(Endpoint::Lower);
        }
        if self.singular_upper {
            out.push(Endpoint::Upper);
        }
        out
    }
}

/// A point of a bounded domain together with its distances to both ends.
///
/// Near an endpoint the gap carries full relative precision even when `x`
/// itself cannot be told apart from the endpoint in `f64` (the last nodes of a
/// tanh-sinh rule sit within `1e-30` of the ends). Integrands that need to be
/// accurate there should be written in terms of `below` and `above`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    /// `x - lower`
    pub below: f64,
    /// `upper - x`
    pub above: f64,
}

impl Abscissa {
    /// Abscissa of `x` measured against `domain`; the gaps are plain
    /// differences, infinite for unbounded ends.
    pub fn in_domain(x: f64, domain: &ParamDomain) -> Self {
        Abscissa {
            x,
            below: x - domain.lower,
            above: domain.upper - x,
        }
    }

    /// A free coordinate with no bounds.
    pub fn free(x: f64) -> Self {
        Abscissa {
            x,
            below: f64::INFINITY,
            above: f64::INFINITY,
        }
    }

    /// Distance to the nearer end.
    pub fn min_gap(&self) -> f64 {
        self.below.min(self.above)
    }

    /// Moves the point by `step`, updating both gaps in their own scale.
    pub fn shifted(&self, step: f64) -> Self {
        let below = self.below + step;
        let above = self.above - step;
        let x = if below.is_finite() && above.is_finite() && below <= above {
            // lower + below, recovered without going through upper
            self.x - self.below + below
        } else if above.is_finite() {
            self.x + self.above - above
        } else {
            self.x + step
        };
        Abscissa { x, below, above }
    }

    /// Ordering key that stays strict where `x` alone would tie.
    pub(crate) fn order_key(&self) -> (u8, f64) {
        if self.below <= self.above {
            (0, self.below)
        } else {
            (1, -self.above)
        }
    }
}
