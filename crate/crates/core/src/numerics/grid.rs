use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Abscissa, NumericsError, ParamDomain};

/// Node-placement rule for a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Midpoint,
    GaussLegendre,
    TanhSinh,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Midpoint => "midpoint",
            Scheme::GaussLegendre => "gauss_legendre",
            Scheme::TanhSinh => "tanh_sinh",
        })
    }
}

impl FromStr for Scheme {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "midpoint" => Ok(Scheme::Midpoint),
            "gauss_legendre" | "gauss-legendre" | "gl" => Ok(Scheme::GaussLegendre),
            "tanh_sinh" | "tanh-sinh" | "de" => Ok(Scheme::TanhSinh),
            other => Err(NumericsError::UnknownScheme(other.to_string())),
        }
    }
}

/// How strictly [`build_grid_with`] polices scheme/domain combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accuracy {
    #[default]
    Standard,
    /// Singular endpoints demand the tanh-sinh rule.
    Strict,
}

/// Default node count.
pub const DEFAULT_GRID_SIZE: usize = 2048;

/// Smallest relative gap reached by the outermost tanh-sinh nodes.
const TANH_SINH_DEPTH: f64 = 1e-30;

/// A quadrature rule on a bounded [`ParamDomain`].
///
/// Nodes are ordered by exact position. Close to an end several nodes may
/// round to the same `f64` (see [`Abscissa`]); their gaps stay distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    domain: ParamDomain,
    scheme: Scheme,
    nodes: Vec<f64>,
    below: Vec<f64>,
    above: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn abscissa(&self, i: usize) -> Abscissa {
        Abscissa {
            x: self.nodes[i],
            below: self.below[i],
            above: self.above[i],
        }
    }

    pub fn abscissae(&self) -> impl ExactSizeIterator<Item = Abscissa> + '_ {
        (0..self.len()).map(move |i| self.abscissa(i))
    }

    /// Index of the node the abscissa refers to, if it is one of ours.
    pub fn locate(&self, at: &Abscissa) -> Option<usize> {
        let key = at.order_key();
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.abscissa(mid).order_key() < key {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (lo < self.len() && self.abscissa(lo).order_key() == key && self.nodes[lo] == at.x)
            .then_some(lo)
    }

    /// Index of the node closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, &n) in self.nodes.iter().enumerate() {
            let d = (n - x).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        best
    }

    /// Checks ordering, interiority and weight positivity.
    pub fn validate(&self) -> Result<(), NumericsError> {
        let d = &self.domain;
        for i in 0..self.len() {
            let a = self.abscissa(i);
            if !(a.x > d.lower && a.x < d.upper) || !(a.below > 0.0 && a.above > 0.0) {
                return Err(NumericsError::InvalidGrid(format!("node {i} at {} not interior", a.x)));
            }
            if !(self.weights[i] > 0.0 && self.weights[i].is_finite()) {
                return Err(NumericsError::InvalidGrid(format!("weight {i} not positive")));
            }
            if i > 0 {
                let prev = self.abscissa(i - 1);
                if prev.x > a.x || prev.order_key() >= a.order_key() {
                    return Err(NumericsError::InvalidGrid(format!("node {i} out of order")));
                }
            }
        }
        Ok(())
    }

    fn from_parts(
        domain: ParamDomain,
        scheme: Scheme,
        below: Vec<f64>,
        above: Vec<f64>,
        weights: Vec<f64>,
    ) -> Grid {
        let nodes = below
            .iter()
            .zip(&above)
            .map(|(&lo, &hi)| {
                let x = if lo <= hi { domain.lower + lo } else { domain.upper - hi };
                x.clamp(domain.lower.next_up(), domain.upper.next_down())
            })
            .collect();
        Grid {
            domain,
            scheme,
            nodes,
            below,
            above,
            weights,
        }
    }
}

/// [`build_grid_with`] at [`Accuracy::Standard`].
pub fn build_grid(domain: &ParamDomain, n: usize, scheme: Scheme) -> Result<Grid, NumericsError> {
    build_grid_with(domain, n, scheme, Accuracy::Standard)
}

/// Builds an `n`-node quadrature rule on `domain`. No node is ever placed on an
/// endpoint, so open and singular ends are safe for every scheme.
pub fn build_grid_with(
    domain: &ParamDomain,
    n: usize,
    scheme: Scheme,
    accuracy: Accuracy,
) -> Result<Grid, NumericsError> {
    if n < 2 {
        return Err(NumericsError::TooFewNodes(n));
    }
    if !domain.is_finite() {
        return Err(NumericsError::InvalidDomain(
            "grids need a bounded domain".to_string(),
        ));
    }
    if accuracy == Accuracy::Strict && domain.has_singular_endpoint() && scheme != Scheme::TanhSinh
    {
        return Err(NumericsError::SchemeNotAllowed {
            scheme,
            reason: "singular endpoints at strict accuracy require tanh_sinh",
        });
    }
    let grid = match scheme {
        Scheme::Midpoint => midpoint(domain, n),
        Scheme::GaussLegendre => gauss_legendre(domain, n),
        Scheme::TanhSinh => tanh_sinh(domain, n),
    };
    Ok(grid)
}

fn midpoint(domain: &ParamDomain, n: usize) -> Grid {
    let width = domain.width();
    let h = width / n as f64;
    let below = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    let above = (0..n).map(|i| (n as f64 - i as f64 - 0.5) * h).collect();
    Grid::from_parts(*domain, Scheme::Midpoint, below, above, vec![h; n])
}

fn gauss_legendre(domain: &ParamDomain, n: usize) -> Grid {
    let (z, w) = legendre_rule(n);
    let half = 0.5 * domain.width();
    // 1 + z and 1 - z, each taken from the side on which it is small
    let below = z.iter().map(|&zi| half * (1.0 + zi)).collect();
    let above = z.iter().map(|&zi| half * (1.0 - zi)).collect();
    let weights = w.iter().map(|&wi| half * wi).collect();
    Grid::from_parts(*domain, Scheme::GaussLegendre, below, above, weights)
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`, by Newton
/// iteration on the three-term recurrence.
pub(crate) fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - x * x) * dp * dp);
        z[i] = -x;
        z[n - 1 - i] = x;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        z[n / 2] = 0.0;
    }
    (z, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Half-width of the tanh-sinh abscissa range in `t`.
fn tanh_sinh_extent() -> f64 {
    // relative gap at |t| = t_max is 2 e^{-2u} / (1 + e^{-2u}) with u = pi/2 sinh t
    let u_max = 0.5 * (2.0 / TANH_SINH_DEPTH).ln();
    (u_max / FRAC_PI_2).asinh()
}

fn tanh_sinh(domain: &ParamDomain, n: usize) -> Grid {
    let t_max = tanh_sinh_extent();
    let h = 2.0 * t_max / (n - 1) as f64;
    let width = domain.width();
    let half = 0.5 * width;
    let mut below = Vec::with_capacity(n);
    let mut above = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        // symmetric about zero so mirrored nodes share bit-identical gaps
        let t = if 2 * k + 1 == n {
            0.0
        } else if 2 * k < n {
            -(t_max - k as f64 * h)
        } else {
            t_max - (n - 1 - k) as f64 * h
        };
        let u = FRAC_PI_2 * t.abs().sinh();
        let e = (-2.0 * u).exp();
        // 1 - |tanh u| and the derivative of tanh(u(t))
        let complement = 2.0 * e / (1.0 + e);
        let jac = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let near = half * complement;
        let far = width - near;
        if t < 0.0 {
            below.push(near);
            above.push(far);
        } else if t > 0.0 {
            below.push(far);
            above.push(near);
        } else {
            below.push(half);
            above.push(half);
        }
        weights.push(h * half * jac);
    }
    Grid::from_parts(*domain, Scheme::TanhSinh, below, above, weights)
}
