use super::grid::{build_grid, legendre_rule, Scheme};
use super::sum::pairwise_sum;
use super::{Abscissa, Grid, NumericsError, ParamDomain};

/// Default relative tolerance for [`adaptive_integrate`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Refinement stops with an error once a rule would exceed this many nodes.
pub const MAX_NODES: usize = 1 << 22;
/// Convergence floor used when the estimate itself is close to zero.
const ABS_FLOOR: f64 = 1e-12;

const TANH_SINH_START: usize = 32;
const PANEL_ORDER: usize = 32;

/// `sum_i w_i * values[i]`; a non-finite value is reported with its node.
pub fn integrate_values(grid: &Grid, values: &[f64]) -> Result<f64, NumericsError> {
    if values.len() != grid.len() {
        return Err(NumericsError::LengthMismatch {
            expected: grid.len(),
            found: values.len(),
        });
    }
    let mut terms = Vec::with_capacity(values.len());
    for (i, (&v, &w)) in values.iter().zip(grid.weights()).enumerate() {
        if !v.is_finite() {
            return Err(NumericsError::NonFinite {
                index: i,
                node: grid.nodes()[i],
                value: v,
            });
        }
        terms.push(w * v);
    }
    Ok(pairwise_sum(&terms))
}

/// Integrates a plain function of the node value.
pub fn integrate_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<f64, NumericsError> {
    let values: Vec<f64> = grid.nodes().iter().map(|&x| f(x)).collect();
    integrate_values(grid, &values)
}

/// Integrates a function that reads the node's gaps to the domain ends.
pub fn integrate_at(grid: &Grid, f: impl Fn(&Abscissa) -> f64) -> Result<f64, NumericsError> {
    let values: Vec<f64> = grid.abscissae().map(|a| f(&a)).collect();
    integrate_values(grid, &values)
}

/// Outcome of an adaptive refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Node count of the accepted rule.
    pub nodes: usize,
    /// Number of doublings performed.
    pub refinements: usize,
    /// Relative change between the last two estimates.
    pub rel_change: f64,
}

/// [`adaptive_integrate_at`] for a plain function of `x`.
pub fn adaptive_integrate(
    f: impl Fn(f64) -> f64,
    domain: &ParamDomain,
    rel_tol: f64,
) -> Result<f64, NumericsError> {
    adaptive_integrate_at(|a: &Abscissa| f(a.x), domain, rel_tol).map(|e| e.value)
}

/// Doubles the node count until successive estimates agree to `rel_tol`
/// (absolute `1e-12` near zero). Tanh-sinh when the domain declares a
/// singular end, composite 32-point Gauss-Legendre otherwise.
pub fn adaptive_integrate_at(
    f: impl Fn(&Abscissa) -> f64,
    domain: &ParamDomain,
    rel_tol: f64,
) -> Result<Estimate, NumericsError> {
    if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
        return Err(NumericsError::InvalidTolerance(rel_tol));
    }
    if !domain.is_finite() {
        return Err(NumericsError::InvalidDomain(
            "adaptive integration needs a bounded domain".to_string(),
        ));
    }
    let singular = domain.has_singular_endpoint();
    let rule = |n: usize| -> Result<f64, NumericsError> {
        if singular {
            let grid = build_grid(domain, n, Scheme::TanhSinh)?;
            integrate_at(&grid, &f)
        } else {
            composite_gauss_legendre(domain, n / PANEL_ORDER, &f)
        }
    };
    let mut n = if singular { TANH_SINH_START } else { PANEL_ORDER };
    let mut previous = rule(n)?;
    let mut refinements = 0;
    let mut rel_change = f64::INFINITY;
    while 2 * n <= MAX_NODES {
        n *= 2;
        refinements += 1;
        let current = rule(n)?;
        let change = (current - previous).abs();
        rel_change = if current != 0.0 { change / current.abs() } else { change };
        if change <= (rel_tol * current.abs()).max(ABS_FLOOR) {
            return Ok(Estimate {
                value: current,
                nodes: n,
                refinements,
                rel_change,
            });
        }
        previous = current;
    }
    Err(NumericsError::NoConvergence {
        estimate: previous,
        achieved: rel_change,
        nodes: n,
    })
}

fn composite_gauss_legendre(
    domain: &ParamDomain,
    panels: usize,
    f: &impl Fn(&Abscissa) -> f64,
) -> Result<f64, NumericsError> {
    let (z, w) = legendre_rule(PANEL_ORDER);
    let pw = domain.width() / panels as f64;
    let half = 0.5 * pw;
    let mut terms = Vec::with_capacity(panels * PANEL_ORDER);
    for j in 0..panels {
        for (zi, wi) in z.iter().zip(&w) {
            let below = j as f64 * pw + half * (1.0 + zi);
            let above = (panels - j - 1) as f64 * pw + half * (1.0 - zi);
            let x = if below <= above { domain.lower + below } else { domain.upper - above };
            let v = f(&Abscissa { x, below, above });
            if !v.is_finite() {
                return Err(NumericsError::NonFinite {
                    index: terms.len(),
                    node: x,
                    value: v,
                });
            }
            terms.push(half * wi * v);
        }
    }
    Ok(pairwise_sum(&terms))
}

/// Decades of distance to an end, `10^-FIRST..10^-LAST`, compared by
/// [`diverges_at_ends`].
const TAIL_FIRST_DECADE: i32 = 12;
const TAIL_LAST_DECADE: i32 = 23;
/// A tail whose mass per decade shrinks by less than this factor across the
/// probed decades is treated as non-integrable.
const TAIL_DECAY: f64 = 0.9;

/// Heuristic check that `integral f` is infinite because of a finite end of
/// `domain`. The mass of `f` in successive decades of distance to each end
/// is constant for a `1/x` kernel and grows for anything worse.
///
/// Kernels of the form `x^(a - 1)` with `a` below about `0.004` are reported
/// as divergent even though they are integrable.
pub fn diverges_at_ends(f: impl Fn(&Abscissa) -> f64, domain: &ParamDomain) -> bool {
    let width = domain.width();
    let (z, w) = legendre_rule(16);
    let decade_mass = |upper_end: bool, k: i32| -> f64 {
        let hi = -(k as f64) * std::f64::consts::LN_10;
        let lo = hi - std::f64::consts::LN_10;
        let half = 0.5 * (hi - lo);
        let terms: Vec<f64> = z
            .iter()
            .zip(&w)
            .map(|(zi, wi)| {
                let g = (lo + half * (1.0 + zi)).exp();
                let a = if upper_end {
                    Abscissa { x: domain.upper - g, below: width - g, above: g }
                } else {
                    Abscissa { x: domain.lower + g, below: g, above: width - g }
                };
                half * wi * f(&a) * g
            })
            .collect();
        pairwise_sum(&terms)
    };
    let ends = [(domain.lower.is_finite(), false), (domain.upper.is_finite(), true)];
    ends.iter().filter(|(finite, _)| *finite).any(|&(_, upper_end)| {
        let first = decade_mass(upper_end, TAIL_FIRST_DECADE);
        let last = decade_mass(upper_end, TAIL_LAST_DECADE);
        if !(first.is_finite() && last.is_finite()) {
            return true;
        }
        last > 0.0 && last >= TAIL_DECAY * first
    })
}
