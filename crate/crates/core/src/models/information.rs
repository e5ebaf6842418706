use crate::numerics::{build_grid, pairwise_sum, Abscissa, Endpoint, ParamDomain, Scheme};

use super::{check_theta, LikelihoodModel, ModelError, Observation, SampleSpace};

/// Default finite-difference step for [`fisher_information`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

const MIN_FD_STEP: f64 = 1e-6;
const MAX_FD_STEP: f64 = 1e-3;

/// Tanh-sinh nodes per sample-space coordinate.
const SAMPLE_NODES: usize = 320;

/// Rejects points sitting exactly on a singular end before the usual domain
/// check, so the error says what went wrong.
fn check_interior<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &[Abscissa],
) -> Result<(), ModelError> {
    for (coord, (a, d)) in theta.iter().zip(model.theta_domain()).enumerate() {
        let on_lower = d.is_singular(Endpoint::Lower) && a.below <= 0.0;
        let on_upper = d.is_singular(Endpoint::Upper) && a.above <= 0.0;
        if on_lower || on_upper {
            return Err(ModelError::SingularBoundary { coord, value: a.x });
        }
    }
    check_theta(theta, model.theta_domain())
}

/// Observations with quadrature weights covering one draw from the sampling
/// distribution: every outcome with weight 1 for discrete spaces, a product
/// tanh-sinh rule over the truncated box for continuous ones.
fn sample_points<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &[Abscissa],
) -> Result<Vec<(Observation, f64)>, ModelError> {
    match model.sample_space() {
        SampleSpace::Discrete { outcomes } => {
            Ok((0..outcomes).map(|k| (Observation::Category(k), 1.0)).collect())
        }
        SampleSpace::Continuous { .. } => {
            let ranges = model.sample_box(theta);
            let rules = ranges
                .iter()
                .map(|&(lo, hi)| {
                    let d = ParamDomain::closed(lo, hi)?;
                    build_grid(&d, SAMPLE_NODES, Scheme::TanhSinh)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut points = vec![(Vec::new(), 1.0)];
            for rule in &rules {
                let mut next = Vec::with_capacity(points.len() * rule.len());
                for (coords, w) in &points {
                    for (&x, &wx) in rule.nodes().iter().zip(rule.weights()) {
                        let mut c: Vec<f64> = coords.clone();
                        c.push(x);
                        next.push((c, w * wx));
                    }
                }
                points = next;
            }
            if ranges.is_empty() {
                return Err(ModelError::InvalidSetup(format!(
                    "{} has no sample box for quadrature",
                    model.label()
                )));
            }
            Ok(points
                .into_iter()
                .map(|(c, w)| (model.observation_at(&c), w))
                .collect())
        }
    }
}

/// `f ln f` from `ln f`, with `0 ln 0 = 0`.
fn density_log_density(l: f64) -> f64 {
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp() * l
    }
}

/// `I(theta) = integral f(y | theta) ln f(y | theta) dy`, the negative entropy of
/// one observation. Closed forms are used when the model supplies one.
pub fn data_density_information<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &[Abscissa],
) -> Result<f64, ModelError> {
    check_interior(model, theta)?;
    if let SampleSpace::Continuous { .. } = model.sample_space() {
        if let Some(v) = model.closed_form_information(theta) {
            return Ok(v);
        }
    }
    quadrature_information(model, theta)
}

/// [`data_density_information`] without the closed-form shortcut.
pub fn quadrature_information<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &[Abscissa],
) -> Result<f64, ModelError> {
    check_interior(model, theta)?;
    let terms = sample_points(model, theta)?
        .iter()
        .map(|(y, w)| Ok(w * density_log_density(model.per_obs_logdensity(theta, y)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(pairwise_sum(&terms))
}

/// Total mass of one observation's density (sum over outcomes or integral
/// over the truncated sample box).
pub fn sample_space_integral<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &[Abscissa],
) -> Result<f64, ModelError> {
    check_interior(model, theta)?;
    let terms = sample_points(model, theta)?
        .iter()
        .map(|(y, w)| Ok(w * model.per_obs_logdensity(theta, y)?.exp()))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(pairwise_sum(&terms))
}

fn check_step(h: f64) -> Result<(), ModelError> {
    if (MIN_FD_STEP..=MAX_FD_STEP).contains(&h) {
        Ok(())
    } else {
        Err(ModelError::InvalidStep { step: h })
    }
}

/// Fisher information of a one-parameter model at `theta`, by Richardson-
/// refined central differences of the expected log density.
///
/// `h` must lie in `[1e-6, 1e-3]` and `theta` must be at least `2h` from any
/// finite end of the domain.
pub fn fisher_information<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: f64,
    h: f64,
) -> Result<f64, ModelError> {
    check_step(h)?;
    let domain = scalar_domain(model)?;
    let a = Abscissa::in_domain(theta, &domain);
    check_interior(model, &[a])?;
    if a.below < 2.0 * h || a.above < 2.0 * h {
        return Err(ModelError::TooCloseToBoundary { theta, step: h });
    }
    expected_curvature(model, &a, h)
}

/// [`fisher_information`] at a gap-aware point; the step shrinks to a
/// fraction of the distance to the nearer end, so nodes arbitrarily close to
/// a boundary are allowed.
pub fn fisher_information_at<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &Abscissa,
    h: f64,
) -> Result<f64, ModelError> {
    check_step(h)?;
    scalar_domain(model)?;
    check_interior(model, std::slice::from_ref(theta))?;
    let gap = theta.min_gap();
    if !(gap > 0.0) {
        return Err(ModelError::TooCloseToBoundary { theta: theta.x, step: h });
    }
    expected_curvature(model, theta, h.min(gap / 64.0))
}

fn scalar_domain<M: LikelihoodModel + ?Sized>(model: &M) -> Result<ParamDomain, ModelError> {
    match model.theta_domain() {
        [d] => Ok(*d),
        ds => Err(ModelError::NotScalar {
            model: model.label().to_string(),
            dim: ds.len(),
        }),
    }
}

/// Signed distance from `from` to `to`, read off the gap on `from`'s near side.
fn step_between(from: &Abscissa, to: &Abscissa) -> f64 {
    if from.below <= from.above {
        to.below - from.below
    } else {
        from.above - to.above
    }
}

/// `-d^2/dt^2 sum_j w_j ln f(y_j | t)` at `t = theta`, weights `w_j` the
/// sampling probabilities at `theta`.
fn expected_curvature<M: LikelihoodModel + ?Sized>(
    model: &M,
    theta: &Abscissa,
    s: f64,
) -> Result<f64, ModelError> {
    let at = std::slice::from_ref(theta);
    let points: Vec<(Observation, f64)> = sample_points(model, at)?
        .into_iter()
        .map(|(y, w)| Ok((y, w * model.per_obs_logdensity(at, &y)?.exp())))
        .collect::<Result<Vec<_>, ModelError>>()?
        .into_iter()
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let expected = |t: &Abscissa| -> Result<f64, ModelError> {
        let terms = points
            .iter()
            .map(|(y, w)| Ok(w * model.per_obs_logdensity(std::slice::from_ref(t), y)?))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(pairwise_sum(&terms))
    };
    let f0 = expected(theta)?;
    let curvature = |s: f64| -> Result<f64, ModelError> {
        let up = theta.shifted(s);
        let down = theta.shifted(-s);
        let hp = step_between(theta, &up);
        let hm = step_between(&down, theta);
        let fp = expected(&up)?;
        let fm = expected(&down)?;
        Ok(((fp - f0) / hp - (f0 - fm) / hm) * 2.0 / (hp + hm))
    };
    let coarse = curvature(s)?;
    let fine = curvature(0.5 * s)?;
    Ok(-(4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ar1_model, bernoulli_model, correlation_model, multinomial_model};
    use std::f64::consts::{E, PI};

    #[test]
    fn bernoulli_information_values() {
        let m = bernoulli_model();
        let i = data_density_information(&m, &m.point(&[0.5])).unwrap();
        assert!((i + 2f64.ln()).abs() < 1e-15);
        for p in [0.0, 1.0] {
            assert_eq!(data_density_information(&m, &m.point(&[p])).unwrap(), 0.0);
        }
        for p in [0.1, 0.27, 0.4] {
            let a = data_density_information(&m, &m.point(&[p])).unwrap();
            let b = data_density_information(&m, &m.point(&[1.0 - p])).unwrap();
            assert!((a - b).abs() < 1e-12);
            assert!(a > -(2f64.ln()));
        }
    }

    #[test]
    fn correlation_closed_form_matches_quadrature() {
        let m = correlation_model();
        for rho in [0.0, 0.3, -0.6, 0.8] {
            let t = m.point(&[rho]);
            let closed = data_density_information(&m, &t).unwrap();
            let oracle = -(2.0 * PI * E).ln() - 0.5 * (1.0 - rho * rho).ln();
            assert!((closed - oracle).abs() < 1e-14);
            let quad = quadrature_information(&m, &t).unwrap();
            assert!((quad - oracle).abs() < 1e-4, "rho {rho}: {}", quad - oracle);
        }
    }

    #[test]
    fn rescaling_shifts_information_by_log_square() {
        let m = correlation_model();
        for a in [2.0, 10.0] {
            let r = m.rescaled(a).unwrap();
            for rho in [-0.7, -0.2, 0.0, 0.45, 0.8] {
                let t = m.point(&[rho]);
                let shift =
                    quadrature_information(&r, &t).unwrap() - quadrature_information(&m, &t).unwrap();
                assert!((shift + (a * a).ln()).abs() < 1e-6, "a {a} rho {rho}");
            }
        }
    }

    #[test]
    fn ar1_information_free_of_slope() {
        let m = ar1_model(10).unwrap();
        for b in [-0.5, 0.0, 0.9] {
            let t = m.point(&[b, 1.5]);
            let oracle = -0.5 * (2.0 * PI * E * 2.25).ln();
            assert!((data_density_information(&m, &t).unwrap() - oracle).abs() < 1e-14);
            assert!((quadrature_information(&m, &t).unwrap() - oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn singular_boundary_rejected() {
        let m = correlation_model();
        assert!(matches!(
            data_density_information(&m, &m.point(&[1.0])),
            Err(ModelError::SingularBoundary { .. })
        ));
        assert!(data_density_information(&m, &m.point(&[1.5])).is_err());
    }

    #[test]
    fn correlation_density_integrates_to_one() {
        let m = correlation_model();
        let mass = sample_space_integral(&m, &m.point(&[0.5])).unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
        let k3 = multinomial_model(3).unwrap();
        let mass = sample_space_integral(&k3, &k3.point(&[0.2, 0.5])).unwrap();
        assert!((mass - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_fisher_matches_closed_form() {
        let m = bernoulli_model();
        let i = fisher_information(&m, 0.5, DEFAULT_FD_STEP).unwrap();
        assert!((i - 4.0).abs() < 1e-4);
        let i = fisher_information(&m, 0.2, DEFAULT_FD_STEP).unwrap();
        assert!((i - 6.25).abs() < 1e-3);
        for k in 1..10 {
            let p = k as f64 / 10.0;
            let i = fisher_information(&m, p, DEFAULT_FD_STEP).unwrap();
            let oracle = 1.0 / (p * (1.0 - p));
            assert!((i / oracle - 1.0).abs() < 1e-3);
            let j = fisher_information(&m, 1.0 - p, DEFAULT_FD_STEP).unwrap();
            assert!((i - j).abs() < 1e-6);
        }
    }

    #[test]
    fn fisher_near_boundary_through_gaps() {
        let m = bernoulli_model();
        for gap in [1e-3, 1e-8, 1e-14, 1e-25] {
            let lo = Abscissa { x: gap, below: gap, above: 1.0 - gap };
            let i = fisher_information_at(&m, &lo, DEFAULT_FD_STEP).unwrap();
            let oracle = 1.0 / (gap * (1.0 - gap));
            assert!((i / oracle - 1.0).abs() < 1e-6, "gap {gap}: {}", i / oracle - 1.0);
            let hi = Abscissa { x: 1.0, below: 1.0, above: gap };
            let j = fisher_information_at(&m, &hi, DEFAULT_FD_STEP).unwrap();
            assert!((j / oracle - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn correlation_fisher_matches_closed_form() {
        let m = correlation_model();
        for rho in [0.0, 0.5, -0.7] {
            let i = fisher_information(&m, rho, DEFAULT_FD_STEP).unwrap();
            let r2 = rho * rho;
            let oracle = (1.0 + r2) / ((1.0 - r2) * (1.0 - r2));
            assert!((i / oracle - 1.0).abs() < 1e-4, "rho {rho}: {i} vs {oracle}");
        }
    }

    #[test]
    fn fisher_argument_checks() {
        let m = bernoulli_model();
        assert!(matches!(
            fisher_information(&m, 0.5, 1e-2),
            Err(ModelError::InvalidStep { .. })
        ));
        assert!(matches!(
            fisher_information(&m, 0.5, 1e-7),
            Err(ModelError::InvalidStep { .. })
        ));
        assert!(matches!(
            fisher_information(&m, 1.5e-4, 1e-4),
            Err(ModelError::TooCloseToBoundary { .. })
        ));
        assert!(matches!(
            fisher_information(&ar1_model(5).unwrap(), 0.1, 1e-4),
            Err(ModelError::NotScalar { dim: 2, .. })
        ));
    }
}
