use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::GriddedDensity;

use super::InferenceError;

/// `count` normalized densities on the grid of `reference`, each positive
/// only where `reference` is. They cycle through three families: mixtures
/// with a Gaussian bump, smooth exponential tilts, and Beta-shaped densities
/// on the rescaled parameter. Deterministic in `seed`.
pub fn random_candidates(
    reference: &GriddedDensity,
    count: usize,
    seed: u64,
) -> Result<Vec<(String, GriddedDensity)>, InferenceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = reference.grid().clone();
    let d = *grid.domain();
    let ref_mass = reference.mass()?;
    if !(ref_mass > 0.0) {
        return Err(InferenceError::InvalidArgument("reference density has no mass".into()));
    }
    let base: Vec<f64> = reference.values().iter().map(|v| v / ref_mass).collect();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (label, raw): (String, Vec<f64>) = match k % 3 {
            0 => {
                let centre: f64 = rng.random_range(0.05..0.95);
                let width: f64 = rng.random_range(0.02..0.3);
                let lambda: f64 = rng.random_range(0.05..0.95);
                let bump: Vec<f64> = grid
                    .abscissae()
                    .zip(&base)
                    .map(|(a, &g)| {
                        if g == 0.0 {
                            0.0
                        } else {
                            let t = a.below / d.width();
                            (-0.5 * ((t - centre) / width).powi(2)).exp()
                        }
                    })
                    .collect();
                let bump = GriddedDensity::new(grid.clone(), bump)?.normalized()?;
                let mixed = base
                    .iter()
                    .zip(bump.values())
                    .map(|(g, b)| (1.0 - lambda) * g + lambda * b)
                    .collect();
                (format!("bump(c={centre:.3},w={width:.3},l={lambda:.3})"), mixed)
            }
            1 => {
                let freq = rng.random_range(1..=4) as f64;
                let amp: f64 = rng.random_range(-2.0..2.0);
                let tilted = grid
                    .abscissae()
                    .zip(&base)
                    .map(|(a, &g)| {
                        let t = a.below / d.width();
                        g * (amp * (freq * std::f64::consts::PI * t).cos()).exp()
                    })
                    .collect();
                (format!("tilt(f={freq},a={amp:.3})"), tilted)
            }
            _ => {
                let alpha: f64 = rng.random_range(0.6..6.0);
                let beta: f64 = rng.random_range(0.6..6.0);
                let shaped = grid
                    .abscissae()
                    .zip(&base)
                    .map(|(a, &g)| {
                        if g == 0.0 {
                            0.0
                        } else {
                            let (u, v) = (a.below / d.width(), a.above / d.width());
                            ((alpha - 1.0) * u.ln() + (beta - 1.0) * v.ln()).exp()
                        }
                    })
                    .collect();
                (format!("beta({alpha:.3},{beta:.3})"), shaped)
            }
        };
        let density = GriddedDensity::new(grid.clone(), raw)?.normalized()?;
        out.push((label, density));
    }
    Ok(out)
}
