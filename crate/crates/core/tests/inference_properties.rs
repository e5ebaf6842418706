use std::sync::Arc;

use objprior::models::bernoulli_model;
use objprior::numerics::{build_grid, ParamDomain, Scheme};
use objprior::priors::beta_prior;
use objprior::{
    info_delta, laplace_uniform, optimal_output, posterior, rule_of_succession,
    Dataset,
};
use proptest::prelude::*;

fn unit_grid(n: usize) -> Arc<objprior::Grid> {
    Arc::new(build_grid(&ParamDomain::unit(), n, Scheme::TanhSinh).unwrap())
}

/// KL divergence from the grid-normalized Beta(a, b) kernel, with the kernel
/// kept in log form so that nodes where it underflows still count.
fn kl_to_beta_posterior(g: &objprior::GriddedDensity, a: f64, b: f64) -> f64 {
    let grid = g.grid();
    let ln_k: Vec<f64> = grid
        .abscissae()
        .map(|x| {
            let (lp, lq) = if x.below <= x.above {
                (x.below.ln(), (-x.below).ln_1p())
            } else {
                ((-x.above).ln_1p(), x.above.ln())
            };
            (a - 1.0) * lp + (b - 1.0) * lq
        })
        .collect();
    let shift = ln_k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = grid.weights().iter().zip(&ln_k).map(|(w, l)| w * (l - shift).exp()).sum();
    let ln_z = shift + z.ln();
    grid.weights()
        .iter()
        .zip(g.values())
        .zip(&ln_k)
        .filter(|((_, v), _)| **v > 0.0)
        .map(|((w, v), l)| w * v * (v.ln() - l + ln_z))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn efficiency_identity_for_beta_priors(
        a in 0.5..4.0f64, b in 0.5..4.0f64, s in 0usize..15, f in 0usize..15,
        a2 in 0.5..8.0f64, b2 in 0.5..8.0f64,
    ) {
        let grid = unit_grid(1024);
        let m = bernoulli_model();
        let prior = beta_prior(a, b).unwrap();
        let data = Dataset::bernoulli(s, f);
        let g = optimal_output(&prior, &m, &data, &grid).unwrap();
        let r = info_delta(&g, &prior, &m, &data).unwrap();
        prop_assert!(r.delta.abs() < 1e-8, "delta {}", r.delta);
        prop_assert_eq!(r.efficiency, 1.0);

        let cand = beta_prior(a2, b2).unwrap();
        let other = objprior::numerics::GriddedDensity::from_fn(grid.clone(), |x| cand.density_at(x))
            .unwrap()
            .normalized()
            .unwrap();
        let r = info_delta(&other, &prior, &m, &data).unwrap();
        let kl = kl_to_beta_posterior(&other, a + s as f64, b + f as f64);
        prop_assert!(r.delta >= -1e-10);
        prop_assert!((r.delta - kl).abs() < 1e-8 * kl.max(1.0), "{} vs {}", r.delta, kl);
    }

    #[test]
    fn uniform_rule_of_succession(n in 0u64..10_000) {
        let p = laplace_uniform(&ParamDomain::unit()).unwrap();
        let v = rule_of_succession(&p, n).unwrap();
        let exact = (n as f64 + 1.0) / (n as f64 + 2.0);
        prop_assert!((v - exact).abs() <= 1e-12);
    }

    #[test]
    fn sequential_updating_matches_batch(
        s1 in 0usize..8, f1 in 0usize..8, s2 in 0usize..8, f2 in 0usize..8,
        a in 0.5..3.0f64, b in 0.5..3.0f64,
    ) {
        let grid = unit_grid(512);
        let m = bernoulli_model();
        let prior = beta_prior(a, b).unwrap();
        let first = Dataset::bernoulli(s1, f1);
        let second = Dataset::bernoulli(s2, f2);
        let p1 = posterior(&prior, &m, &first, &grid).unwrap();
        let seq = posterior(&p1.to_prior().unwrap(), &m, &second, &grid).unwrap();
        let batch = posterior(&prior, &m, &first.concat(&second).unwrap(), &grid).unwrap();
        for (u, v) in seq.density.values().iter().zip(batch.density.values()) {
            prop_assert!((u - v).abs() <= 1e-9 * v.max(1.0));
        }
        prop_assert!((p1.log_marginal + seq.log_marginal - batch.log_marginal).abs() < 1e-9);
    }

    #[test]
    fn prior_scaling_leaves_posterior_unchanged(c in 0.01..100.0f64, s in 0usize..10, f in 0usize..10) {
        let grid = unit_grid(256);
        let m = bernoulli_model();
        let prior = beta_prior(2.0, 3.0).unwrap();
        let data = Dataset::bernoulli(s, f);
        let p = posterior(&prior, &m, &data, &grid).unwrap();
        let q = posterior(&prior.scaled(c).unwrap(), &m, &data, &grid).unwrap();
        for (u, v) in p.density.values().iter().zip(q.density.values()) {
            prop_assert!((u - v).abs() <= 1e-12 * u.max(1.0));
        }
        prop_assert!((q.log_marginal - p.log_marginal - c.ln()).abs() < 1e-10);
    }
}
