use std::sync::Arc;

use objprior::inference::{random_candidates, EFFICIENCY_TOL};
use objprior::models::{bernoulli_model, correlation_model, simulate_ar1};
use objprior::numerics::Endpoint;
use objprior::priors::{jeffreys_ar1_density_at, mdip_ar1_density_at, ENDPOINT_OFFSET};
use objprior::{
    ar1_posterior_b, build_grid, info_delta, info_delta_likelihood_only, kl_divergence,
    likelihood_only_output, normalize, optimal_output, posterior, rule_of_succession_on,
    rule_of_succession_with, Abscissa, Ar1PriorKind, Dataset, Grid, InferenceError, InfoReport,
    LikelihoodModel, ParamDomain, PriorMeasure, Scheme, SuccessionMode,
};

use crate::kinds::{build_prior, lump_masses, ModelChoice, PriorKind};
use crate::{
    Ar1Args, Common, DataArgs, EfficiencyArgs, PosteriorArgs, PriorArgs, Record, SuccessionArgs,
};

type Outcome = Result<(), String>;

fn make_grid(common: &Common, domain: &ParamDomain, default: Scheme) -> Result<Arc<Grid>, String> {
    let scheme = common.scheme.map(Scheme::from).unwrap_or(default);
    build_grid(domain, common.grid as usize, scheme)
        .map(Arc::new)
        .map_err(|e| e.to_string())
}

fn lumps_for(kind: PriorKind, args: &crate::LumpArgs, records: &mut Vec<Record>) -> (f64, f64) {
    if kind == PriorKind::Mixed {
        lump_masses(args, records)
    } else {
        (0.0, 0.0)
    }
}

fn load_data(model: ModelChoice, args: &DataArgs) -> Result<Dataset, String> {
    match (&args.data, model) {
        (Some(_), _) if args.successes.is_some() || args.failures.is_some() => {
            Err("give either --data or --successes/--failures, not both".into())
        }
        (Some(path), _) => Dataset::read(path).map_err(|e| e.to_string()),
        (None, ModelChoice::Bernoulli) => Ok(Dataset::bernoulli(
            args.successes.unwrap_or(0),
            args.failures.unwrap_or(0),
        )),
        (None, m) if args.successes.is_some() || args.failures.is_some() => {
            Err(format!("--successes/--failures apply to the bernoulli model, not {m}"))
        }
        (None, m) => Ok(Dataset::empty(m.to_string())),
    }
}

fn model_object(model: ModelChoice) -> Box<dyn LikelihoodModel> {
    match model {
        ModelChoice::Bernoulli => Box::new(bernoulli_model()),
        ModelChoice::Correlation => Box::new(correlation_model()),
    }
}

fn total_mass_value(p: &PriorMeasure) -> f64 {
    match p.total_mass() {
        Some(m) => m,
        None if p.is_divergent() => f64::INFINITY,
        None => f64::NAN,
    }
}

fn push_table(records: &mut Vec<Record>, grid: &Grid, values: &[f64]) {
    for (x, v) in grid.nodes().iter().zip(values) {
        records.push(Record::new("density").with("nodes", *x).with("density", *v));
    }
}

pub fn prior(args: &PriorArgs, records: &mut Vec<Record>) -> Outcome {
    let lumps = lumps_for(args.kind, &args.lumps, records);
    let grid = make_grid(&args.common, &args.model.domain(), args.model.default_scheme())?;
    let mut p = build_prior(args.kind, args.model, &grid, lumps)?;
    if args.normalize {
        p = normalize(&p).map_err(|e| e.to_string())?;
    }
    records.push(
        Record::new("prior")
            .with("label", p.label())
            .with("model", args.model.to_string())
            .with("proper", p.is_proper())
            .with("constant", p.coef())
            .with("total_mass", total_mass_value(&p))
            .with("lower_limit", p.endpoint_limit(Endpoint::Lower))
            .with("upper_limit", p.endpoint_limit(Endpoint::Upper))
            .with("endpoint_offset", ENDPOINT_OFFSET)
            .with("scheme", grid.scheme().to_string())
            .with("grid", grid.len()),
    );
    for a in p.atoms() {
        records.push(Record::new("atoms").with("atoms", a.location).with("mass", a.mass));
    }
    push_table(records, &grid, &p.density_on(&grid));
    Ok(())
}

pub fn posterior_cmd(args: &PosteriorArgs, records: &mut Vec<Record>) -> Outcome {
    let data = load_data(args.model, &args.data)?;
    let lumps = lumps_for(args.kind, &args.lumps, records);
    let grid = make_grid(&args.common, &args.model.domain(), args.model.default_scheme())?;
    let p = build_prior(args.kind, args.model, &grid, lumps)?;
    let model = model_object(args.model);
    let post = posterior(&p, model.as_ref(), &data, &grid).map_err(|e| e.to_string())?;
    let err = |e: InferenceError| e.to_string();
    records.push(
        Record::new("posterior")
            .with("prior", post.prior_label.clone())
            .with("data", post.data_summary.clone())
            .with("marginal", post.marginal)
            .with("log_marginal", post.log_marginal)
            .with("prior_normalized", post.prior_normalized)
            .with("mean", post.mean().map_err(err)?)
            .with("sd", post.sd().map_err(err)?),
    );
    for a in &post.atoms {
        records.push(Record::new("atoms").with("atoms", a.location).with("mass", a.mass));
    }
    push_table(records, &grid, post.density.values());
    Ok(())
}

pub fn succession(args: &SuccessionArgs, records: &mut Vec<Record>) -> Outcome {
    let lumps = if args.kind.contains(&PriorKind::Mixed) {
        lump_masses(&args.lumps, records)
    } else {
        (0.0, 0.0)
    };
    let model = ModelChoice::Bernoulli;
    let grid = make_grid(&args.common, &model.domain(), model.default_scheme())?;
    let priors = args
        .kind
        .iter()
        .map(|&k| build_prior(k, model, &grid, lumps))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = if args.haldane_limit {
        SuccessionMode::HaldaneLimit
    } else {
        SuccessionMode::Strict
    };
    let mut notes = Vec::new();
    for n in 0..=args.n_max {
        let mut row = Record::new("succession").with("n", n);
        for p in &priors {
            let v = if p.beta_shape().is_some() {
                rule_of_succession_with(p, n, mode)
            } else {
                rule_of_succession_on(p, n, &grid, mode)
            };
            match v {
                Ok(v) => row = row.with(p.label(), v),
                Err(e @ InferenceError::ImproperPosterior(_)) => {
                    row = row.with(p.label(), "improper");
                    notes.push(
                        Record::new("note")
                            .with("prior", p.label())
                            .with("n", n)
                            .with("message", e.to_string()),
                    );
                }
                Err(e) => return Err(format!("{} at n = {n}: {e}", p.label())),
            }
        }
        records.push(row);
    }
    records.extend(notes);
    Ok(())
}

fn report_record(r: &InfoReport) -> Record {
    Record::new("efficiency")
        .with("candidate", r.candidate_label.clone())
        .with("output_info", r.output_info)
        .with("input_info", r.input_info)
        .with("delta", r.delta)
        .with("efficiency", r.efficiency)
}

pub fn efficiency(args: &EfficiencyArgs, records: &mut Vec<Record>) -> Outcome {
    if args.perturbations > 0 && args.seed.is_none() {
        return Err("--seed is required when --perturbations is positive".into());
    }
    let data = load_data(args.model, &args.data)?;
    let grid = make_grid(&args.common, &args.model.domain(), args.model.default_scheme())?;
    let lumps = lumps_for(args.kind, &args.lumps, records);
    let p = build_prior(args.kind, args.model, &grid, lumps)?;
    let model = model_object(args.model);
    let err = |e: InferenceError| e.to_string();
    let g = optimal_output(&p, model.as_ref(), &data, &grid).map_err(err)?;
    let bayes = info_delta(&g, &p, model.as_ref(), &data)
        .map_err(err)?
        .with_label("posterior");
    records.push(report_record(&bayes));
    let lg = likelihood_only_output(model.as_ref(), &data, &grid).map_err(err)?;
    let lik = info_delta_likelihood_only(&lg, model.as_ref(), &data)
        .map_err(err)?
        .with_label("likelihood-only");
    records.push(report_record(&lik));

    let mut min_delta = f64::INFINITY;
    if let Some(seed) = args.seed.filter(|_| args.perturbations > 0) {
        let mut max_delta = f64::NEG_INFINITY;
        let mut max_gap: f64 = 0.0;
        for (_, c) in random_candidates(&g, args.perturbations, seed).map_err(err)? {
            let r = info_delta(&c, &p, model.as_ref(), &data).map_err(err)?;
            let kl = kl_divergence(&c, &g).map_err(|e| e.to_string())?;
            min_delta = min_delta.min(r.delta);
            max_delta = max_delta.max(r.delta);
            max_gap = max_gap.max((r.delta - kl).abs());
        }
        records.push(
            Record::new("perturbations")
                .with("count", args.perturbations)
                .with("seed", seed)
                .with("min_delta", min_delta)
                .with("max_delta", max_delta)
                .with("max_kl_gap", max_gap),
        );
    }
    if !(bayes.delta <= EFFICIENCY_TOL) {
        return Err(format!("posterior delta {} exceeds {EFFICIENCY_TOL}", bayes.delta));
    }
    if min_delta < -EFFICIENCY_TOL {
        return Err(format!("a perturbed candidate has delta {min_delta} below -{EFFICIENCY_TOL}"));
    }
    Ok(())
}

/// Exponents `k` of the gaps `10^-k` at which the AR(1) kernels are sampled.
const KERNEL_GAPS: std::ops::RangeInclusive<i32> = 2..=8;

pub fn ar1(args: &Ar1Args, records: &mut Vec<Record>) -> Outcome {
    if !(args.sigma > 0.0 && args.sigma.is_finite()) {
        return Err(format!("--sigma must be positive, got {}", args.sigma));
    }
    let data = match &args.data {
        Some(path) => Dataset::read(path).map_err(|e| e.to_string())?,
        None => {
            let seed = args
                .seed
                .ok_or("--seed is required to simulate an AR(1) series")?;
            if !(args.b.abs() < 1.0) {
                return Err(format!("--b must satisfy |b| < 1, got {}", args.b));
            }
            if args.t < 2 {
                return Err(format!("--T must be at least 2, got {}", args.t));
            }
            simulate_ar1(args.t, args.b, args.sigma, seed).map_err(|e| e.to_string())?
        }
    };
    let grid = make_grid(&args.common, &ParamDomain::symmetric_singular(), Scheme::GaussLegendre)?;
    let mut means = Vec::new();
    for kind in [Ar1PriorKind::Mdip, Ar1PriorKind::Jeffreys] {
        let post = ar1_posterior_b(&data, args.sigma, kind, &grid).map_err(|e| e.to_string())?;
        let mean = post.mean().map_err(|e| e.to_string())?;
        let sd = post.sd().map_err(|e| e.to_string())?;
        means.push(mean);
        records.push(
            Record::new("ar1")
                .with("prior", kind.to_string())
                .with("mean", mean)
                .with("sd", sd)
                .with("mode", grid.nodes()[post.density.argmax()]),
        );
    }
    for k in KERNEL_GAPS {
        let gap = 10f64.powi(-k);
        for sign in [-1.0, 1.0] {
            let a = if sign > 0.0 {
                Abscissa { x: 1.0 - gap, below: 2.0 - gap, above: gap }
            } else {
                Abscissa { x: gap - 1.0, below: gap, above: 2.0 - gap }
            };
            let mdip = mdip_ar1_density_at(&a, args.sigma).map_err(|e| e.to_string())?;
            let jeff = jeffreys_ar1_density_at(&a, args.sigma).map_err(|e| e.to_string())?;
            records.push(
                Record::new("kernel")
                    .with("b", a.x)
                    .with("gap", gap)
                    .with("mdip", mdip)
                    .with("jeffreys", jeff),
            );
        }
    }
    let source = match (&args.data, args.seed) {
        (Some(path), _) => format!("file {}", path.display()),
        (None, Some(seed)) => format!("simulated, b = {}, seed = {seed}", args.b),
        (None, None) => unreachable!("simulation requires a seed"),
    };
    records.push(
        Record::new("ar1-summary")
            .with("T", data.len())
            .with("sigma", args.sigma)
            .with("series", source)
            .with("mean_difference", (means[0] - means[1]).abs()),
    );
    Ok(())
}
