use rayon::prelude::*;

use super::{check_level, min_null_draws, null_quantile, random_order, MethodId, Scenario, SetScorer};
use crate::error::{Error, Result};
use crate::seed::{self, tag};

/// Power of one method in one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub method: MethodId,
    pub r_or_beta: f64,
    pub ld_design: String,
    pub power: f64,
    pub cutoff: f64,
    pub n_sims: usize,
    pub n_perms: usize,
    pub seed: u64,
    /// Observed statistic of each simulation, in simulation order.
    pub observed: Vec<f64>,
}

impl ScenarioResult {
    /// Binomial standard error of `power`.
    pub fn std_error(&self) -> f64 {
        (self.power * (1.0 - self.power) / self.n_sims as f64).sqrt()
    }
}

/// Power of a single method; see [`power_study`].
pub fn empirical_power(
    method: MethodId,
    scenario: &Scenario,
    n_sims: usize,
    n_perms: usize,
    level: f64,
    seed: u64,
) -> Result<ScenarioResult> {
    Ok(power_study(&[method], scenario, n_sims, n_perms, level, seed)?.remove(0))
}

/// Power of several methods on shared simulations.
///
/// Each simulation draws fresh genotypes, signal locations and trait, then
/// scores the observed trait and `n_perms` permutations of it. The
/// permuted statistics of all simulations are pooled into one null sample
/// per method whose `ceil((1 - level) m)`-th order statistic is the cutoff;
/// power is the share of simulations whose observed statistic exceeds it.
///
/// Seeds depend on the master seed and the simulation id only, so runs of
/// one design at different effect sizes use common random numbers.
pub fn power_study(
    methods: &[MethodId],
    scenario: &Scenario,
    n_sims: usize,
    n_perms: usize,
    level: f64,
    seed: u64,
) -> Result<Vec<ScenarioResult>> {
    check_level(level)?;
    if n_sims < 100 {
        return Err(Error::invalid("n_sims", format!("{n_sims} is below 100")));
    }
    let required = min_null_draws(level);
    if n_perms == 0 || n_sims * n_perms < required {
        return Err(Error::TooFewPermutations { n_perms: n_sims * n_perms, level, required });
    }
    for m in methods {
        m.marginal_kind(scenario.kind())?;
    }
    let prepared = scenario.prepare()?;
    let per_sim = (0..n_sims)
        .into_par_iter()
        .map(|i| {
            let sim_seed = seed::derive_seed(seed, &[i as u64]);
            let (x, y, _) = prepared.simulate(sim_seed, true)?;
            let scorer = SetScorer::new(&x, methods, y.kind(), scenario.jitter)?;
            let observed = scorer.score(&y)?;
            let nulls = (0..n_perms)
                .map(|p| {
                    let order = random_order(y.len(), &mut seed::rng(sim_seed, &[tag::PERMUTATION, p as u64]));
                    scorer.score_permuted(&y, &order)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((observed, nulls))
        })
        .collect::<Result<Vec<_>>>()?;

    let ld_design = scenario.ld.name();
    methods
        .iter()
        .enumerate()
        .map(|(mi, &method)| {
            let nulls: Vec<f64> = per_sim.iter().flat_map(|(_, n)| n.iter().map(|s| s[mi])).collect();
            let cutoff = null_quantile(&nulls, level)?;
            let observed: Vec<f64> = per_sim.iter().map(|(o, _)| o[mi]).collect();
            let hits = observed.iter().filter(|&&o| o > cutoff).count();
            Ok(ScenarioResult {
                method,
                r_or_beta: scenario.effect.value(),
                ld_design: ld_design.clone(),
                power: hits as f64 / n_sims as f64,
                cutoff,
                n_sims,
                n_perms,
                seed,
                observed,
            })
        })
        .collect()
}
