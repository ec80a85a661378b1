//! Permutation-calibrated experiments: null cutoffs, power, FDR and
//! gene ranking.
//!
//! Every replicate, gene and permutation draws from its own seed derived
//! from the master seed and its ids, and results are gathered in index
//! order, so outputs do not depend on the number of worker threads.

mod fdr;
mod method;
mod power;
mod rank;
mod report;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::boundary::{beta_from_r, ArwScenario};
use crate::error::{Error, Result};
use crate::seed::{self, tag};
use crate::simgen::{
    build_ld, draw_signal_config, simulate_case_control_with, simulate_quantitative, CoefScheme, GenotypeSampler,
    LatentModel, LdSpec, SignalConfig,
};
use crate::stats::{GenotypeMatrix, Phenotype, TraitKind};

pub use fdr::{fdr_curve, FdrDesign, FdrRow};
pub use method::{MethodId, SetScorer};
pub use power::{empirical_power, power_study, ScenarioResult};
pub use rank::{average_ranks, rank_gene_sets, Gene, GeneRanking, GeneRow};
pub use report::{fmt_f64, write_boundary_csv, write_fdr_csv, write_power_csv, write_ranking_csv};

/// How the trait is generated from the genotypes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraitModel {
    /// `Y = X beta + sigma * eps`.
    Additive { sigma: f64 },
    /// Logistic disease model with retrospective sampling of fixed quotas.
    Logistic { beta0: f64, n_case: usize, n_control: usize },
}

impl TraitModel {
    pub fn kind(&self) -> TraitKind {
        match self {
            TraitModel::Additive { .. } => TraitKind::Quantitative,
            TraitModel::Logistic { .. } => TraitKind::Binary,
        }
    }
}

/// Size of the nonzero coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Effect {
    /// Strength `r` on the `sqrt(2 r ln L)` scale, converted with the
    /// scenario's `n`, `q` and `sigma` (`sigma = 1` for logistic traits).
    Strength(f64),
    /// Coefficient given directly.
    Beta(f64),
}

impl Effect {
    /// The value reported in the `r_or_beta` column.
    pub fn value(&self) -> f64 {
        match *self {
            Effect::Strength(v) | Effect::Beta(v) => v,
        }
    }
}

/// One simulation setting for a single SNP-set.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub l: usize,
    /// Sample size for additive traits; logistic traits use their quotas.
    pub n: usize,
    /// Common minor allele frequency.
    pub q: f64,
    pub ld: LdSpec,
    pub trait_model: TraitModel,
    /// Number of causal SNPs; 0 gives the null model.
    pub k: usize,
    pub effect: Effect,
    pub scheme: CoefScheme,
    /// Ridge added to the empirical correlation before factorising; `None`
    /// means no ridge.
    pub jitter: Option<f64>,
}

impl Scenario {
    pub fn sample_size(&self) -> usize {
        match self.trait_model {
            TraitModel::Additive { .. } => self.n,
            TraitModel::Logistic { n_case, n_control, .. } => n_case + n_control,
        }
    }

    pub fn kind(&self) -> TraitKind {
        self.trait_model.kind()
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 {
            return Err(Error::invalid("L", format!("{} is below 2", self.l)));
        }
        if self.k > self.l {
            return Err(Error::BadK { k: self.k, l: self.l });
        }
        if self.sample_size() < 3 {
            return Err(Error::BadSampleSize { n: self.sample_size(), min: 3 });
        }
        if !(self.q > 0.0 && self.q <= 0.5) {
            return Err(Error::invalid("q", format!("MAF {} is outside (0, 1/2]", self.q)));
        }
        match self.trait_model {
            TraitModel::Additive { sigma } if !(sigma > 0.0) => return Err(Error::NonPositiveSigma(sigma)),
            TraitModel::Logistic { beta0, n_case, n_control } => {
                if !beta0.is_finite() {
                    return Err(Error::invalid("beta0", "must be finite"));
                }
                if n_case == 0 || n_control == 0 {
                    return Err(Error::invalid("quotas", "need at least one case and one control"));
                }
            }
            _ => {}
        }
        if !(self.effect.value() >= 0.0) {
            return Err(Error::invalid("effect", format!("{} is negative", self.effect.value())));
        }
        if let Some(j) = self.jitter {
            if !(j >= 0.0) {
                return Err(Error::invalid("jitter", format!("{j} is negative")));
            }
        }
        Ok(())
    }

    /// Base coefficient implied by the effect.
    pub fn beta(&self) -> Result<f64> {
        match self.effect {
            Effect::Beta(b) => Ok(b),
            Effect::Strength(r) => {
                let sigma = match self.trait_model {
                    TraitModel::Additive { sigma } => sigma,
                    TraitModel::Logistic { .. } => 1.0,
                };
                // alpha does not enter the conversion
                let arw =
                    ArwScenario { l: self.l, n: self.sample_size(), alpha: 0.75, r: r.into(), sigma, q: self.q.into() };
                beta_from_r(&arw, None)
            }
        }
    }

    /// Validates the scenario and does the per-scenario set-up shared by
    /// all replicates.
    pub fn prepare(&self) -> Result<PreparedScenario> {
        self.validate()?;
        let target = build_ld(&self.ld, self.l)?;
        let model = Arc::new(LatentModel::new(&vec![self.q; self.l], &target)?);
        Ok(PreparedScenario { scenario: self.clone(), model, beta: self.beta()? })
    }
}

/// A validated scenario with its latent genotype model.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    scenario: Scenario,
    model: Arc<LatentModel>,
    beta: f64,
}

impl PreparedScenario {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// One dataset. `signal` switches the causal SNPs on; with `false` (or
    /// `k = 0`) the trait is pure noise.
    pub fn simulate(&self, seed: u64, signal: bool) -> Result<(GenotypeMatrix, Phenotype, SignalConfig)> {
        let s = &self.scenario;
        let cfg = if signal && s.k > 0 {
            draw_signal_config(s.l, s.k, s.scheme, self.beta, seed::derive_seed(seed, &[tag::SIGNAL]))?
        } else {
            SignalConfig::null(s.l)
        };
        match s.trait_model {
            TraitModel::Additive { sigma } => {
                let mut sampler =
                    GenotypeSampler::from_model(Arc::clone(&self.model), seed::derive_seed(seed, &[tag::GENOTYPE]));
                let x = sampler.sample(s.n)?;
                let y = simulate_quantitative(&x, &cfg, sigma, seed::derive_seed(seed, &[tag::PHENOTYPE]))?;
                Ok((x, y, cfg))
            }
            TraitModel::Logistic { beta0, n_case, n_control } => {
                let (x, y) = simulate_case_control_with(&self.model, &cfg, beta0, n_case, n_control, seed)?;
                Ok((x, y, cfg))
            }
        }
    }
}

/// Uniform random permutation of `0..n`.
pub fn random_order(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// Minimum number of null draws for a `level` cutoff.
pub fn min_null_draws(level: f64) -> usize {
    (20.0 / level - 1e-9).ceil() as usize
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("level", format!("{level} is outside (0, 1)")))
    }
}

/// The `ceil((1 - level) m)`-th smallest of `m` null draws.
pub fn null_quantile(nulls: &[f64], level: f64) -> Result<f64> {
    check_level(level)?;
    if nulls.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = nulls.iter().position(|v| v.is_nan()) {
        return Err(Error::NonFiniteInput(i));
    }
    let m = nulls.len();
    let k = (((1.0 - level) * m as f64) - 1e-9).ceil().max(1.0) as usize;
    let mut sorted = nulls.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[k.min(m) - 1])
}

/// Cutoff from `n_perms` permutations of `y` for a single statistic.
pub fn permutation_cutoff_with<F>(stat: F, y: &Phenotype, n_perms: usize, level: f64, seed: u64) -> Result<f64>
where
    F: Fn(&Phenotype) -> Result<f64>,
{
    check_level(level)?;
    let required = min_null_draws(level);
    if n_perms < required {
        return Err(Error::TooFewPermutations { n_perms, level, required });
    }
    let nulls = (0..n_perms)
        .map(|p| {
            let order = random_order(y.len(), &mut seed::rng(seed, &[tag::PERMUTATION, p as u64]));
            stat(&y.permuted(&order))
        })
        .collect::<Result<Vec<_>>>()?;
    null_quantile(&nulls, level)
}

/// Permutation cutoff of `method` on the dataset `(x, y)`.
pub fn permutation_cutoff(
    method: MethodId,
    x: &GenotypeMatrix,
    y: &Phenotype,
    n_perms: usize,
    level: f64,
    seed: u64,
) -> Result<f64> {
    let scorer = SetScorer::new(x, &[method], y.kind(), None)?;
    permutation_cutoff_with(|yp| Ok(scorer.score(yp)?[0]), y, n_perms, level, seed)
}

/// Runs `f` on a pool of `workers` threads; `None` uses rayon's default.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("workers", "must be at least 1")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid("workers", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
