//! Quantitative and case/control trait simulation.

use rand::Rng;
use rand_distr::StandardNormal;

use std::sync::Arc;

use super::genotype::{GenotypeSampler, LatentModel};
use super::signal::SignalConfig;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::seed::{self, tag};
use crate::stats::{GenotypeMatrix, Phenotype};

/// Intercept of the logistic model used in the case/control designs.
pub const DEFAULT_BETA0: f64 = -2.0;

/// `Y = X beta + eps`, `eps ~ N(0, sigma^2)`. The intercept is 0.
pub fn simulate_quantitative(x: &GenotypeMatrix, cfg: &SignalConfig, sigma: f64, seed: u64) -> Result<Phenotype> {
    if cfg.l() != x.l() {
        return Err(Error::DimensionMismatch { expected: x.l(), got: cfg.l() });
    }
    if !(sigma >= 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    let mut rng = seed::rng(seed, &[]);
    let mut y: Vec<f64> = (0..x.n()).map(|_| sigma * rng.sample::<f64, _>(StandardNormal)).collect();
    for &j in &cfg.support {
        let b = cfg.beta[j];
        for (yi, g) in y.iter_mut().zip(x.col(j)) {
            *yi += b * g;
        }
    }
    Phenotype::quantitative(y)
}

fn logistic(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

/// Retrospective case/control sample: subjects are drawn from the
/// population, given a disease outcome from the logistic model, and kept
/// until both quotas are filled. Returns cases first, then controls.
pub fn simulate_case_control(
    q: &[f64],
    sigma_target: &Matrix,
    cfg: &SignalConfig,
    beta0: f64,
    n_case: usize,
    n_control: usize,
    seed: u64,
) -> Result<(GenotypeMatrix, Phenotype)> {
    let model = Arc::new(LatentModel::new(q, sigma_target)?);
    simulate_case_control_with(&model, cfg, beta0, n_case, n_control, seed)
}

/// [`simulate_case_control`] with a prebuilt latent model.
pub fn simulate_case_control_with(
    model: &Arc<LatentModel>,
    cfg: &SignalConfig,
    beta0: f64,
    n_case: usize,
    n_control: usize,
    seed: u64,
) -> Result<(GenotypeMatrix, Phenotype)> {
    if n_case == 0 || n_control == 0 {
        return Err(Error::invalid("quotas", "need at least one case and one control"));
    }
    let l = model.l();
    if cfg.l() != l {
        return Err(Error::DimensionMismatch { expected: l, got: cfg.l() });
    }
    let mut sampler = GenotypeSampler::from_model(Arc::clone(model), seed::derive_seed(seed, &[tag::GENOTYPE]));
    let mut outcome_rng = seed::rng(seed, &[tag::PHENOTYPE]);
    let batch = 2 * (n_case + n_control).max(512);
    // per-column dosages of accepted cases and controls
    let mut case_cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n_case); l];
    let mut control_cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n_control); l];
    let (mut n_cases, mut n_controls) = (0usize, 0usize);
    let (mut drawn, mut prob_sum) = (0usize, 0.0f64);
    while n_cases < n_case || n_controls < n_control {
        let x = sampler.sample(batch)?;
        for k in 0..batch {
            let eta = beta0 + cfg.support.iter().map(|&j| cfg.beta[j] * x.get(k, j)).sum::<f64>();
            let p = logistic(eta);
            prob_sum += p;
            let is_case = outcome_rng.random::<f64>() < p;
            let target = if is_case && n_cases < n_case {
                n_cases += 1;
                &mut case_cols
            } else if !is_case && n_controls < n_control {
                n_controls += 1;
                &mut control_cols
            } else {
                continue;
            };
            for (j, col) in target.iter_mut().enumerate() {
                col.push(x.get(k, j));
            }
        }
        drawn += batch;
        let rate = prob_sum / drawn as f64;
        let worst = rate.min(1.0 - rate);
        if worst < 1e-6 {
            return Err(Error::QuotaStall(worst));
        }
    }
    let n = n_case + n_control;
    let mut data = Vec::with_capacity(n * l);
    for (c, d) in case_cols.into_iter().zip(control_cols) {
        data.extend(c);
        data.extend(d);
    }
    let x = GenotypeMatrix::from_dosages(n, l, data)?;
    let mut labels = vec![1u8; n_case];
    labels.extend(std::iter::repeat_n(0u8, n_control));
    Ok((x, Phenotype::binary(&labels)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simgen::genotype::simulate_genotypes;
    use crate::simgen::signal::{draw_signal_config, CoefScheme};

    fn variance(v: &[f64]) -> f64 {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
    }

    #[test]
    fn zero_model_is_zero() {
        let x = simulate_genotypes(20, &[0.4; 3], &Matrix::identity(3), 1).unwrap();
        let y = simulate_quantitative(&x, &SignalConfig::null(3), 0.0, 2).unwrap();
        assert!(y.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn noise_variance() {
        let x = simulate_genotypes(10_000, &[0.4; 2], &Matrix::identity(2), 1).unwrap();
        let y = simulate_quantitative(&x, &SignalConfig::null(2), 1.0, 4).unwrap();
        let v = variance(y.values());
        assert!((0.94..=1.06).contains(&v), "var {v}");
    }

    #[test]
    fn heritability_of_simulated_trait() {
        let n = 10_000;
        let x = simulate_genotypes(n, &[0.4; 100], &Matrix::identity(100), 11).unwrap();
        let cfg = draw_signal_config(100, 3, CoefScheme::Fixed, 0.131, 12).unwrap();
        let y = simulate_quantitative(&x, &cfg, 1.0, 13).unwrap();
        let genetic: Vec<f64> = (0..n).map(|k| cfg.support.iter().map(|&j| cfg.beta[j] * x.get(k, j)).sum()).collect();
        let h = variance(&genetic) / variance(y.values());
        assert!((h - 0.024).abs() < 0.01, "h2 {h}");
    }

    #[test]
    fn dimension_mismatch() {
        let x = simulate_genotypes(20, &[0.4; 3], &Matrix::identity(3), 1).unwrap();
        assert!(matches!(
            simulate_quantitative(&x, &SignalConfig::null(4), 1.0, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotas_are_met_and_null_is_balanced() {
        let l = 10;
        let (x, y) =
            simulate_case_control(&[0.4; 10], &Matrix::identity(l), &SignalConfig::null(l), -2.0, 1000, 1000, 3)
                .unwrap();
        assert_eq!(x.n(), 2000);
        assert_eq!((y.n_case(), y.n_control()), (1000, 1000));
        assert!(y.values()[..1000].iter().all(|&v| v == 1.0));
        let (mut case, mut ctrl) = (0.0, 0.0);
        for j in 0..l {
            let col = x.col(j);
            let (c, d) = (col[..1000].iter().sum::<f64>() / 2000.0, col[1000..].iter().sum::<f64>() / 2000.0);
            // per-column difference has sd about 0.0155
            assert!((c - d).abs() < 0.06, "{c} vs {d}");
            case += c / l as f64;
            ctrl += d / l as f64;
        }
        assert!((case - ctrl).abs() < 0.02, "{case} vs {ctrl}");
    }

    #[test]
    fn risk_alleles_enriched_in_cases() {
        let l = 20;
        let mut wins = 0;
        for rep in 0..100u64 {
            let cfg = draw_signal_config(l, 3, CoefScheme::Fixed, 0.24, rep).unwrap();
            let (x, _) =
                simulate_case_control(&[0.4; 20], &Matrix::identity(l), &cfg, -2.0, 1000, 1000, 1000 + rep).unwrap();
            let enriched = cfg
                .support
                .iter()
                .all(|&j| x.col(j)[..1000].iter().sum::<f64>() > x.col(j)[1000..].iter().sum::<f64>());
            if enriched {
                wins += 1;
            }
        }
        assert!(wins >= 95, "wins {wins}");
    }

    #[test]
    fn stalls_on_extreme_intercept() {
        let err =
            simulate_case_control(&[0.4], &Matrix::identity(1), &SignalConfig::null(1), -40.0, 5, 5, 0).unwrap_err();
        assert!(matches!(err, Error::QuotaStall(_)));
    }
}
