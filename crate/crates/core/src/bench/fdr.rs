use rayon::prelude::*;

use super::{check_level, null_quantile, random_order, MethodId, Scenario, SetScorer};
use crate::error::{Error, Result};
use crate::seed::{self, tag};

/// Gene population for an FDR experiment. Genes `0..n_signal` carry the
/// scenario's signal; the rest are null.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FdrDesign {
    pub n_genes: usize,
    pub n_signal: usize,
}

/// Empirical FDR of one method at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct FdrRow {
    pub method: MethodId,
    pub level: f64,
    pub fdr: f64,
    pub mean_rejections: f64,
    pub mean_false_positives: f64,
}

/// Empirical FDR over a grid of permutation levels.
///
/// In each simulation every gene is an independent dataset scored once as
/// observed and once under a permutation of its trait. The permuted
/// statistics of all genes form that simulation's null sample; at each
/// level a gene is declared significant when its statistic exceeds the
/// `ceil((1 - level) m)`-th null order statistic. FDR is false positives
/// over `max(1, rejections)`, averaged over simulations.
pub fn fdr_curve(
    methods: &[MethodId],
    scenario: &Scenario,
    design: FdrDesign,
    levels: &[f64],
    n_sims: usize,
    seed: u64,
) -> Result<Vec<FdrRow>> {
    if levels.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &lv in levels {
        check_level(lv)?;
    }
    if n_sims == 0 {
        return Err(Error::invalid("n_sims", "must be at least 1"));
    }
    if design.n_genes == 0 || design.n_signal > design.n_genes {
        return Err(Error::invalid(
            "genes",
            format!("{} signal genes among {} is not a valid design", design.n_signal, design.n_genes),
        ));
    }
    for m in methods {
        m.marginal_kind(scenario.kind())?;
    }
    let prepared = scenario.prepare()?;
    let n_genes = design.n_genes;
    let jobs: Vec<(usize, usize)> = (0..n_sims).flat_map(|s| (0..n_genes).map(move |g| (s, g))).collect();
    let scored = jobs
        .into_par_iter()
        .map(|(s, g)| {
            let gene_seed = seed::derive_seed(seed, &[s as u64, tag::GENE, g as u64]);
            let (x, y, _) = prepared.simulate(gene_seed, g < design.n_signal)?;
            let scorer = SetScorer::new(&x, methods, y.kind(), scenario.jitter)?;
            let observed = scorer.score(&y)?;
            let order = random_order(y.len(), &mut seed::rng(gene_seed, &[tag::PERMUTATION]));
            Ok((observed, scorer.score_permuted(&y, &order)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(methods.len() * levels.len());
    for (mi, &method) in methods.iter().enumerate() {
        for &level in levels {
            let (mut fdr, mut rej, mut fp) = (0.0, 0.0, 0.0);
            for sim in scored.chunks(n_genes) {
                let nulls: Vec<f64> = sim.iter().map(|(_, n)| n[mi]).collect();
                let cutoff = null_quantile(&nulls, level)?;
                let rejected: Vec<usize> = (0..n_genes).filter(|&g| sim[g].0[mi] > cutoff).collect();
                let false_pos = rejected.iter().filter(|&&g| g >= design.n_signal).count();
                fdr += false_pos as f64 / rejected.len().max(1) as f64;
                rej += rejected.len() as f64;
                fp += false_pos as f64;
            }
            let k = n_sims as f64;
            rows.push(FdrRow { method, level, fdr: fdr / k, mean_rejections: rej / k, mean_false_positives: fp / k });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{Effect, TraitModel};
    use crate::simgen::{CoefScheme, LdSpec};

    fn scenario(r: f64) -> Scenario {
        Scenario {
            l: 10,
            n: 200,
            q: 0.4,
            ld: LdSpec::Identity,
            trait_model: TraitModel::Additive { sigma: 1.0 },
            k: 2,
            effect: Effect::Strength(r),
            scheme: CoefScheme::Fixed,
            jitter: None,
        }
    }

    #[test]
    fn all_null_genes() {
        let rows =
            fdr_curve(&[MethodId::Hc], &scenario(0.9), FdrDesign { n_genes: 60, n_signal: 0 }, &[0.1, 0.3], 3, 1)
                .unwrap();
        for row in rows {
            assert_eq!(row.mean_rejections, row.mean_false_positives);
            // every simulation with a rejection has FDR 1
            assert!(row.fdr <= 1.0 && row.fdr > 0.0);
        }
    }

    #[test]
    fn all_signal_genes() {
        let rows = fdr_curve(
            &[MethodId::Hc, MethodId::MinP],
            &scenario(0.9),
            FdrDesign { n_genes: 30, n_signal: 30 },
            &[0.05, 0.2],
            2,
            1,
        )
        .unwrap();
        assert!(rows.iter().all(|r| r.fdr == 0.0 && r.mean_false_positives == 0.0));
    }

    #[test]
    fn worker_count_does_not_matter() {
        let design = FdrDesign { n_genes: 40, n_signal: 5 };
        let a = fdr_curve(&MethodId::ALL, &scenario(0.7), design, &[0.05, 0.1], 2, 8).unwrap();
        let b = crate::bench::with_workers(Some(2), || {
            fdr_curve(&MethodId::ALL, &scenario(0.7), design, &[0.05, 0.1], 2, 8)
        })
        .unwrap()
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_grid() {
        let design = FdrDesign { n_genes: 10, n_signal: 2 };
        assert!(fdr_curve(&[MethodId::Hc], &scenario(0.5), design, &[], 1, 1).is_err());
        assert!(fdr_curve(&[MethodId::Hc], &scenario(0.5), design, &[1.0], 1, 1).is_err());
    }
}
