use rayon::prelude::*;

use super::{random_order, MethodId, SetScorer};
use crate::error::{Error, Result};
use crate::seed::{self, tag};
use crate::stats::{GenotypeMatrix, Phenotype};

/// A named set of genotype columns (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gene {
    pub name: String,
    pub columns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneRow {
    pub name: String,
    pub snps: usize,
    /// Per method, in the ranking's method order.
    pub observed: Vec<f64>,
    pub pvalues: Vec<f64>,
    pub ranks: Vec<f64>,
}

/// Gene-level empirical p-values and tie-averaged ranks for several methods.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneRanking {
    pub methods: Vec<MethodId>,
    pub n_perms: usize,
    pub genes: Vec<GeneRow>,
}

impl GeneRanking {
    /// Mean rank of the named genes for each method. Unknown names are an error.
    pub fn average_rank(&self, targets: &[&str]) -> Result<Vec<f64>> {
        if targets.is_empty() {
            return Err(Error::EmptyInput);
        }
        let rows = targets
            .iter()
            .map(|t| {
                self.genes
                    .iter()
                    .find(|g| g.name == *t)
                    .ok_or_else(|| Error::invalid("gene", format!("'{t}' is not in the ranking")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.methods.len())
            .map(|mi| rows.iter().map(|r| r.ranks[mi]).sum::<f64>() / rows.len() as f64)
            .collect())
    }
}

/// Ranks `1..=n` in ascending order of `values`, ties sharing their mean rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let mean = (start + end + 1) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

/// Ranks genes by permutation p-values with genotypes held fixed.
///
/// Permutation `p` reorders the trait identically for every gene, so the
/// genes' null statistics are computed on the same shuffled traits. The
/// p-value is `(1 + #{null >= observed}) / (1 + n_perms)`.
pub fn rank_gene_sets(
    genes: &[Gene],
    x: &GenotypeMatrix,
    y: &Phenotype,
    methods: &[MethodId],
    n_perms: usize,
    seed: u64,
) -> Result<GeneRanking> {
    if genes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_perms < 100 {
        return Err(Error::invalid("n_perms", format!("{n_perms} is below 100")));
    }
    if y.len() != x.n() {
        return Err(Error::DimensionMismatch { expected: x.n(), got: y.len() });
    }
    let mut seen = vec![false; x.l()];
    for g in genes {
        if g.columns.is_empty() {
            return Err(Error::EmptyGene(g.name.clone()));
        }
        for &c in &g.columns {
            if c >= x.l() {
                return Err(Error::invalid("gene", format!("'{}' references column {c} of {}", g.name, x.l())));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::invalid("gene", format!("column {c} belongs to more than one gene")));
            }
        }
    }
    let per_gene = genes
        .par_iter()
        .map(|g| {
            let block = x.select_columns(&g.columns);
            let scorer = SetScorer::new(&block, methods, y.kind(), None)?;
            let observed = scorer.score(y)?;
            let mut exceed = vec![0usize; methods.len()];
            for p in 0..n_perms {
                let order = random_order(y.len(), &mut seed::rng(seed, &[tag::PERMUTATION, p as u64]));
                for (e, (null, obs)) in exceed.iter_mut().zip(scorer.score_permuted(y, &order)?.iter().zip(&observed)) {
                    if null >= obs {
                        *e += 1;
                    }
                }
            }
            let pvalues = exceed.iter().map(|&e| (1 + e) as f64 / (1 + n_perms) as f64).collect();
            Ok((observed, pvalues))
        })
        .collect::<Result<Vec<(Vec<f64>, Vec<f64>)>>>()?;

    let ranks_by_method: Vec<Vec<f64>> =
        (0..methods.len()).map(|mi| average_ranks(&per_gene.iter().map(|(_, p)| p[mi]).collect::<Vec<_>>())).collect();
    let rows = genes
        .iter()
        .zip(per_gene)
        .enumerate()
        .map(|(gi, (g, (observed, pvalues)))| GeneRow {
            name: g.name.clone(),
            snps: g.columns.len(),
            observed,
            pvalues,
            ranks: ranks_by_method.iter().map(|r| r[gi]).collect(),
        })
        .collect();
    Ok(GeneRanking { methods: methods.to_vec(), n_perms, genes: rows })
}
