//! Correlated Hardy-Weinberg genotypes from a latent Gaussian copula.
//!
//! Each subject carries two independent haplotypes. A haplotype is a vector
//! of thresholded latent normals `z = C e` with `C` the lower Cholesky
//! factor of the latent correlation matrix, so every allele is
//! Bernoulli(`q_j`) and allele pairs have the requested correlation. The
//! genotype is the sum of the two haplotypes: Binomial(2, `q_j`) margins with
//! genotype correlation equal to the allele correlation.
//!
//! Column `j` draws its innovations from substream `j` of the seed, and
//! `z_j` only depends on columns `<= j`, so appending columns leaves earlier
//! columns unchanged.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::latent::solve_latent_correlation;
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::normal;
use crate::seed;
use crate::stats::GenotypeMatrix;

/// Latent correlation matrix reproducing `target` on Bernoulli(`q`) alleles.
pub fn latent_matrix(target: &Matrix, q: &[f64]) -> Result<Matrix> {
    let l = target.ensure_square()?;
    if q.len() != l {
        return Err(Error::DimensionMismatch { expected: l, got: q.len() });
    }
    let mut cache: HashMap<(u64, u64, u64), f64> = HashMap::new();
    let mut out = Matrix::identity(l);
    for i in 0..l {
        for j in 0..i {
            let rho = target[(i, j)];
            if rho == 0.0 {
                continue;
            }
            let key = (rho.to_bits(), q[i].to_bits(), q[j].to_bits());
            let rz = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = solve_latent_correlation(rho, q[i], q[j])?;
                    cache.insert(key, v);
                    v
                }
            };
            out[(i, j)] = rz;
            out[(j, i)] = rz;
        }
    }
    Ok(out)
}

/// Thresholds and latent Cholesky factor shared by every replicate of a design.
#[derive(Debug, Clone)]
pub struct LatentModel {
    thresholds: Vec<f64>,
    chol: Option<Cholesky>,
}

impl LatentModel {
    pub fn new(q: &[f64], sigma_target: &Matrix) -> Result<Self> {
        let l = sigma_target.ensure_square()?;
        if q.len() != l {
            return Err(Error::DimensionMismatch { expected: l, got: q.len() });
        }
        if let Some(v) = q.iter().find(|v| !(**v > 0.0 && **v <= 0.5)) {
            return Err(Error::invalid("q", format!("MAF {v} is outside (0, 1/2]")));
        }
        let identity = (0..l).all(|i| (0..i).all(|j| sigma_target[(i, j)] == 0.0));
        let chol = if identity {
            None
        } else {
            let latent = latent_matrix(sigma_target, q)?;
            Some(Cholesky::new(&latent).map_err(|e| match e {
                Error::NotPositiveDefinite { index } => Error::LatentNotPD { index },
                other => other,
            })?)
        };
        Ok(LatentModel { thresholds: q.iter().map(|&v| normal::quantile(v)).collect(), chol })
    }

    pub fn l(&self) -> usize {
        self.thresholds.len()
    }
}

/// Stateful genotype generator; successive calls continue the same streams.
#[derive(Debug, Clone)]
pub struct GenotypeSampler {
    model: Arc<LatentModel>,
    streams: Vec<ChaCha8Rng>,
}

impl GenotypeSampler {
    pub fn new(q: &[f64], sigma_target: &Matrix, seed: u64) -> Result<Self> {
        Ok(Self::from_model(Arc::new(LatentModel::new(q, sigma_target)?), seed))
    }

    pub fn from_model(model: Arc<LatentModel>, seed: u64) -> Self {
        let streams = (0..model.l() as u64).map(|j| seed::substream(seed, j)).collect();
        GenotypeSampler { model, streams }
    }

    pub fn l(&self) -> usize {
        self.model.l()
    }

    /// Draws `n` more subjects.
    pub fn sample(&mut self, n: usize) -> Result<GenotypeMatrix> {
        let l = self.l();
        // innovations[j][2k + h]: column j, subject k, haplotype h
        let innovations: Vec<Vec<f64>> =
            self.streams.iter_mut().map(|r| (0..2 * n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()).collect();
        let mut counts = vec![0u8; n * l];
        let mut e = vec![0.0; l];
        let mut z = vec![0.0; l];
        for k in 0..n {
            for h in 0..2 {
                for j in 0..l {
                    e[j] = innovations[j][2 * k + h];
                }
                let latent = match &self.model.chol {
                    Some(c) => {
                        c.mul_lower(&e, &mut z);
                        &z
                    }
                    None => &e,
                };
                for j in 0..l {
                    if latent[j] <= self.model.thresholds[j] {
                        counts[j * n + k] += 1;
                    }
                }
            }
        }
        GenotypeMatrix::from_counts(n, l, &counts)
    }
}

/// Draws `n` subjects with Binomial(2, `q_j`) genotypes whose correlation
/// matrix targets `sigma_target`.
pub fn simulate_genotypes(n: usize, q: &[f64], sigma_target: &Matrix, seed: u64) -> Result<GenotypeMatrix> {
    GenotypeSampler::new(q, sigma_target, seed)?.sample(n)
}
