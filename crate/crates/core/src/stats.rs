//! Marginal association statistics between single genotype columns and a
//! trait, and their two-sided normal p-values.

use crate::error::{Error, Result};
use crate::normal;

/// `n x L` matrix of minor-allele counts, stored column by column.
///
/// Entries are counts in {0, 1, 2}; after mean imputation of missing calls
/// they may be any real in [0, 2].
#[derive(Debug, Clone, PartialEq)]
pub struct GenotypeMatrix {
    n: usize,
    l: usize,
    data: Vec<f64>,
}

impl GenotypeMatrix {
    /// Builds from column-major allele counts.
    pub fn from_counts(n: usize, l: usize, counts: &[u8]) -> Result<Self> {
        Self::check_shape(n, l, counts.len())?;
        if let Some(pos) = counts.iter().position(|&c| c > 2) {
            return Err(Error::InvalidGenotype { row: pos % n, col: pos / n, value: counts[pos] as f64 });
        }
        Ok(GenotypeMatrix { n, l, data: counts.iter().map(|&c| c as f64).collect() })
    }

    /// Builds from column-major real dosages in [0, 2] (imputed data).
    pub fn from_dosages(n: usize, l: usize, data: Vec<f64>) -> Result<Self> {
        Self::check_shape(n, l, data.len())?;
        if let Some(pos) = data.iter().position(|v| !(0.0..=2.0).contains(v)) {
            return Err(Error::InvalidGenotype { row: pos % n, col: pos / n, value: data[pos] });
        }
        Ok(GenotypeMatrix { n, l, data })
    }

    /// Builds from row vectors of allele counts; convenient for small inputs.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let l = rows.first().map_or(0, Vec::len);
        let mut counts = vec![0u8; n * l];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != l {
                return Err(Error::DimensionMismatch { expected: l, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                counts[j * n + i] = v;
            }
        }
        Self::from_counts(n, l, &counts)
    }

    fn check_shape(n: usize, l: usize, len: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::BadSampleSize { n, min: 2 });
        }
        if l == 0 {
            return Err(Error::EmptyInput);
        }
        if len != n * l {
            return Err(Error::DimensionMismatch { expected: n * l, got: len });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Empirical minor-allele frequency per column.
    pub fn maf_hat(&self) -> Vec<f64> {
        (0..self.l).map(|j| self.col(j).iter().sum::<f64>() / (2.0 * self.n as f64)).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> GenotypeMatrix {
        let mut data = Vec::with_capacity(cols.len() * self.n);
        for &j in cols {
            data.extend_from_slice(self.col(j));
        }
        GenotypeMatrix { n: self.n, l: cols.len(), data }
    }

    /// Reorders rows so that new row `i` is old row `order[i]`.
    pub fn permute_rows(&self, order: &[usize]) -> GenotypeMatrix {
        assert_eq!(order.len(), self.n);
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.l {
            let c = self.col(j);
            data.extend(order.iter().map(|&i| c[i]));
        }
        GenotypeMatrix { n: self.n, l: self.l, data }
    }

    /// Stacks two matrices with the same columns on top of each other.
    pub fn vstack(&self, below: &GenotypeMatrix) -> Result<GenotypeMatrix> {
        if below.l != self.l {
            return Err(Error::DimensionMismatch { expected: self.l, got: below.l });
        }
        let n = self.n + below.n;
        let mut data = Vec::with_capacity(n * self.l);
        for j in 0..self.l {
            data.extend_from_slice(self.col(j));
            data.extend_from_slice(below.col(j));
        }
        Ok(GenotypeMatrix { n, l: self.l, data })
    }

    fn is_constant(col: &[f64]) -> bool {
        let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        hi - lo <= 1e-12
    }

    pub fn constant_columns(&self) -> Vec<usize> {
        (0..self.l).filter(|&j| Self::is_constant(self.col(j))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraitKind {
    Quantitative,
    Binary,
}

impl TraitKind {
    pub fn name(self) -> &'static str {
        match self {
            TraitKind::Quantitative => "quantitative",
            TraitKind::Binary => "binary",
        }
    }
}

/// Trait values for `n` subjects. Binary traits hold 0.0/1.0 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Phenotype {
    kind: TraitKind,
    values: Vec<f64>,
    n_case: usize,
    n_control: usize,
}

impl Phenotype {
    pub fn quantitative(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput(i));
        }
        Ok(Phenotype { kind: TraitKind::Quantitative, values, n_case: 0, n_control: 0 })
    }

    pub fn binary(labels: &[u8]) -> Result<Self> {
        if let Some(i) = labels.iter().position(|&v| v > 1) {
            return Err(Error::invalid("phenotype", format!("label {} at row {i} is not 0/1", labels[i])));
        }
        let n_case = labels.iter().filter(|&&v| v == 1).count();
        Ok(Phenotype {
            kind: TraitKind::Binary,
            values: labels.iter().map(|&v| v as f64).collect(),
            n_case,
            n_control: labels.len() - n_case,
        })
    }

    pub fn kind(&self) -> TraitKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_case(&self) -> usize {
        self.n_case
    }

    pub fn n_control(&self) -> usize {
        self.n_control
    }

    pub fn permuted(&self, order: &[usize]) -> Phenotype {
        Phenotype { values: order.iter().map(|&i| self.values[i]).collect(), ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalKind {
    /// Correlation scaled by a known error sd.
    RSigma,
    /// `sqrt(n-1) * rho`.
    R,
    /// Regression t statistic.
    T,
    /// Allele-frequency difference Z statistic for case/control data.
    D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalStats {
    pub kind: MarginalKind,
    pub values: Vec<f64>,
    pub pvalues: Vec<f64>,
}

/// Genotype columns centred once, for repeated correlation against many traits.
#[derive(Debug, Clone)]
pub struct CenteredGenotypes {
    n: usize,
    l: usize,
    centered: Vec<f64>,
    norms: Vec<f64>,
}

impl CenteredGenotypes {
    pub fn new(x: &GenotypeMatrix) -> Result<Self> {
        let n = x.n();
        let mut centered = Vec::with_capacity(n * x.l());
        let mut norms = Vec::with_capacity(x.l());
        for j in 0..x.l() {
            let col = x.col(j);
            if GenotypeMatrix::is_constant(col) {
                return Err(Error::ConstantColumn(j));
            }
            let mean = col.iter().sum::<f64>() / n as f64;
            let start = centered.len();
            centered.extend(col.iter().map(|v| v - mean));
            norms.push(centered[start..].iter().map(|v| v * v).sum::<f64>().sqrt());
        }
        Ok(CenteredGenotypes { n, l: x.l(), centered, norms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.centered[j * self.n..(j + 1) * self.n]
    }

    pub fn norm(&self, j: usize) -> f64 {
        self.norms[j]
    }

    /// `(X_j - mean)' v` for every column.
    pub fn cross(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.l).map(|j| dot(self.col(j), v)).collect()
    }

    /// Pearson correlations with `y`, which must already be centred and have norm `y_norm`.
    pub fn correlations_centered(&self, yc: &[f64], y_norm: f64) -> Vec<f64> {
        self.cross(yc).into_iter().enumerate().map(|(j, c)| (c / (self.norms[j] * y_norm)).clamp(-1.0, 1.0)).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Centres `y`; fails if it is constant.
pub fn center_trait(y: &[f64]) -> Result<(Vec<f64>, f64)> {
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let yc: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let norm = yc.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) || GenotypeMatrix::is_constant(y) {
        return Err(Error::ConstantTrait);
    }
    Ok((yc, norm))
}

fn check_len(x: &GenotypeMatrix, len: usize) -> Result<()> {
    if x.n() != len {
        return Err(Error::DimensionMismatch { expected: x.n(), got: len });
    }
    Ok(())
}

/// Pearson correlation between each genotype column and a quantitative trait.
pub fn marginal_correlations(x: &GenotypeMatrix, y: &[f64]) -> Result<Vec<f64>> {
    check_len(x, y.len())?;
    let (yc, norm) = center_trait(y)?;
    Ok(CenteredGenotypes::new(x)?.correlations_centered(&yc, norm))
}

/// `(X_j - mean)' Y / (sigma * ||X_j - mean||)`.
pub fn stat_r_sigma(x: &GenotypeMatrix, y: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    check_len(x, y.len())?;
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    let cg = CenteredGenotypes::new(x)?;
    Ok(cg.cross(y).into_iter().enumerate().map(|(j, c)| c / (sigma * cg.norm(j))).collect())
}

fn check_rho(rho: &[f64]) -> Result<()> {
    match rho.iter().position(|r| !(r.abs() <= 1.0)) {
        Some(i) if !rho[i].is_finite() => Err(Error::NonFiniteInput(i)),
        Some(i) => Err(Error::invalid("rho", format!("|rho[{i}]| = {} exceeds 1", rho[i].abs()))),
        None => Ok(()),
    }
}

/// `R_j = sqrt(n - 1) * rho_j`.
pub fn stat_r(rho: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::BadSampleSize { n, min: 2 });
    }
    check_rho(rho)?;
    let scale = ((n - 1) as f64).sqrt();
    Ok(rho.iter().map(|r| scale * r).collect())
}

/// `T_j = sqrt(n - 2) * rho_j / sqrt(1 - rho_j^2)`, the slope t statistic of
/// a simple regression of the trait on column `j`.
pub fn stat_t(rho: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::BadSampleSize { n, min: 3 });
    }
    check_rho(rho)?;
    if let Some(i) = rho.iter().position(|r| r.abs() >= 1.0) {
        return Err(Error::DegenerateCorrelation(i));
    }
    let scale = ((n - 2) as f64).sqrt();
    Ok(rho.iter().map(|r| scale * r / (1.0 - r * r).sqrt()).collect())
}

/// Effective sample size for the allele-frequency Z statistic.
///
/// Equals `n_case + n_control` for balanced designs, which gives the
/// statistic a standard normal null; unbalanced designs use twice the
/// harmonic mean of the group sizes.
pub fn effective_group_size(n_case: usize, n_control: usize) -> f64 {
    4.0 / (1.0 / n_case as f64 + 1.0 / n_control as f64)
}

/// `sqrt(m) * (p_case - p_control) / sqrt(2 p_all (1 - p_all))`.
pub fn d_statistic(m: f64, p_case: f64, p_control: f64, p_all: f64) -> f64 {
    m.sqrt() * (p_case - p_control) / (2.0 * p_all * (1.0 - p_all)).sqrt()
}

/// Case/control allele-frequency Z statistic for every column.
pub fn stat_d(x: &GenotypeMatrix, y: &Phenotype) -> Result<Vec<f64>> {
    check_len(x, y.len())?;
    if y.kind() != TraitKind::Binary {
        return Err(Error::invalid("phenotype", "stat_d needs a binary trait"));
    }
    let (nc, nn) = (y.n_case(), y.n_control());
    if nc == 0 || nn == 0 {
        return Err(Error::EmptyGroup);
    }
    let m = effective_group_size(nc, nn);
    (0..x.l())
        .map(|j| {
            let col = x.col(j);
            let total: f64 = col.iter().sum();
            let case: f64 = dot(col, y.values());
            let p_all = total / (2.0 * x.n() as f64);
            if p_all <= 0.0 || p_all >= 1.0 {
                return Err(Error::MonomorphicColumn(j));
            }
            let p_case = case / (2.0 * nc as f64);
            let p_control = (total - case) / (2.0 * nn as f64);
            Ok(d_statistic(m, p_case, p_control, p_all))
        })
        .collect()
}

/// `p_j = 2 * sf(|s_j|)`.
pub fn pvalues_two_sided(stats: &[f64]) -> Result<Vec<f64>> {
    if let Some(i) = stats.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    Ok(stats.iter().map(|&s| normal::two_sided_p(s)).collect())
}

/// Computes the requested marginal statistic and its p-values.
///
/// `sigma` is only read for [`MarginalKind::RSigma`].
pub fn marginal_stats(
    x: &GenotypeMatrix,
    y: &Phenotype,
    kind: MarginalKind,
    sigma: Option<f64>,
) -> Result<MarginalStats> {
    let needs_quant = || {
        if y.kind() == TraitKind::Quantitative {
            Ok(())
        } else {
            Err(Error::invalid("phenotype", "correlation statistics need a quantitative trait"))
        }
    };
    let values = match kind {
        MarginalKind::RSigma => {
            needs_quant()?;
            stat_r_sigma(x, y.values(), sigma.unwrap_or(1.0))?
        }
        MarginalKind::R => {
            needs_quant()?;
            stat_r(&marginal_correlations(x, y.values())?, x.n())?
        }
        MarginalKind::T => {
            needs_quant()?;
            stat_t(&marginal_correlations(x, y.values())?, x.n())?
        }
        MarginalKind::D => stat_d(x, y)?,
    };
    let pvalues = pvalues_two_sided(&values)?;
    Ok(MarginalStats { kind, values, pvalues })
}
