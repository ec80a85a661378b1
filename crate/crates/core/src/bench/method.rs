//! Set-level methods compared in the benchmarks and a scorer that evaluates
//! all of them on one genotype block for many traits.

use std::fmt;
use std::str::FromStr;

use crate::detectors::{hc_from_pvalues, EmpiricalCorrelation, Whitener};
use crate::error::{Error, Result};
use crate::normal;
use crate::stats::{
    center_trait, d_statistic, effective_group_size, stat_r, stat_t, CenteredGenotypes, GenotypeMatrix, MarginalKind,
    Phenotype, TraitKind,
};

/// Methods under comparison. Every score is oriented so that larger values
/// are stronger evidence of association.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodId {
    /// HC on T-statistic p-values (D-statistic for binary traits).
    Hc,
    /// HC on R-statistic p-values; quantitative traits only.
    HcM,
    /// `-ln` of the smallest marginal p-value.
    MinP,
    /// `|e'S| / sqrt(e' Sigma e)`.
    Lct,
    /// `S' Sigma^{-1} S`.
    Qt,
    /// Fisher combination of decorrelated p-values.
    Dt,
}

impl MethodId {
    pub const ALL: [MethodId; 6] =
        [MethodId::Hc, MethodId::HcM, MethodId::MinP, MethodId::Lct, MethodId::Qt, MethodId::Dt];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::Hc => "HC",
            MethodId::HcM => "HCm",
            MethodId::MinP => "MinP",
            MethodId::Lct => "LCT",
            MethodId::Qt => "QT",
            MethodId::Dt => "DT",
        }
    }

    /// Marginal statistic feeding this method for the given trait kind.
    pub fn marginal_kind(self, kind: TraitKind) -> Result<MarginalKind> {
        match (self, kind) {
            (MethodId::HcM, TraitKind::Quantitative) => Ok(MarginalKind::R),
            (MethodId::HcM, TraitKind::Binary) => {
                Err(Error::MethodNotApplicable { method: self.name(), trait_kind: kind.name() })
            }
            (_, TraitKind::Quantitative) => Ok(MarginalKind::T),
            (_, TraitKind::Binary) => Ok(MarginalKind::D),
        }
    }

    pub fn needs_correlation(self) -> bool {
        matches!(self, MethodId::Lct | MethodId::Qt | MethodId::Dt)
    }

    /// Every method applicable to `kind`.
    pub fn applicable(kind: TraitKind) -> Vec<MethodId> {
        Self::ALL.into_iter().filter(|m| m.marginal_kind(kind).is_ok()).collect()
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid("method", format!("unknown method '{s}'")))
    }
}

/// Scores a fixed genotype block against traits, reusing the centred
/// columns and the Cholesky factor of the empirical correlation.
#[derive(Debug, Clone)]
pub struct SetScorer {
    methods: Vec<MethodId>,
    kind: TraitKind,
    centered: CenteredGenotypes,
    col_totals: Vec<f64>,
    lct_scale: f64,
    whitener: Option<Whitener>,
}

impl SetScorer {
    pub fn new(x: &GenotypeMatrix, methods: &[MethodId], kind: TraitKind, jitter: Option<f64>) -> Result<Self> {
        if methods.is_empty() {
            return Err(Error::invalid("methods", "no methods requested"));
        }
        for m in methods {
            m.marginal_kind(kind)?;
        }
        if kind == TraitKind::Binary {
            if let Some(j) = (0..x.l()).find(|&j| {
                let total: f64 = x.col(j).iter().sum();
                total <= 0.0 || total >= 2.0 * x.n() as f64
            }) {
                return Err(Error::MonomorphicColumn(j));
            }
        }
        let centered = CenteredGenotypes::new(x)?;
        let (mut lct_scale, mut whitener) = (1.0, None);
        if methods.iter().any(|m| m.needs_correlation()) {
            let sigma_hat = EmpiricalCorrelation::from_centered(&centered);
            let quad = sigma_hat.matrix().sum();
            if !(quad > 0.0) {
                return Err(Error::NonPositiveQuadForm(quad));
            }
            lct_scale = quad.sqrt();
            if methods.iter().any(|m| matches!(m, MethodId::Qt | MethodId::Dt)) {
                whitener = Some(Whitener::with_jitter(&sigma_hat, jitter)?);
            }
        }
        let col_totals = (0..x.l()).map(|j| x.col(j).iter().sum()).collect();
        Ok(SetScorer { methods: methods.to_vec(), kind, centered, col_totals, lct_scale, whitener })
    }

    pub fn methods(&self) -> &[MethodId] {
        &self.methods
    }

    pub fn l(&self) -> usize {
        self.centered.l()
    }

    /// Scores for every method, in the order given at construction.
    pub fn score(&self, y: &Phenotype) -> Result<Vec<f64>> {
        if y.kind() != self.kind {
            return Err(Error::invalid("phenotype", "trait kind differs from the scorer's"));
        }
        if y.len() != self.centered.n() {
            return Err(Error::DimensionMismatch { expected: self.centered.n(), got: y.len() });
        }
        match self.kind {
            TraitKind::Quantitative => self.score_quantitative(y.values()),
            TraitKind::Binary => self.score_binary(y.values(), y.n_case(), y.n_control()),
        }
    }

    /// Scores `y` reordered by `order` (new subject `i` takes `y[order[i]]`).
    pub fn score_permuted(&self, y: &Phenotype, order: &[usize]) -> Result<Vec<f64>> {
        self.score(&y.permuted(order))
    }

    fn score_quantitative(&self, y: &[f64]) -> Result<Vec<f64>> {
        let n = self.centered.n();
        let (yc, norm) = center_trait(y)?;
        let rho = self.centered.correlations_centered(&yc, norm);
        let t = if self.methods.iter().any(|&m| m != MethodId::HcM) { Some(stat_t(&rho, n)?) } else { None };
        let r = if self.methods.contains(&MethodId::HcM) { Some(stat_r(&rho, n)?) } else { None };
        self.methods
            .iter()
            .map(|&m| match m {
                MethodId::HcM => self.score_one(m, r.as_deref().expect("R computed when HCm requested")),
                _ => self.score_one(m, t.as_deref().expect("T computed for non-HCm methods")),
            })
            .collect()
    }

    fn score_binary(&self, labels: &[f64], n_case: usize, n_control: usize) -> Result<Vec<f64>> {
        if n_case == 0 || n_control == 0 {
            return Err(Error::EmptyGroup);
        }
        let n = self.centered.n() as f64;
        let m = effective_group_size(n_case, n_control);
        // centred columns sum to zero, so case totals follow from (X_j - mean)' labels
        let cross = self.centered.cross(labels);
        let d: Vec<f64> = cross
            .iter()
            .zip(&self.col_totals)
            .map(|(&c, &total)| {
                let mean = total / n;
                let case = c + mean * n_case as f64;
                let p_all = total / (2.0 * n);
                d_statistic(m, case / (2.0 * n_case as f64), (total - case) / (2.0 * n_control as f64), p_all)
            })
            .collect();
        self.methods.iter().map(|&m| self.score_one(m, &d)).collect()
    }

    fn score_one(&self, method: MethodId, s: &[f64]) -> Result<f64> {
        let pvalues = || s.iter().map(|&v| normal::two_sided_p(v)).collect::<Vec<_>>();
        match method {
            MethodId::Hc | MethodId::HcM => Ok(hc_from_pvalues(&pvalues())?.value),
            MethodId::MinP => {
                let max_abs = s.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                Ok(-normal::two_sided_p(max_abs).ln())
            }
            MethodId::Lct => Ok((s.iter().sum::<f64>() / self.lct_scale).abs()),
            MethodId::Qt => self.whitener().quadratic(s),
            MethodId::Dt => self.whitener().decorrelated_fisher(s),
        }
    }

    fn whitener(&self) -> &Whitener {
        self.whitener.as_ref().expect("whitener built when QT or DT requested")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{dt, empirical_correlation, lct, minp, qt};
    use crate::linalg::Matrix;
    use crate::simgen::{
        draw_signal_config, simulate_case_control, simulate_genotypes, simulate_quantitative, CoefScheme,
    };
    use crate::stats::{marginal_stats, pvalues_two_sided};

    #[test]
    fn names_round_trip() {
        for m in MethodId::ALL {
            assert_eq!(m.name().parse::<MethodId>().unwrap(), m);
        }
        assert!("ridge".parse::<MethodId>().is_err());
        assert_eq!(MethodId::applicable(TraitKind::Binary).len(), 5);
    }

    #[test]
    fn scorer_matches_reference_functions() {
        let x = simulate_genotypes(300, &[0.4; 12], &Matrix::identity(12), 1).unwrap();
        let cfg = draw_signal_config(12, 2, CoefScheme::Fixed, 0.3, 2).unwrap();
        let y = simulate_quantitative(&x, &cfg, 1.0, 3).unwrap();
        let scorer = SetScorer::new(&x, &MethodId::ALL, TraitKind::Quantitative, None).unwrap();
        let got = scorer.score(&y).unwrap();

        let t = marginal_stats(&x, &y, MarginalKind::T, None).unwrap();
        let r = marginal_stats(&x, &y, MarginalKind::R, None).unwrap();
        let sigma = empirical_correlation(&x).unwrap();
        let expect = [
            hc_from_pvalues(&t.pvalues).unwrap().value,
            hc_from_pvalues(&r.pvalues).unwrap().value,
            -minp(&t.pvalues).unwrap().ln(),
            lct(&t.values, &sigma).unwrap().abs(),
            qt(&t.values, &sigma).unwrap(),
            dt(&t.values, &sigma).unwrap(),
        ];
        for (a, b) in got.iter().zip(expect) {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn binary_scorer_matches_d_statistic() {
        let cfg = draw_signal_config(8, 2, CoefScheme::Fixed, 0.2, 4).unwrap();
        let (x, y) = simulate_case_control(&[0.4; 8], &Matrix::identity(8), &cfg, -2.0, 150, 250, 5).unwrap();
        let methods = [MethodId::Hc, MethodId::MinP, MethodId::Lct];
        let scorer = SetScorer::new(&x, &methods, TraitKind::Binary, None).unwrap();
        let got = scorer.score(&y).unwrap();
        let d = marginal_stats(&x, &y, MarginalKind::D, None).unwrap();
        let p = pvalues_two_sided(&d.values).unwrap();
        let sigma = empirical_correlation(&x).unwrap();
        assert!((got[0] - hc_from_pvalues(&p).unwrap().value).abs() < 1e-9);
        assert!((got[1] + minp(&p).unwrap().ln()).abs() < 1e-9);
        assert!((got[2] - lct(&d.values, &sigma).unwrap().abs()).abs() < 1e-9);
        assert!(SetScorer::new(&x, &[MethodId::HcM], TraitKind::Binary, None).is_err());
    }

    #[test]
    fn permutation_matches_permuted_phenotype() {
        let x = simulate_genotypes(100, &[0.3; 5], &Matrix::identity(5), 8).unwrap();
        let y = simulate_quantitative(&x, &crate::simgen::SignalConfig::null(5), 1.0, 9).unwrap();
        let scorer = SetScorer::new(&x, &[MethodId::Qt], TraitKind::Quantitative, None).unwrap();
        let order: Vec<usize> = (0..100).rev().collect();
        let a = scorer.score_permuted(&y, &order).unwrap();
        let b = scorer.score(&y.permuted(&order)).unwrap();
        assert_eq!(a, b);
    }
}
