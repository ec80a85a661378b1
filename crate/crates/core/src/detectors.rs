//! Set-level detectors: Higher Criticism and its threshold forms, the
//! minimum p-value, Benjamini-Hochberg selection, and the linear, quadratic
//! and decorrelated Fisher tests built on an empirical SNP correlation.

use crate::boundary::r_star;
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::normal;
use crate::stats::{CenteredGenotypes, GenotypeMatrix};

/// Lower clamp applied to p-values inside the HC denominator.
pub const HC_P_MIN: f64 = 1e-15;
/// Upper clamp applied to p-values inside the HC denominator.
pub const HC_P_MAX: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct HcResult {
    /// `HC_L`, the maximum over the profile.
    pub value: f64,
    /// 1-based index of the first maximiser.
    pub argmax_k: usize,
    /// `HC_{L,j}` for `j = 1..=L`, in sorted p-value order.
    pub per_index: Vec<f64>,
}

fn check_pvalues(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::EmptyInput);
    }
    match p.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(index) => Err(Error::PValueOutOfRange { index, value: p[index] }),
        None => Ok(()),
    }
}

fn sorted(p: &[f64]) -> Vec<f64> {
    let mut s = p.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Higher Criticism over the order statistics of `pvalues`.
pub fn hc_from_pvalues(pvalues: &[f64]) -> Result<HcResult> {
    check_pvalues(pvalues)?;
    let p = sorted(pvalues);
    let l = p.len() as f64;
    let clamped = p.iter().filter(|&&v| !(HC_P_MIN..=HC_P_MAX).contains(&v)).count();
    if clamped > 0 {
        log::debug!("hc: clamped {clamped} p-values into [{HC_P_MIN:e}, 1 - 1e-15]");
    }
    let per_index: Vec<f64> = p
        .iter()
        .enumerate()
        .map(|(i, &raw)| {
            let pj = raw.clamp(HC_P_MIN, HC_P_MAX);
            l.sqrt() * ((i + 1) as f64 / l - pj) / (pj * (1.0 - pj)).sqrt()
        })
        .collect();
    let (mut best, mut value) = (0, per_index[0]);
    for (i, &v) in per_index.iter().enumerate().skip(1) {
        if v > value {
            best = i;
            value = v;
        }
    }
    Ok(HcResult { value, argmax_k: best + 1, per_index })
}

/// `HC_L(t)` for a single threshold `t`, given the exceedance count.
fn hc_at(exceed: usize, l: usize, t: f64) -> Result<f64> {
    let tail = normal::sf(t);
    if !(tail > 0.0 && tail < 0.5) {
        return Err(Error::DegenerateGridPoint(t));
    }
    let expected = 2.0 * l as f64 * tail;
    Ok((exceed as f64 - expected) / (expected * (1.0 - 2.0 * tail)).sqrt())
}

/// Threshold form: `max_t (#{|S_j| > t} - 2L sf(t)) / sqrt(2L sf(t) (1 - 2 sf(t)))`
/// over the given grid.
pub fn hc_threshold_scan(stats: &[f64], t_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(i) = stats.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    let mut mags: Vec<f64> = stats.iter().map(|s| s.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let l = stats.len();
    let mut best = f64::NEG_INFINITY;
    for &t in t_grid {
        // count of magnitudes strictly above t
        let exceed = l - mags.partition_point(|&m| m <= t);
        best = best.max(hc_at(exceed, l, t)?);
    }
    Ok(best)
}

/// Upper end of the discretised HC grid, `sqrt(5 ln L)`.
pub fn hc_star_ceiling(l: usize) -> f64 {
    (5.0 * (l as f64).ln()).sqrt()
}

/// Integer thresholds in `[s, sqrt(5 ln L)]`, excluding 0 (where the
/// tail probability is 1/2). Falls back to `{s}` when the interval holds no
/// positive integer.
pub fn hc_star_grid(s: f64, l: usize) -> Result<Vec<f64>> {
    if l < 2 {
        return Err(Error::BadSampleSize { n: l, min: 2 });
    }
    let upper = hc_star_ceiling(l);
    if !(s <= upper) {
        return Err(Error::BadRange { s, upper });
    }
    let first = s.ceil().max(1.0) as u64;
    let grid: Vec<f64> = (first..).map(|t| t as f64).take_while(|&t| t <= upper).collect();
    Ok(if grid.is_empty() { vec![s] } else { grid })
}

/// Discretised HC over integer thresholds in `[s, sqrt(5 ln L)]`.
pub fn hc_star(stats: &[f64], s: f64) -> Result<f64> {
    hc_threshold_scan(stats, &hc_star_grid(s, stats.len())?)
}

/// Lower grid end `sqrt(2 delta ln L)` with `delta = min(1, 4 r*(alpha))`.
pub fn hc_star_threshold(alpha: f64, l: usize) -> Result<f64> {
    let delta = (4.0 * r_star(alpha)?).min(1.0);
    Ok((2.0 * delta * (l as f64).ln()).sqrt())
}

/// Smallest p-value.
pub fn minp(pvalues: &[f64]) -> Result<f64> {
    pvalues.iter().copied().reduce(f64::min).ok_or(Error::EmptyInput)
}

/// Largest `k` with `p_(k) / (k / L) <= alpha`, or 0 when none qualifies.
pub fn bh_select(pvalues: &[f64], alpha_fdr: f64) -> Result<usize> {
    check_pvalues(pvalues)?;
    if !(alpha_fdr > 0.0 && alpha_fdr < 1.0) {
        return Err(Error::invalid("alpha_fdr", format!("{alpha_fdr} is outside (0, 1)")));
    }
    let p = sorted(pvalues);
    let l = p.len() as f64;
    Ok(p.iter().enumerate().rev().find(|(i, &pk)| pk * l / (*i as f64 + 1.0) <= alpha_fdr).map_or(0, |(i, _)| i + 1))
}

/// Pearson correlation matrix among genotype columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCorrelation(Matrix);

impl EmpiricalCorrelation {
    pub fn from_genotypes(x: &GenotypeMatrix) -> Result<Self> {
        Ok(Self::from_centered(&CenteredGenotypes::new(x)?))
    }

    pub fn from_centered(cg: &CenteredGenotypes) -> Self {
        let l = cg.l();
        let mut m = Matrix::identity(l);
        for i in 0..l {
            for j in 0..i {
                let c = crate::stats::dot(cg.col(i), cg.col(j)) / (cg.norm(i) * cg.norm(j));
                let c = c.clamp(-1.0, 1.0);
                m[(i, j)] = c;
                m[(j, i)] = c;
            }
        }
        EmpiricalCorrelation(m)
    }

    /// Wraps an existing correlation matrix (symmetric, unit diagonal).
    pub fn from_matrix(m: Matrix) -> Result<Self> {
        let l = m.ensure_square()?;
        if !m.is_symmetric(1e-12) {
            return Err(Error::invalid("correlation", "matrix is not symmetric"));
        }
        for i in 0..l {
            if m[(i, i)] != 1.0 {
                return Err(Error::invalid("correlation", format!("diagonal entry {i} is not 1")));
            }
        }
        Ok(EmpiricalCorrelation(m))
    }

    pub fn identity(l: usize) -> Self {
        EmpiricalCorrelation(Matrix::identity(l))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}

/// Shorthand for [`EmpiricalCorrelation::from_genotypes`].
pub fn empirical_correlation(x: &GenotypeMatrix) -> Result<EmpiricalCorrelation> {
    EmpiricalCorrelation::from_genotypes(x)
}

fn check_dim(s: &[f64], l: usize) -> Result<()> {
    if s.len() != l {
        return Err(Error::DimensionMismatch { expected: l, got: s.len() });
    }
    Ok(())
}

/// Linear combination test `e'S / sqrt(e' Sigma e)`.
pub fn lct(s: &[f64], sigma_hat: &EmpiricalCorrelation) -> Result<f64> {
    check_dim(s, sigma_hat.dim())?;
    let quad = sigma_hat.matrix().sum();
    if !(quad > 0.0) {
        return Err(Error::NonPositiveQuadForm(quad));
    }
    Ok(s.iter().sum::<f64>() / quad.sqrt())
}

/// Cholesky whitening of statistic vectors: `W = D^{-1} S` with `Sigma = D D'`.
///
/// Factor once, then reuse across permutations.
#[derive(Debug, Clone)]
pub struct Whitener {
    chol: Cholesky,
}

impl Whitener {
    pub fn new(sigma_hat: &EmpiricalCorrelation) -> Result<Self> {
        Self::with_jitter(sigma_hat, None)
    }

    /// Adds `jitter` to the diagonal before factorising, when given.
    pub fn with_jitter(sigma_hat: &EmpiricalCorrelation, jitter: Option<f64>) -> Result<Self> {
        let chol = match jitter {
            Some(eps) if eps > 0.0 => {
                let mut m = sigma_hat.matrix().clone();
                for i in 0..m.rows() {
                    m[(i, i)] += eps;
                }
                Cholesky::new(&m)?
            }
            _ => Cholesky::new(sigma_hat.matrix())?,
        };
        Ok(Whitener { chol })
    }

    pub fn dim(&self) -> usize {
        self.chol.dim()
    }

    pub fn cholesky(&self) -> &Cholesky {
        &self.chol
    }

    pub fn whiten(&self, s: &[f64]) -> Result<Vec<f64>> {
        check_dim(s, self.dim())?;
        Ok(self.chol.solve_lower(s))
    }

    /// `S' Sigma^{-1} S = ||W||^2`.
    pub fn quadratic(&self, s: &[f64]) -> Result<f64> {
        Ok(self.whiten(s)?.iter().map(|w| w * w).sum())
    }

    /// `-2 sum ln p_j` with `p_j = 2 sf(|W_j|)`.
    pub fn decorrelated_fisher(&self, s: &[f64]) -> Result<f64> {
        Ok(fisher_combination(&self.whiten(s)?))
    }
}

/// `-2 sum ln(2 sf(|s_j|))`.
pub fn fisher_combination(stats: &[f64]) -> f64 {
    -2.0 * stats.iter().map(|&w| normal::two_sided_p(w).ln()).sum::<f64>()
}

/// Quadratic test `S' Sigma^{-1} S`, via triangular solves.
pub fn qt(s: &[f64], sigma_hat: &EmpiricalCorrelation) -> Result<f64> {
    Whitener::new(sigma_hat)?.quadratic(s)
}

/// Decorrelation test: Fisher combination of the whitened statistics.
pub fn dt(s: &[f64], sigma_hat: &EmpiricalCorrelation) -> Result<f64> {
    Whitener::new(sigma_hat)?.decorrelated_fisher(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsityClassParams {
    pub gamma: f64,
    pub delta_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsityCheck {
    pub member: bool,
    /// Largest number of off-diagonal entries above `gamma` in any row.
    pub max_row_count: usize,
}

/// Whether every row has at most `delta_cap` off-diagonal entries with
/// magnitude above `gamma`.
pub fn sparsity_class_check(sigma: &Matrix, params: SparsityClassParams) -> Result<SparsityCheck> {
    let l = sigma.ensure_square()?;
    if !(params.gamma > 0.0 && params.gamma < 1.0) {
        return Err(Error::invalid("gamma", format!("{} is outside (0, 1)", params.gamma)));
    }
    let max_row_count =
        (0..l).map(|i| (0..l).filter(|&j| j != i && sigma[(i, j)].abs() > params.gamma).count()).max().unwrap_or(0);
    Ok(SparsityCheck { member: max_row_count <= params.delta_cap, max_row_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::pvalues_two_sided;
    use proptest::prelude::*;

    #[test]
    fn hc_examples() {
        let r = hc_from_pvalues(&[0.5]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);

        let l = 7;
        let p: Vec<f64> = (1..=l).map(|j| j as f64 / l as f64).collect();
        let r = hc_from_pvalues(&p[..l - 1]).unwrap();
        assert!(r.value > 0.0);
        let exact: Vec<f64> = (1..l).map(|j| j as f64 / (l - 1) as f64).collect();
        // last entry is p = 1, clamped; every other index is 0 exactly
        let r = hc_from_pvalues(&exact).unwrap();
        assert!(r.per_index[..l - 2].iter().all(|v| v.abs() < 1e-12));
        assert!(r.value.abs() < 1e-6);

        // per index: sqrt(3)(1/3 - .01)/sqrt(.0099), sqrt(3)(2/3 - .2)/.4, sqrt(3)(1 - .5)/.5
        let r = hc_from_pvalues(&[0.2, 0.5, 0.01]).unwrap();
        let expect = [5.628510876, 2.020725942, 1.732050808];
        for (a, b) in r.per_index.iter().zip(expect) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        assert_eq!(r.argmax_k, 1);
        assert!((r.value - 5.6281).abs() < 5e-4);
    }

    #[test]
    fn hc_ties_pick_smallest_index() {
        let r = hc_from_pvalues(&[0.5, 0.5]).unwrap();
        // index 1: sqrt2 (0.5-0.5)/0.5 = 0, index 2: sqrt2 * 0.5 / 0.5
        assert_eq!(r.argmax_k, 2);
        let r = hc_from_pvalues(&[0.25, 0.75]).unwrap();
        assert!((r.per_index[0] - r.per_index[1]).abs() < 1e-12);
        assert_eq!(r.argmax_k, 1);
    }

    #[test]
    fn hc_input_errors() {
        assert_eq!(hc_from_pvalues(&[]), Err(Error::EmptyInput));
        assert!(matches!(hc_from_pvalues(&[0.1, 1.5]), Err(Error::PValueOutOfRange { index: 1, .. })));
        // boundary values clamp rather than fail
        let r = hc_from_pvalues(&[0.0, 1.0]).unwrap();
        assert!(r.value.is_finite());
    }

    #[test]
    fn threshold_scan_examples() {
        let l = 5;
        let v = hc_threshold_scan(&vec![0.0; l], &[1.0]).unwrap();
        let e = 2.0 * l as f64 * normal::sf(1.0);
        assert!((v - (-e / (e * (1.0 - 2.0 * normal::sf(1.0))).sqrt())).abs() < 1e-12);
        assert!(v < 0.0);
        assert_eq!(hc_threshold_scan(&[1.0], &[]), Err(Error::EmptyGrid));
        assert_eq!(hc_threshold_scan(&[1.0], &[0.0]), Err(Error::DegenerateGridPoint(0.0)));
        assert_eq!(hc_threshold_scan(&[1.0], &[40.0]), Err(Error::DegenerateGridPoint(40.0)));

        // choose t so that 2 L sf(t) = 2 exactly, with 2 exceedances
        let l = 40;
        let t = normal::two_sided_quantile(2.0 / l as f64);
        let mut s = vec![0.0; l];
        s[0] = t + 1.0;
        s[1] = -(t + 2.0);
        assert!(hc_threshold_scan(&s, &[t]).unwrap().abs() < 1e-9);
    }

    #[test]
    fn star_grid() {
        let upper = hc_star_ceiling(100);
        assert!((upper - 4.798_525_912).abs() < 1e-8);
        assert_eq!(hc_star_grid(1.0, 100).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(hc_star_grid(0.0, 100).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(hc_star_grid(1.5, 2).unwrap(), vec![1.5]);
        assert!(matches!(hc_star_grid(5.0, 100), Err(Error::BadRange { .. })));
        assert!(hc_star(&vec![0.0; 100], 1.0).unwrap() < 0.0);
    }

    #[test]
    fn star_is_below_full_scan() {
        let s: Vec<f64> = (0..50).map(|i| ((i * 37 % 50) as f64 / 10.0) - 2.4).collect();
        let fine: Vec<f64> = (1..=400).map(|i| i as f64 / 100.0).collect();
        assert!(hc_star(&s, 1.0).unwrap() <= hc_threshold_scan(&s, &fine).unwrap() + 1e-12);
    }

    #[test]
    fn star_threshold_values() {
        let s = hc_star_threshold(0.76, 100).unwrap();
        assert!((s - (2.0 * 100f64.ln()).sqrt()).abs() < 1e-12);
        assert!((s - 3.0349).abs() < 1e-4);
        let s = hc_star_threshold(0.51, 100).unwrap();
        assert!((s - (0.08 * 100f64.ln()).sqrt()).abs() < 1e-12);
        let lo = hc_star_threshold(0.75 - 1e-12, 1000).unwrap();
        let hi = hc_star_threshold(0.75, 1000).unwrap();
        assert!((lo - hi).abs() < 1e-9);
        assert!(hc_star_threshold(0.4, 100).is_err());
    }

    #[test]
    fn minp_examples() {
        assert_eq!(minp(&[0.3, 0.1, 0.9]).unwrap(), 0.1);
        assert_eq!(minp(&[0.42]).unwrap(), 0.42);
        assert_eq!(minp(&[0.2, 0.2]).unwrap(), 0.2);
        assert_eq!(minp(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn bh_examples() {
        assert_eq!(bh_select(&[0.01, 0.02, 0.9], 0.05).unwrap(), 2);
        assert_eq!(bh_select(&[0.99; 4], 0.05).unwrap(), 0);
        let l = 8;
        let p: Vec<f64> = (1..=l).map(|k| 0.05 * k as f64 / (2.0 * l as f64)).collect();
        assert_eq!(bh_select(&p, 0.05).unwrap(), l);
    }

    #[test]
    fn correlation_examples() {
        let x = GenotypeMatrix::from_rows(&[vec![0, 0, 2], vec![1, 1, 1], vec![2, 2, 0], vec![1, 1, 1], vec![0, 0, 2]])
            .unwrap();
        let c = empirical_correlation(&x).unwrap();
        assert!((c.matrix()[(0, 1)] - 1.0).abs() < 1e-15);
        assert!((c.matrix()[(0, 2)] + 1.0).abs() < 1e-15);
        assert_eq!(c.matrix()[(1, 1)], 1.0);
        assert!(c.matrix().is_symmetric(0.0));
    }

    #[test]
    fn lct_examples() {
        let id = EmpiricalCorrelation::identity(4);
        assert!((lct(&[1.0; 4], &id).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(lct(&[-1.0; 4], &id).unwrap(), -lct(&[1.0; 4], &id).unwrap());
        assert_eq!(lct(&[1.0, -1.0], &EmpiricalCorrelation::identity(2)).unwrap(), 0.0);
        let neg =
            EmpiricalCorrelation::from_matrix(Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()).unwrap();
        assert_eq!(lct(&[1.0, 1.0], &neg), Err(Error::NonPositiveQuadForm(0.0)));
    }

    #[test]
    fn qt_examples() {
        let id = EmpiricalCorrelation::identity(2);
        assert!((qt(&[3.0, 4.0], &id).unwrap() - 25.0).abs() < 1e-12);
        assert_eq!(qt(&[0.0, 0.0], &id).unwrap(), 0.0);
        let half =
            EmpiricalCorrelation::from_matrix(Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap()).unwrap();
        // inverse is [[4/3, -2/3], [-2/3, 4/3]]
        assert!((qt(&[1.0, 1.0], &half).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let singular =
            EmpiricalCorrelation::from_matrix(Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap()).unwrap();
        assert_eq!(qt(&[1.0, 1.0], &singular), Err(Error::NotPositiveDefinite { index: 2 }));
        assert!(Whitener::with_jitter(&singular, Some(1e-6)).is_ok());
    }

    #[test]
    fn dt_identity_is_fisher() {
        let id = EmpiricalCorrelation::identity(3);
        assert_eq!(dt(&[0.0; 3], &id).unwrap(), 0.0);
        let s = [1.2, -0.4, 2.5];
        let p = pvalues_two_sided(&s).unwrap();
        let fisher = -2.0 * p.iter().map(|v| v.ln()).sum::<f64>();
        assert_eq!(dt(&s, &id).unwrap(), fisher);
    }

    #[test]
    fn sparsity_examples() {
        let id = Matrix::identity(5);
        let p = SparsityClassParams { gamma: 0.1, delta_cap: 0 };
        assert_eq!(sparsity_class_check(&id, p).unwrap(), SparsityCheck { member: true, max_row_count: 0 });
        let band = Matrix::from_fn(6, 6, |i, j| match i.abs_diff(j) {
            0 => 1.0,
            1 => 0.3,
            _ => 0.0,
        });
        let r = sparsity_class_check(&band, SparsityClassParams { gamma: 0.2, delta_cap: 2 }).unwrap();
        assert_eq!(r, SparsityCheck { member: true, max_row_count: 2 });
        let r = sparsity_class_check(&band, SparsityClassParams { gamma: 0.2, delta_cap: 1 }).unwrap();
        assert!(!r.member);
        assert!(matches!(sparsity_class_check(&Matrix::zeros(2, 3), p), Err(Error::NotSquare { .. })));
    }

    proptest! {
        #[test]
        fn hc_order_invariant(p in proptest::collection::vec(0.0001f64..0.9999, 1..60), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut q = p.clone();
            q.shuffle(&mut crate::seed::rng(seed, &[]));
            let a = hc_from_pvalues(&p).unwrap();
            let b = hc_from_pvalues(&q).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn bh_monotone_in_alpha(p in proptest::collection::vec(0.0f64..1.0, 1..60), a1 in 0.001f64..0.5, extra in 0.0f64..0.49) {
            let a2 = a1 + extra;
            prop_assert!(bh_select(&p, a1).unwrap() <= bh_select(&p, a2).unwrap());
        }

        #[test]
        fn hc_value_is_profile_max(p in proptest::collection::vec(0.0f64..=1.0, 1..40)) {
            let r = hc_from_pvalues(&p).unwrap();
            prop_assert_eq!(r.per_index[r.argmax_k - 1], r.value);
            prop_assert!(r.per_index.iter().all(|&v| v <= r.value));
            prop_assert!(r.per_index[..r.argmax_k - 1].iter().all(|&v| v < r.value));
        }
    }
}
