//! Detection-boundary calculus for the asymptotic rare/weak calibration:
//! phase classification, strength-to-effect-size conversion, heritability,
//! and boundary curves for plotting.

use crate::error::{Error, Result};
use serde::Serialize;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// Optimal detection boundary `r*(alpha)`.
pub fn r_star(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(if alpha < 0.75 { alpha - 0.5 } else { (1.0 - (1.0 - alpha).sqrt()).powi(2) })
}

/// Boundary of the minimum p-value test, `(1 - sqrt(1 - alpha))^2`.
pub fn r_minp(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((1.0 - (1.0 - alpha).sqrt()).powi(2))
}

/// Scalar or per-index parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Profile {
    Scalar(f64),
    PerIndex(Vec<f64>),
}

impl Profile {
    pub fn at(&self, j: Option<usize>) -> f64 {
        match (self, j) {
            (Profile::Scalar(v), _) => *v,
            (Profile::PerIndex(v), Some(j)) => v[j],
            (Profile::PerIndex(v), None) => v[0],
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            Profile::Scalar(v) => std::slice::from_ref(v),
            Profile::PerIndex(v) => v,
        }
    }
}

impl From<f64> for Profile {
    fn from(v: f64) -> Self {
        Profile::Scalar(v)
    }
}

/// One calibration of the rare/weak model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArwScenario {
    pub l: usize,
    pub n: usize,
    pub alpha: f64,
    pub r: Profile,
    pub sigma: f64,
    pub q: Profile,
}

impl ArwScenario {
    /// Scenario with `n = L^a`, rounded to the nearest integer.
    pub fn with_growth(l: usize, a: f64, alpha: f64, r: f64, sigma: f64, q: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::invalid("a", format!("growth exponent {a} must be positive")));
        }
        let n = (l as f64).powf(a).round() as usize;
        let s = ArwScenario { l, n, alpha, r: r.into(), sigma, q: q.into() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.l < 2 {
            return Err(Error::invalid("L", format!("{} is below 2", self.l)));
        }
        if self.n < 2 {
            return Err(Error::BadSampleSize { n: self.n, min: 2 });
        }
        if !(self.sigma > 0.0) {
            return Err(Error::NonPositiveSigma(self.sigma));
        }
        if let Some(q) = self.q.values().iter().find(|q| !(**q > 0.0 && **q <= 0.5)) {
            return Err(Error::invalid("q", format!("MAF {q} is outside (0, 1/2]")));
        }
        if let Some(r) = self.r.values().iter().find(|r| !(**r >= 0.0)) {
            return Err(Error::invalid("r", format!("strength {r} is negative")));
        }
        Ok(())
    }

    /// `sqrt(2 n q (1 - q)) / sigma`, the factor between `|beta|` and `tau`.
    fn tau_per_beta(&self, j: Option<usize>) -> f64 {
        let q = self.q.at(j);
        (2.0 * self.n as f64 * q * (1.0 - q)).sqrt() / self.sigma
    }

    /// `tau = sqrt(2 r ln L)`.
    fn tau(&self, r: f64) -> f64 {
        (2.0 * r * (self.l as f64).ln()).sqrt()
    }
}

/// Effect size whose normalised strength is `sqrt(2 r ln L)`.
pub fn beta_from_r(scn: &ArwScenario, j: Option<usize>) -> Result<f64> {
    scn.validate()?;
    Ok(scn.tau(scn.r.at(j)) / scn.tau_per_beta(j))
}

/// Inverse of [`beta_from_r`] for a given `|beta|`.
pub fn r_from_beta(scn: &ArwScenario, beta: f64, j: Option<usize>) -> Result<f64> {
    scn.validate()?;
    if !(beta >= 0.0) {
        return Err(Error::invalid("beta", format!("{beta} is negative")));
    }
    let tau = beta * scn.tau_per_beta(j);
    Ok(tau * tau / (2.0 * (scn.l as f64).ln()))
}

/// Share of trait variance explained by the additive genetic terms.
pub fn heritability(beta: &[f64], q: &[f64], sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    if beta.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: beta.len(), got: q.len() });
    }
    if let Some(v) = q.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
        return Err(Error::invalid("q", format!("MAF {v} is outside (0, 1)")));
    }
    let genetic: f64 = beta.iter().zip(q).map(|(b, q)| b * b * 2.0 * q * (1.0 - q)).sum();
    Ok(genetic / (genetic + sigma * sigma))
}

/// `K = L^(1 - alpha)` rounded to the nearest integer, at least 1.
pub fn signal_count(l: usize, alpha: f64) -> Result<usize> {
    check_alpha(alpha)?;
    Ok(((l as f64).powf(1.0 - alpha).round() as usize).max(1))
}

const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Detectable,
    Undetectable,
    OnBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub alpha: f64,
    pub r: f64,
    pub regime: Regime,
}

pub fn classify_regime(alpha: f64, r: f64) -> Result<PhasePoint> {
    let boundary = r_star(alpha)?;
    if !(r >= 0.0) {
        return Err(Error::invalid("r", format!("strength {r} is negative")));
    }
    let regime = if r < boundary - REGIME_TOL {
        Regime::Undetectable
    } else if r > boundary + REGIME_TOL {
        Regime::Detectable
    } else {
        Regime::OnBoundary
    };
    Ok(PhasePoint { alpha, r, regime })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    Optimal,
    Minp,
}

impl BoundaryMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryMode::Optimal => "optimal",
            BoundaryMode::Minp => "minp",
        }
    }

    pub fn r(self, alpha: f64) -> Result<f64> {
        match self {
            BoundaryMode::Optimal => r_star(alpha),
            BoundaryMode::Minp => r_minp(alpha),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub alpha: f64,
    pub r: f64,
    pub beta: f64,
    pub heritability: f64,
}

/// Boundary strength, effect size and heritability along an alpha grid.
///
/// Heritability assumes `signal_count(L, alpha)` equal-effect signals with
/// the scenario's (scalar) MAF.
pub fn boundary_curve(alphas: &[f64], mode: BoundaryMode, scn: &ArwScenario) -> Result<Vec<BoundaryRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let r = mode.r(alpha)?;
            let at = ArwScenario { alpha, r: r.into(), ..scn.clone() };
            let beta = beta_from_r(&at, None)?;
            let k = signal_count(scn.l, alpha)?;
            let q = scn.q.at(None);
            let heritability = heritability(&vec![beta; k], &vec![q; k], scn.sigma)?;
            Ok(BoundaryRow { alpha, r, beta, heritability })
        })
        .collect()
}

/// Evenly spaced alphas from `lo` to `hi` inclusive.
pub fn alpha_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table1(r: f64) -> ArwScenario {
        ArwScenario { l: 100, n: 1000, alpha: 0.76, r: r.into(), sigma: 1.0, q: 0.4.into() }
    }

    #[test]
    fn r_star_values() {
        assert!((r_star(0.6).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(r_star(0.75).unwrap(), 0.25);
        assert_eq!(0.75 - 0.5, 0.25);
        assert!((r_star(0.9).unwrap() - 0.467_544_467_966_324).abs() < 1e-12);
        assert_eq!(r_star(0.5), Err(Error::AlphaOutOfRange(0.5)));
        assert_eq!(r_star(1.0), Err(Error::AlphaOutOfRange(1.0)));
    }

    #[test]
    fn r_minp_values() {
        assert_eq!(r_minp(0.75).unwrap(), 0.25);
        assert!((r_minp(0.6).unwrap() - 0.135_088_935_932_648).abs() < 1e-12);
        assert!(r_minp(0.6).unwrap() > r_star(0.6).unwrap());
        assert!(r_minp(1.0 - 1e-12).unwrap() > 0.999);
    }

    #[test]
    fn table1_effect_sizes() {
        assert!((beta_from_r(&table1(0.9), None).unwrap() - 0.131).abs() < 5e-4);
        assert!((beta_from_r(&table1(0.4), None).unwrap() - 0.088).abs() < 5e-4);
        assert_eq!(beta_from_r(&table1(0.0), None).unwrap(), 0.0);
        assert!((r_from_beta(&table1(0.0), 0.131, None).unwrap() - 0.9).abs() < 0.01);
        assert_eq!(r_from_beta(&table1(0.0), 0.0, None).unwrap(), 0.0);
    }

    #[test]
    fn per_index_profiles() {
        let mut s = table1(0.9);
        s.q = Profile::PerIndex(vec![0.4, 0.1]);
        s.r = Profile::PerIndex(vec![0.9, 0.9]);
        let b0 = beta_from_r(&s, Some(0)).unwrap();
        let b1 = beta_from_r(&s, Some(1)).unwrap();
        assert!(b1 > b0);
        assert!((r_from_beta(&s, b1, Some(1)).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn heritability_values() {
        assert_eq!(heritability(&[0.0; 3], &[0.4; 3], 1.0).unwrap(), 0.0);
        assert!((heritability(&[0.131; 3], &[0.4; 3], 1.0).unwrap() - 0.024).abs() < 1e-3);
        assert!((heritability(&[0.088; 3], &[0.4; 3], 1.0).unwrap() - 0.011).abs() < 1e-3);
        assert_eq!(heritability(&[0.1], &[0.4], 0.0), Err(Error::NonPositiveSigma(0.0)));
    }

    #[test]
    fn signal_counts() {
        assert_eq!(signal_count(100, 0.76).unwrap(), 3);
        assert_eq!(signal_count(100, 0.5 + 1e-9).unwrap(), 10);
        assert_eq!(signal_count(16, 0.999).unwrap(), 1);
        assert!(signal_count(100, 0.3).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(0.76, 0.9).unwrap().regime, Regime::Detectable);
        assert_eq!(classify_regime(0.6, 0.05).unwrap().regime, Regime::Undetectable);
        assert_eq!(classify_regime(0.75, 0.25).unwrap().regime, Regime::OnBoundary);
    }

    #[test]
    fn curves() {
        let scn = ArwScenario { l: 10_000, n: 1000, alpha: 0.6, r: 0.0.into(), sigma: 1.0, q: 0.3.into() };
        let alphas = alpha_grid(0.51, 0.99, 49);
        let opt = boundary_curve(&alphas, BoundaryMode::Optimal, &scn).unwrap();
        let mp = boundary_curve(&alphas, BoundaryMode::Minp, &scn).unwrap();
        for (o, m) in opt.iter().zip(&mp) {
            assert!(m.r >= o.r);
            assert!(m.beta >= o.beta);
            if o.alpha >= 0.75 {
                assert_eq!(o, m);
            }
        }
        for w in opt.windows(2).chain(mp.windows(2)) {
            assert!(w[1].r >= w[0].r);
        }
    }

    #[test]
    fn boundary_gap_on_fine_grid() {
        for i in 1..10_000 {
            let a = 0.5 + 0.5 * i as f64 / 10_000.0;
            let gap = r_minp(a).unwrap() - r_star(a).unwrap();
            if a < 0.75 {
                assert!(gap > 0.0, "alpha={a}");
            } else {
                assert_eq!(gap, 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn beta_r_round_trip(r in 1e-6f64..10.0, n in 10usize..100_000, q in 0.01f64..0.5, sigma in 0.1f64..5.0) {
            let s = ArwScenario { l: 100, n, alpha: 0.7, r: r.into(), sigma, q: q.into() };
            let b = beta_from_r(&s, None).unwrap();
            let back = r_from_beta(&s, b, None).unwrap();
            prop_assert!((back - r).abs() / r < 1e-12);
        }

        #[test]
        fn beta_monotonicity(r in 0.01f64..5.0, n in 10usize..100_000, q in 0.01f64..0.45, sigma in 0.1f64..5.0) {
            let s = ArwScenario { l: 100, n, alpha: 0.7, r: r.into(), sigma, q: q.into() };
            let b = beta_from_r(&s, None).unwrap();
            let bump = |f: &dyn Fn(&mut ArwScenario)| { let mut t = s.clone(); f(&mut t); beta_from_r(&t, None).unwrap() };
            prop_assert!(bump(&|t| t.r = (r * 1.01).into()) > b);
            prop_assert!(bump(&|t| t.sigma = sigma * 1.01) > b);
            prop_assert!(bump(&|t| t.n = n + 1) < b);
            prop_assert!(bump(&|t| t.q = (q + 0.01).into()) < b);
        }

        #[test]
        fn heritability_scale_free(b in proptest::collection::vec(-1.0f64..1.0, 1..10), c in 0.1f64..10.0, sigma in 0.1f64..3.0) {
            let q = vec![0.3; b.len()];
            let h1 = heritability(&b, &q, sigma).unwrap();
            let scaled: Vec<f64> = b.iter().map(|v| v * c).collect();
            let h2 = heritability(&scaled, &q, sigma * c).unwrap();
            prop_assert!((h1 - h2).abs() < 1e-12);
        }
    }
}
