use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

/// How nonzero coefficients are assigned on the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefScheme {
    /// `+base` everywhere.
    Fixed,
    /// `+base` or `-base` with equal probability.
    RandomSign,
    /// Positive magnitudes uniform on `[lo * base, hi * base]`.
    UniformRange { lo: f64, hi: f64 },
}

impl CoefScheme {
    pub fn name(&self) -> String {
        match self {
            CoefScheme::Fixed => "fixed".into(),
            CoefScheme::RandomSign => "random_sign".into(),
            CoefScheme::UniformRange { lo, hi } => format!("uniform_{lo}_{hi}"),
        }
    }
}

/// Support, signs and coefficients of one simulated signal pattern.
/// Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalConfig {
    pub support: Vec<usize>,
    pub signs: Vec<i8>,
    pub beta: Vec<f64>,
    pub scheme: CoefScheme,
}

impl SignalConfig {
    /// No signals over `l` SNPs.
    pub fn null(l: usize) -> Self {
        SignalConfig { support: vec![], signs: vec![], beta: vec![0.0; l], scheme: CoefScheme::Fixed }
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn l(&self) -> usize {
        self.beta.len()
    }
}

/// Draws a uniformly random `k`-subset of `0..l` and coefficients for it.
pub fn draw_signal_config(l: usize, k: usize, scheme: CoefScheme, base_beta: f64, seed: u64) -> Result<SignalConfig> {
    if k == 0 || k > l {
        return Err(Error::BadK { k, l });
    }
    if !(base_beta >= 0.0) {
        return Err(Error::invalid("beta", format!("base effect {base_beta} must be non-negative")));
    }
    if let CoefScheme::UniformRange { lo, hi } = scheme {
        if !(lo >= 0.0 && lo <= hi) {
            return Err(Error::invalid("scheme", format!("bad range [{lo}, {hi}]")));
        }
    }
    let mut rng = seed::rng(seed, &[]);
    let mut support = index::sample(&mut rng, l, k).into_vec();
    support.sort_unstable();
    let mut beta = vec![0.0; l];
    let mut signs = Vec::with_capacity(k);
    for &j in &support {
        let (sign, mag) = match scheme {
            CoefScheme::Fixed => (1i8, base_beta),
            CoefScheme::RandomSign => (if rng.random_bool(0.5) { 1 } else { -1 }, base_beta),
            CoefScheme::UniformRange { lo, hi } => (1, rng.random_range(lo * base_beta..=hi * base_beta)),
        };
        signs.push(sign);
        beta[j] = sign as f64 * mag;
    }
    Ok(SignalConfig { support, signs, beta, scheme })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_support() {
        let cfg = draw_signal_config(7, 7, CoefScheme::Fixed, 0.2, 1).unwrap();
        assert_eq!(cfg.support, (0..7).collect::<Vec<_>>());
        assert!(cfg.beta.iter().all(|&b| b == 0.2));
    }

    #[test]
    fn bad_k() {
        assert_eq!(draw_signal_config(5, 0, CoefScheme::Fixed, 0.1, 0), Err(Error::BadK { k: 0, l: 5 }));
        assert_eq!(draw_signal_config(5, 6, CoefScheme::Fixed, 0.1, 0), Err(Error::BadK { k: 6, l: 5 }));
    }

    #[test]
    fn beta_matches_support_and_signs() {
        let cfg = draw_signal_config(100, 3, CoefScheme::RandomSign, 0.131, 8).unwrap();
        for j in 0..100 {
            let pos = cfg.support.iter().position(|&s| s == j);
            match pos {
                Some(i) => assert_eq!(cfg.beta[j], cfg.signs[i] as f64 * 0.131),
                None => assert_eq!(cfg.beta[j], 0.0),
            }
        }
    }

    #[test]
    fn random_signs_balance() {
        let total: i64 = (0..10_000u64)
            .map(|s| draw_signal_config(10, 1, CoefScheme::RandomSign, 1.0, s).unwrap().signs[0] as i64)
            .sum();
        assert!((total as f64 / 10_000.0).abs() < 0.03);
    }

    #[test]
    fn uniform_range_containment() {
        for s in 0..200 {
            let cfg = draw_signal_config(20, 5, CoefScheme::UniformRange { lo: 0.9, hi: 1.1 }, 0.1, s).unwrap();
            for &j in &cfg.support {
                assert!(cfg.beta[j] >= 0.09 - 1e-15 && cfg.beta[j] <= 0.11 + 1e-15);
            }
        }
    }
}
