//! Target LD (correlation) matrices for genotype simulation.

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    /// Every off-diagonal entry equals its magnitude bound.
    Positive,
    /// Sign `(-1)^|j-k|`.
    Alternating,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LdSpec {
    Identity,
    /// `bands[d - 1]` is the value on the `d`-th off-diagonals; zero beyond.
    ToeplitzBanded(Vec<f64>),
    /// Entries `M (1 + |j - k|)^(-lambda)` off the diagonal.
    PolyDecay {
        m: f64,
        lambda: f64,
        signs: SignPattern,
    },
    Explicit(Matrix),
}

/// The six banded designs used in the simulation study, in figure order.
pub const STUDY_DESIGNS: [&str; 6] =
    ["identity", "band_0.3", "band_0.25", "band_0.2", "band_0.25_0.3", "band_0.25_0.2"];

impl LdSpec {
    /// Parses `identity`, `band_<v1>[_<v2>...]`, or `poly_<M>_<lambda>`.
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || Error::invalid("ld", format!("unknown LD design '{name}'"));
        if name == "identity" {
            return Ok(LdSpec::Identity);
        }
        let parse = |parts: &[&str]| -> Result<Vec<f64>> {
            parts.iter().map(|p| p.parse::<f64>().map_err(|_| bad())).collect()
        };
        let parts: Vec<&str> = name.split('_').collect();
        match parts.as_slice() {
            ["band", rest @ ..] if !rest.is_empty() => Ok(LdSpec::ToeplitzBanded(parse(rest)?)),
            ["poly", m, lambda] => {
                let v = parse(&[m, lambda])?;
                Ok(LdSpec::PolyDecay { m: v[0], lambda: v[1], signs: SignPattern::Positive })
            }
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            LdSpec::Identity => "identity".into(),
            LdSpec::ToeplitzBanded(b) => {
                let vals: Vec<String> = b.iter().map(|v| v.to_string()).collect();
                format!("band_{}", vals.join("_"))
            }
            LdSpec::PolyDecay { m, lambda, signs } => match signs {
                SignPattern::Positive => format!("poly_{m}_{lambda}"),
                SignPattern::Alternating => format!("poly_{m}_{lambda}_alt"),
            },
            LdSpec::Explicit(m) => format!("explicit_{}x{}", m.rows(), m.cols()),
        }
    }

    pub fn study_designs() -> Vec<LdSpec> {
        STUDY_DESIGNS.iter().map(|n| LdSpec::from_name(n).expect("static design names parse")).collect()
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, LdSpec::Identity)
    }
}

/// Materialises `spec` as an `l x l` correlation matrix and checks it is
/// positive definite.
pub fn build_ld(spec: &LdSpec, l: usize) -> Result<Matrix> {
    if l == 0 {
        return Err(Error::invalid("L", "must be at least 1"));
    }
    let m = match spec {
        LdSpec::Identity => return Ok(Matrix::identity(l)),
        LdSpec::ToeplitzBanded(bands) => {
            if let Some(b) = bands.iter().find(|b| !(b.abs() < 1.0)) {
                return Err(Error::invalid("ld", format!("band value {b} must lie in (-1, 1)")));
            }
            Matrix::from_fn(l, l, |i, j| match i.abs_diff(j) {
                0 => 1.0,
                d => bands.get(d - 1).copied().unwrap_or(0.0),
            })
        }
        LdSpec::PolyDecay { m, lambda, signs } => {
            if !(*m > 0.0 && *m <= 1.0 && *lambda > 0.0) {
                return Err(Error::invalid(
                    "ld",
                    format!("poly decay needs 0 < M <= 1, lambda > 0 (got {m}, {lambda})"),
                ));
            }
            Matrix::from_fn(l, l, |i, j| match i.abs_diff(j) {
                0 => 1.0,
                d => {
                    let mag = m * (1.0 + d as f64).powf(-lambda);
                    match signs {
                        SignPattern::Positive => mag,
                        SignPattern::Alternating if d % 2 == 1 => -mag,
                        SignPattern::Alternating => mag,
                    }
                }
            })
        }
        LdSpec::Explicit(m) => {
            let n = m.ensure_square()?;
            if n != l {
                return Err(Error::DimensionMismatch { expected: l, got: n });
            }
            if !m.is_symmetric(1e-12) || (0..n).any(|i| m[(i, i)] != 1.0) {
                return Err(Error::invalid("ld", "explicit matrix must be symmetric with unit diagonal"));
            }
            m.clone()
        }
    };
    Cholesky::new(&m).map_err(|e| match e {
        Error::NotPositiveDefinite { index } => Error::LdNotPositiveDefinite { spec: spec.name(), index },
        other => other,
    })?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_band() {
        assert_eq!(build_ld(&LdSpec::Identity, 4).unwrap(), Matrix::identity(4));
        let m = build_ld(&LdSpec::ToeplitzBanded(vec![0.3]), 3).unwrap();
        let expect = Matrix::from_rows(&[vec![1.0, 0.3, 0.0], vec![0.3, 1.0, 0.3], vec![0.0, 0.3, 1.0]]).unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn poly_decay_values() {
        let spec = LdSpec::PolyDecay { m: 1.0, lambda: 3.0, signs: SignPattern::Positive };
        let m = build_ld(&spec, 3).unwrap();
        assert!((m[(0, 1)] - 0.125).abs() < 1e-15);
        assert!((m[(0, 2)] - 1.0 / 27.0).abs() < 1e-15);
        let alt = LdSpec::PolyDecay { m: 1.0, lambda: 3.0, signs: SignPattern::Alternating };
        let m = build_ld(&alt, 3).unwrap();
        assert!(m[(0, 1)] < 0.0 && m[(0, 2)] > 0.0);
    }

    #[test]
    fn study_designs_are_positive_definite() {
        for spec in LdSpec::study_designs() {
            build_ld(&spec, 100).unwrap();
            assert_eq!(LdSpec::from_name(&spec.name()).unwrap(), spec);
        }
    }

    #[test]
    fn rejects_indefinite_band() {
        let err = build_ld(&LdSpec::ToeplitzBanded(vec![0.6]), 10).unwrap_err();
        assert!(matches!(err, Error::LdNotPositiveDefinite { ref spec, .. } if spec == "band_0.6"));
    }

    #[test]
    fn name_parsing() {
        assert!(LdSpec::from_name("band_").is_err());
        assert!(LdSpec::from_name("toeplitz").is_err());
        assert_eq!(LdSpec::from_name("band_0.25_0.2").unwrap(), LdSpec::ToeplitzBanded(vec![0.25, 0.2]));
    }
}
