//! Standard normal tail helpers built on the complementary error function.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Smallest p-value ever reported, so `ln p` stays finite.
pub const P_FLOOR: f64 = 1e-300;

/// Upper tail `P(Z > x)`.
pub fn sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Lower tail `P(Z <= x)`.
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `2 * sf(|s|)`, floored at [`P_FLOOR`].
pub fn two_sided_p(s: f64) -> f64 {
    erfc(s.abs() * FRAC_1_SQRT_2).max(P_FLOOR)
}

/// Inverse of [`cdf`].
pub fn quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

/// Inverse of [`two_sided_p`]: the magnitude `|s|` giving two-sided p-value `p`.
pub fn two_sided_quantile(p: f64) -> f64 {
    SQRT_2 * erfc_inv(p)
}
