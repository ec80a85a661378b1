//! Latent Gaussian thresholding for correlated Bernoulli haplotypes.
//!
//! An allele is present when a standard normal latent variable falls below
//! `quantile(q)`. Two alleles then have joint probability
//! `Phi2(z_j, z_k; rho_z)`; [`solve_latent_correlation`] finds the latent
//! correlation that yields a requested Bernoulli correlation.

use crate::error::{Error, Result};
use crate::normal;

const QUAD_TOL: f64 = 1e-13;
const BISECT_TOL: f64 = 1e-8;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

fn adaptive(
    f: &dyn Fn(f64) -> f64,
    (a, fa): (f64, f64),
    (m, fm): (f64, f64),
    (b, fb): (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, (a, fa), (lm, flm), (m, fm), left, tol / 2.0, depth - 1)
        + adaptive(f, (m, fm), (rm, frm), (b, fb), right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    adaptive(f, (a, fa), (m, fm), (b, fb), whole, tol, 48)
}

/// `P(Z1 <= h, Z2 <= k)` for standard normals with correlation `rho`.
///
/// Integrates `pdf(x) * cdf((k - rho x) / sqrt(1 - rho^2))` over
/// `x <= h` in unit-width panels; mass below -10 is under 1e-23.
pub fn bvn_cdf(h: f64, k: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        return normal::cdf(h) * normal::cdf(k);
    }
    if rho >= 1.0 {
        return normal::cdf(h.min(k));
    }
    if rho <= -1.0 {
        return (normal::cdf(h) - normal::cdf(-k)).max(0.0);
    }
    let lo = -10.0;
    if h <= lo {
        return 0.0;
    }
    let s = (1.0 - rho * rho).sqrt();
    let f = |x: f64| normal::pdf(x) * normal::cdf((k - rho * x) / s);
    let hi = h.min(10.0);
    let panels = (hi - lo).ceil() as usize;
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * width;
        total += integrate(&f, a, a + width, QUAD_TOL / panels as f64);
    }
    if h > hi {
        // remaining mass between 10 and h is cdf(k) * (cdf(h) - cdf(10)), below 1e-23
        total += normal::cdf(k) * (normal::cdf(h) - normal::cdf(hi));
    }
    total.clamp(0.0, 1.0)
}

/// Attainable correlation range for Bernoulli(`q1`) and Bernoulli(`q2`).
pub fn bernoulli_corr_bounds(q1: f64, q2: f64) -> (f64, f64) {
    let sd = (q1 * (1.0 - q1) * q2 * (1.0 - q2)).sqrt();
    let lo = ((q1 + q2 - 1.0).max(0.0) - q1 * q2) / sd;
    let hi = (q1.min(q2) - q1 * q2) / sd;
    (lo, hi)
}

/// Correlation of the thresholded Bernoulli pair at latent correlation `rho_z`.
pub fn bernoulli_corr(rho_z: f64, q1: f64, q2: f64) -> f64 {
    let p11 = bvn_cdf(normal::quantile(q1), normal::quantile(q2), rho_z);
    (p11 - q1 * q2) / (q1 * (1.0 - q1) * q2 * (1.0 - q2)).sqrt()
}

/// Latent Gaussian correlation giving Bernoulli correlation `rho_target`
/// between margins `q1` and `q2`, by bisection.
pub fn solve_latent_correlation(rho_target: f64, q1: f64, q2: f64) -> Result<f64> {
    for q in [q1, q2] {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid("q", format!("margin {q} is outside (0, 1)")));
        }
    }
    if !(rho_target.abs() < 1.0) {
        return Err(Error::invalid("rho_target", format!("{rho_target} is outside (-1, 1)")));
    }
    if rho_target == 0.0 {
        return Ok(0.0);
    }
    let (lo_b, hi_b) = bernoulli_corr_bounds(q1, q2);
    if rho_target <= lo_b || rho_target >= hi_b {
        return Err(Error::Unattainable { rho: rho_target, q1, q2, lo: lo_b, hi: hi_b });
    }
    let (mut lo, mut hi) = if rho_target > 0.0 { (0.0, 1.0) } else { (-1.0, 0.0) };
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let resid = bernoulli_corr(mid, q1, q2) - rho_target;
        if resid.abs() <= BISECT_TOL {
            break;
        }
        if resid > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(mid)
}
