//! Digamma function for positive real arguments, and a small-argument
//! polylogarithm.

use crate::error::{Error, Result};

// B_{2k} / (2k) for k = 1..8
const ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

const SHIFT_THRESHOLD: f64 = 10.0;

/// psi(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "digamma requires a positive finite argument, got {x}"
        )));
    }
    Ok(digamma_positive(x))
}

/// Unchecked variant used in hot loops; `x` must be positive.
pub(crate) fn digamma_positive(x: f64) -> f64 {
    let mut x = x;
    let mut shift = 0.0;
    while x < SHIFT_THRESHOLD {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Horner in 1/x^2, highest order first
    let mut series = 0.0;
    for c in ASYMPTOTIC.iter().rev() {
        series = series * inv2 + c;
    }
    x.ln() - 0.5 / x - series * inv2 - shift
}

/// Polylogarithm `Li_s(z)` by its power series, for `0 <= z <= 1/2`.
pub(crate) fn polylog_small(s: i32, z: f64) -> f64 {
    debug_assert!((0.0..=0.5).contains(&z));
    let mut sum = 0.0;
    let mut zk = z;
    let mut k = 1.0f64;
    while zk > 0.0 {
        let term = zk / k.powi(s);
        sum += term;
        if term <= f64::EPSILON * sum {
            break;
        }
        zk *= z;
        k += 1.0;
    }
    sum
}
