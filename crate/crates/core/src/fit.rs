//! Least-squares fits for the fluctuation scaling laws.

use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least-squares line with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

/// Fit `y = slope * x + intercept`.
pub fn linear_least_squares(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::IllConditioned(format!(
            "{} abscissae for {} ordinates",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::IllConditioned(format!(
            "{n} points, need at least 3"
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::IllConditioned("non-finite data".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let scale: f64 = x.iter().map(|v| v * v).sum::<f64>() / nf;
    // relative spread of the abscissae; tiny values mean a near-singular
    // normal matrix
    let spread = sxx / (nf * scale.max(f64::MIN_POSITIVE));
    if !(spread > 1e-12) {
        return Err(Error::IllConditioned(format!(
            "abscissae nearly coincide (relative variance {spread:e})"
        )));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| (v - slope * u - intercept).powi(2))
        .sum();
    let sigma2 = rss / (nf - 2.0);
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (sigma2 / sxx).sqrt(),
        intercept_stderr: (sigma2 * (1.0 / nf + mx * mx / sxx)).sqrt(),
        residual: (rss / nf).sqrt(),
        points: n,
    })
}

const MIN_POINTS: usize = 6;
/// Largest disorder parameter accepted as weak disorder.
pub const WEAK_DISORDER_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauFit {
    /// Slope of `W / |E0^Drude|` against `hbar / (eps_F tau)`.
    pub c1: f64,
    pub c1_stderr: f64,
    /// Extrapolation to infinite tau, to compare with `W / |E0^plasma|`.
    pub intercept: f64,
    pub intercept_stderr: f64,
    pub residual: f64,
}

/// Linear fit of `W / |E0^Drude|` (y) against `hbar / (eps_F tau)` (h).
pub fn fit_scaling_tau(h: &[f64], y: &[f64]) -> Result<TauFit> {
    if h.len() < MIN_POINTS {
        return Err(Error::IllConditioned(format!(
            "{} tau points, need at least {MIN_POINTS}",
            h.len()
        )));
    }
    let (lo, hi) = range(h);
    if !(lo > 0.0) || hi / lo < 10.0 {
        return Err(Error::IllConditioned(format!(
            "disorder parameter spans [{lo:e}, {hi:e}], need one decade"
        )));
    }
    if hi > WEAK_DISORDER_LIMIT {
        return Err(Error::IllConditioned(format!(
            "disorder parameter {hi:e} is outside the weak-disorder regime (< {WEAK_DISORDER_LIMIT})"
        )));
    }
    let fit = linear_least_squares(h, y)?;
    Ok(TauFit {
        c1: fit.slope,
        c1_stderr: fit.slope_stderr,
        intercept: fit.intercept,
        intercept_stderr: fit.intercept_stderr,
        residual: fit.residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceFit {
    /// Prefactor of the power law.
    pub c2: f64,
    /// Standard error of `ln C2`.
    pub log_c2_stderr: f64,
    pub exponent: f64,
    pub exponent_stderr: f64,
    /// RMS residual in log space.
    pub residual: f64,
}

/// Log-log fit `W / |E0^plasma| = C2 s^p` with `s = hbar c / (eps_F a)`.
pub fn fit_scaling_distance(s: &[f64], y: &[f64]) -> Result<DistanceFit> {
    if s.len() < MIN_POINTS {
        return Err(Error::IllConditioned(format!(
            "{} separations, need at least {MIN_POINTS}",
            s.len()
        )));
    }
    let (lo, hi) = range(s);
    if !(lo > 0.0) || hi / lo < 6.0 {
        return Err(Error::IllConditioned(format!(
            "separation parameter spans [{lo:e}, {hi:e}], need a factor of 6 (250 to 1600 nm)"
        )));
    }
    if y.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::IllConditioned(
            "log-log fit needs positive ordinates".into(),
        ));
    }
    let lx: Vec<f64> = s.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let fit = linear_least_squares(&lx, &ly)?;
    Ok(DistanceFit {
        c2: fit.intercept.exp(),
        log_c2_stderr: fit.intercept_stderr,
        exponent: fit.slope,
        exponent_stderr: fit.slope_stderr,
        residual: fit.residual,
    })
}

fn range(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(*x), hi.max(*x))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let f = linear_least_squares(&x, &y).unwrap();
        assert_relative_eq!(f.slope, 2.5, max_relative = 1e-14);
        assert_relative_eq!(f.intercept, -1.0, max_relative = 1e-14);
        assert!(f.residual < 1e-14);
    }

    #[test]
    fn standard_errors_match_textbook() {
        // y = x + (+1, -1, +1, -1): sxx = 5, rss = 4 - (sum of fit shift)
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 0.0, 3.0, 2.0];
        let f = linear_least_squares(&x, &y).unwrap();
        // hand solution: slope 0.6, intercept 0.6, rss 3.2
        assert_relative_eq!(f.slope, 0.6, max_relative = 1e-14);
        assert_relative_eq!(f.intercept, 0.6, max_relative = 1e-14);
        assert_relative_eq!(f.slope_stderr, (1.6f64 / 5.0).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            f.intercept_stderr,
            (1.6f64 * (0.25 + 2.25 / 5.0)).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn tau_fit_recovers_synthetic_slope() {
        let h = logspace(2e-3, 2e-2, 8);
        let y: Vec<f64> = h.iter().map(|v| 0.004 + 0.096 * v).collect();
        let f = fit_scaling_tau(&h, &y).unwrap();
        assert!((f.c1 - 0.096).abs() < 1e-6);
        assert!((f.intercept - 0.004).abs() < 1e-9);
    }

    #[test]
    fn distance_fit_recovers_synthetic_power_law() {
        let s: Vec<f64> = logspace(250e-9, 1600e-9, 7)
            .iter()
            .map(|a| 1.4e-7 / a * 0.2)
            .collect();
        let y: Vec<f64> = s.iter().map(|v| 0.038 * v.sqrt()).collect();
        let f = fit_scaling_distance(&s, &y).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-6);
        assert!((f.c2 - 0.038).abs() < 1e-6);
    }

    #[test]
    fn preconditions() {
        let h = logspace(2e-3, 2e-2, 5);
        assert!(matches!(
            fit_scaling_tau(&h, &h),
            Err(Error::IllConditioned(_))
        ));
        let narrow = logspace(2e-3, 5e-3, 8);
        assert!(fit_scaling_tau(&narrow, &narrow).is_err());
        let strong = logspace(2e-2, 0.5, 8);
        assert!(fit_scaling_tau(&strong, &strong).is_err());
        let flat = [1.0; 6];
        assert!(linear_least_squares(&flat, &flat).is_err());
        let s = logspace(1.0, 10.0, 6);
        let mut y = s.clone();
        y[2] = -1.0;
        assert!(fit_scaling_distance(&s, &y).is_err());
    }
}
