//! Fit C1 and C2 for gold at a given kernel amplitude.
//!
//! cargo run --release -p casimir-core --example calibrate -- [amplitude] [shortest mfp nm]

use casimir_core::fit::{fit_scaling_distance, fit_scaling_tau};
use casimir_core::fluctuations::{
    fluctuation_report, separation_parameter, width_gap_ratio, FluctuationKernel, ScalingConstants,
    DEFAULT_TEMPERATURE,
};
use casimir_core::{derive_material, Dimensionality, MaterialInput, NumericsConfig};

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn main() {
    let amplitude: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("amplitude"))
        .unwrap_or(casimir_core::fluctuations::DEFAULT_KAPPA);
    let lmin: f64 = std::env::args()
        .nth(2)
        .map(|s| s.parse().expect("shortest mean free path, nm"))
        .unwrap_or(20.0);
    let kernel = FluctuationKernel::with_amplitude(amplitude);
    let numerics = NumericsConfig::default();
    let t = DEFAULT_TEMPERATURE;
    let gold = |l: f64| derive_material(&MaterialInput::gold(l, Dimensionality::TwoD)).unwrap();

    for a in [250e-9, 500e-9, 1000e-9] {
        let mut h = Vec::new();
        let mut y = Vec::new();
        let mut yp = Vec::new();
        for l in logspace(lmin, lmin * 10.0, 8) {
            let m = gold(l);
            let r = fluctuation_report(&m, &m, &kernel, a, t, &numerics).unwrap();
            h.push(m.disorder_parameter());
            y.push(r.ratio_w_over_e0);
            yp.push(r.ratio_w_over_e0_plasma);
        }
        let f = fit_scaling_tau(&h, &y).unwrap();
        println!(
            "a = {:.0} nm: C1 = {:.5} +- {:.5}, intercept {:.5e} vs W/Ep {:.5e} .. {:.5e}",
            a * 1e9,
            f.c1,
            f.c1_stderr,
            f.intercept,
            yp[0],
            yp[yp.len() - 1]
        );
    }

    for l in [15.0] {
        let m = gold(l);
        let mut s = Vec::new();
        let mut y = Vec::new();
        for a in logspace(250e-9, 1600e-9, 7) {
            let r = fluctuation_report(&m, &m, &kernel, a, t, &numerics).unwrap();
            s.push(separation_parameter(&m, a));
            y.push(r.ratio_w_over_e0_plasma);
        }
        let f = fit_scaling_distance(&s, &y).unwrap();
        println!(
            "l = {l} nm: C2 = {:.5}, exponent = {:.4} +- {:.4}",
            f.c2, f.exponent, f.exponent_stderr
        );
    }

    let constants = ScalingConstants {
        c1: 0.096,
        c2: 0.038,
    };
    let m = gold(60.0);
    for a in [250e-9, 400e-9, 800e-9, 1600e-9] {
        let r = width_gap_ratio(&m, &m, &kernel, a, t, &numerics, constants).unwrap();
        println!(
            "a = {:.0} nm, l = 60 nm: W/gap direct {:.4e}, closed form {:.4e}",
            a * 1e9,
            r.direct,
            r.predicted
        );
    }
}
