use casimir_core::quantities::matsubara_frequency;
use casimir_core::reflection::{reflect_2d, reflect_3d, zero_mode_reflection};
use casimir_core::*;

const A: f64 = 250e-9;

fn gold(dim: Dimensionality) -> MaterialSpec {
    derive_material(&MaterialInput::gold(15.0, dim)).unwrap()
}

fn wl_job(t: f64) -> LifshitzJob {
    LifshitzJob::new(
        A,
        t,
        0.0,
        Plate::Response(
            ResponseModel::new(ResponseKind::Drude, gold(Dimensionality::ThreeD)).unwrap(),
        ),
        Plate::Response(
            ResponseModel::new(ResponseKind::DrudeWl, gold(Dimensionality::TwoD)).unwrap(),
        ),
    )
    .unwrap()
}

/// Polylogarithm Li_s(z) for 0 <= z < 1 by direct series.
fn polylog(s: i32, z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zk = z;
    for k in 1..100_000 {
        let term = zk / (k as f64).powi(s);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        zk *= z;
    }
    sum
}

#[test]
fn energy_and_pressure_are_consistent() {
    let job = wl_job(1.0);
    let h = 1e-3 * A;
    let energy_at = |a: f64| {
        casimir_energy(&LifshitzJob {
            separation: a,
            ..job
        })
        .unwrap()
    };
    let fd = -(energy_at(A + h) - energy_at(A - h)) / (2.0 * h);
    let p = casimir_pressure(&job).unwrap().pressure;
    let rel = ((fd - p) / p).abs();
    assert!(
        rel < 1e-4,
        "finite difference {fd} vs analytic {p}: {rel:e}"
    );
}

#[test]
fn doubling_the_cutoff_changes_little() {
    for t in [1.0, 3.0] {
        let job = wl_job(t);
        let adaptive = casimir_pressure(&job).unwrap();
        let doubled = casimir_pressure_fixed_terms(&job, 2 * adaptive.n_terms_used).unwrap();
        for (x, y) in [
            (adaptive.pressure, doubled.pressure),
            (adaptive.energy_per_area, doubled.energy_per_area),
        ] {
            let rel = ((x - y) / y).abs();
            assert!(rel < 1e-6, "T = {t}: {x} vs {y} ({rel:e})");
        }
    }
}

#[test]
fn frozen_products_match_polylog_closed_form() {
    let numerics = NumericsConfig::default();
    for rho in [0.05, 0.5, 0.9, 0.999] {
        for y0 in [0.0, 0.3, 4.0, 25.0] {
            let m = mode_integrals(|_| (rho, rho), A, y0, &numerics).unwrap();
            let z = rho * (-y0).exp();
            // int_{y0}^inf y ln(1 - rho e^{-y}) dy per polarization
            let log_oracle = -(y0 * polylog(2, z) + polylog(3, z));
            // int_{y0}^inf y^2 rho e^{-y} / (1 - rho e^{-y}) dy
            let force_oracle =
                y0 * y0 * polylog(1, z) + 2.0 * y0 * polylog(2, z) + 2.0 * polylog(3, z);
            let tol = 10.0 * numerics.quad_rel_tol;
            let rel_log = (m.log_integral / (2.0 * log_oracle) - 1.0).abs();
            let rel_force = (m.force_integral / (2.0 * force_oracle) - 1.0).abs();
            assert!(rel_log < tol, "rho {rho}, y0 {y0}: log {rel_log:e}");
            assert!(rel_force < tol, "rho {rho}, y0 {y0}: force {rel_force:e}");
        }
    }
}

#[test]
fn passivity_on_the_mode_grid() {
    let t = 0.1;
    let kinds = [
        ResponseKind::Plasma,
        ResponseKind::Drude,
        ResponseKind::DrudeWl,
    ];
    let mut checked = 0;
    for kind in kinds {
        for dim in [Dimensionality::TwoD, Dimensionality::ThreeD] {
            let Ok(model) = ResponseModel::new(kind, gold(dim)) else {
                continue;
            };
            for h_gauss in [0.0, 40.0, 100.0] {
                let frozen = model.at_conditions(t, h_gauss * GAUSS).unwrap();
                for q_scale in [1e-3, 0.1, 1.0, 10.0, 45.0] {
                    let q = q_scale / A;
                    for pol in Polarization::BOTH {
                        let r = zero_mode_reflection(&frozen, pol, q);
                        assert!((0.0..=1.0).contains(&r));
                    }
                    for n in (1..=10_000u64).step_by(37) {
                        let omega = matsubara_frequency(n, t).unwrap();
                        let mode = Mode::new(q, to_wavevector(omega)).unwrap();
                        let pi = frozen.pi(omega);
                        let r = match dim {
                            Dimensionality::TwoD => reflect_2d(&mode, pi).unwrap(),
                            Dimensionality::ThreeD => reflect_3d(&mode, pi).unwrap(),
                        };
                        for pol in Polarization::BOTH {
                            let v = r.get(pol);
                            assert!(v.abs() <= 1.0, "{kind:?} {dim:?} n={n} q={q}: {v}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn ideal_plates_reach_the_closed_forms() {
    let job = LifshitzJob::new(A, 0.01, 0.0, Plate::Ideal, Plate::Ideal).unwrap();
    let r = casimir_pressure(&job).unwrap();
    assert!((r.pressure / ideal_pressure(A) - 1.0).abs() < 5e-3);
    assert!((r.energy_per_area / ideal_energy(A) - 1.0).abs() < 5e-3);
    assert!((r.pressure - (-0.333)).abs() < 2e-3);
}

#[test]
fn non_convergence_carries_partial_sums() {
    let numerics = NumericsConfig {
        max_matsubara: 50,
        ..Default::default()
    };
    let job = wl_job(0.1).with_numerics(numerics).unwrap();
    match casimir_pressure(&job) {
        Err(Error::NotConverged {
            n_terms,
            partial_pressure,
            partial_energy,
            ..
        }) => {
            assert_eq!(n_terms, 50);
            assert!(partial_pressure < 0.0 && partial_energy < 0.0);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn thread_count_does_not_change_bits() {
    let job = wl_job(3.0);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| casimir_pressure(&job).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.pressure.to_bits(), b.pressure.to_bits());
    assert_eq!(a.energy_per_area.to_bits(), b.energy_per_area.to_bits());
}
