use casimir_core::*;

const A: f64 = 250e-9;

fn gold(dim: Dimensionality) -> MaterialSpec {
    derive_material(&MaterialInput::gold(15.0, dim)).unwrap()
}

fn job(k1: ResponseKind, k2: ResponseKind, t: f64, h_gauss: f64) -> LifshitzJob {
    LifshitzJob::new(
        A,
        t,
        h_gauss * GAUSS,
        Plate::Response(ResponseModel::new(k1, gold(Dimensionality::ThreeD)).unwrap()),
        Plate::Response(ResponseModel::new(k2, gold(Dimensionality::TwoD)).unwrap()),
    )
    .unwrap()
}

fn normalized(k1: ResponseKind, k2: ResponseKind, t: f64, h_gauss: f64) -> f64 {
    casimir_pressure(&job(k1, k2, t, h_gauss))
        .unwrap()
        .normalized
}

#[test]
fn model_ordering_at_low_temperature() {
    let m = suppression_metrics(
        &gold(Dimensionality::ThreeD),
        &gold(Dimensionality::TwoD),
        0.1,
        A,
        NumericsConfig::default(),
    )
    .unwrap();
    let (wl, drude, plasma) = (
        m.drude_wl.pressure.abs(),
        m.drude.pressure.abs(),
        m.plasma.pressure.abs(),
    );
    assert!(wl < drude && drude < plasma && plasma < ideal_pressure(A).abs());
    for r in [m.drude_wl, m.drude, m.plasma] {
        assert!(r.normalized > 0.0 && r.normalized < 1.05);
    }
}

#[test]
fn identical_models_give_zero_numerator() {
    let numerics = NumericsConfig::default();
    let drude = |k2| {
        casimir_pressure(
            &job(ResponseKind::Drude, k2, 1.0, 0.0)
                .with_numerics(numerics)
                .unwrap(),
        )
        .unwrap()
        .pressure
    };
    assert_eq!(drude(ResponseKind::Drude) - drude(ResponseKind::Drude), 0.0);
}

#[test]
fn suppression_ratio_grows_as_temperature_falls() {
    let ratio = |t| {
        suppression_metrics(
            &gold(Dimensionality::ThreeD),
            &gold(Dimensionality::TwoD),
            t,
            A,
            NumericsConfig::default(),
        )
        .unwrap()
        .ratio
    };
    assert!(ratio(0.05) > ratio(0.1));
}

#[test]
fn field_restores_pressure_monotonically() {
    let mut last = 0.0;
    for h in [0.0, 5.0, 10.0, 20.0, 40.0, 70.0, 100.0] {
        let p = normalized(ResponseKind::Drude, ResponseKind::DrudeWl, 1.0, h);
        assert!(p >= last, "H = {h} G: {p} < {last}");
        last = p;
    }
}

#[test]
fn temperature_trend_at_zero_field() {
    let temps = [0.1, 0.3, 1.0, 3.0];
    let wl: Vec<f64> = temps
        .iter()
        .map(|&t| normalized(ResponseKind::Drude, ResponseKind::DrudeWl, t, 0.0))
        .collect();
    let drude: Vec<f64> = temps
        .iter()
        .map(|&t| normalized(ResponseKind::Drude, ResponseKind::Drude, t, 0.0))
        .collect();
    for w in wl.windows(2) {
        assert!(w[0] < w[1], "{wl:?}");
    }
    let spread = drude.iter().cloned().fold(f64::MIN, f64::max)
        - drude.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-3, "{drude:?}");
}
