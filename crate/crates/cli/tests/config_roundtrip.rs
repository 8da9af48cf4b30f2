use casimir_cli::config::{
    Conditions, CorrelationForm, FluctuationSection, Geometry, NumericsSection, OutputSection,
    PlateConfig, PlateModel, Spacing, SweepSpec, SweepVariable,
};
use casimir_cli::{parse_config, Format, RunConfig};
use casimir_core::Dimensionality;
use proptest::prelude::*;

fn plate() -> impl Strategy<Value = PlateConfig> {
    (
        prop_oneof![
            Just(PlateModel::Drude),
            Just(PlateModel::Plasma),
            Just(PlateModel::Ideal)
        ],
        0.5f64..10.0,
        0.1f64..5.0,
        1.0f64..500.0,
        proptest::option::of(prop_oneof![
            Just(Dimensionality::TwoD),
            Just(Dimensionality::ThreeD)
        ]),
    )
        .prop_map(
            |(model, epsilon_f_ev, mstar_ratio, mfp_nm, dimensionality)| PlateConfig {
                model,
                epsilon_f_ev,
                mstar_ratio,
                mfp_nm,
                dimensionality,
            },
        )
}

fn sweep() -> impl Strategy<Value = Option<SweepSpec>> {
    proptest::option::of(
        (
            prop_oneof![
                Just(SweepVariable::Field),
                Just(SweepVariable::Temperature),
                Just(SweepVariable::Separation),
                Just(SweepVariable::Mfp)
            ],
            0.02f64..10.0,
            1.5f64..100.0,
            2usize..200,
            prop_oneof![Just(Spacing::Linear), Just(Spacing::Log)],
            proptest::collection::vec(0.01f64..20.0, 0..3),
        )
            .prop_map(|(variable, min, factor, count, spacing, temps)| SweepSpec {
                variable,
                min,
                max: min * factor,
                count,
                spacing,
                temperatures_k: if variable == SweepVariable::Field {
                    temps
                } else {
                    vec![]
                },
            }),
    )
}

fn config() -> impl Strategy<Value = RunConfig> {
    (
        plate(),
        plate(),
        1.0f64..5000.0,
        (0.01f64..300.0, 0.0f64..1e4),
        sweep(),
        (
            1e-12f64..1e-3,
            1e-12f64..1e-3,
            10usize..100_000_000,
            1usize..1000,
        ),
        (
            0.0f64..10.0,
            prop_oneof![Just(1.0), Just(2.0)],
            proptest::option::of(1e10f64..1e16),
        ),
        (
            proptest::option::of("[a-z]{1,8}\\.csv"),
            proptest::option::of(prop_oneof![Just(Format::Csv), Just(Format::Json)]),
        ),
    )
        .prop_map(
            |(
                plate1,
                plate2,
                a,
                (t, h),
                sweep,
                (qt, mt, mm, qs),
                (kappa, cf, cutoff),
                (path, format),
            )| RunConfig {
                plate1,
                plate2,
                geometry: Geometry {
                    separation_nm: Some(a),
                },
                conditions: Conditions {
                    temperature_k: t,
                    field_gauss: h,
                },
                sweep,
                numerics: NumericsSection {
                    quad_rel_tol: qt,
                    matsubara_rel_tol: mt,
                    max_matsubara: mm,
                    quad_max_subdivisions: qs,
                },
                fluctuations: FluctuationSection {
                    kappa,
                    cooperon_factor: cf,
                    correlation: if cutoff.is_some() {
                        CorrelationForm::Exponential
                    } else {
                        CorrelationForm::Separable
                    },
                    correlation_cutoff_rad_s: cutoff,
                    ..FluctuationSection::default()
                },
                output: OutputSection { path, format },
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialized_configs_parse_back_equal(c in config()) {
        prop_assert!(c.validate().is_ok(), "{:?}", c.validate());
        let text = c.to_toml();
        let (back, unknown) = parse_config(&text, true).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert!(unknown.is_empty());
        prop_assert_eq!(back, c);
    }
}
