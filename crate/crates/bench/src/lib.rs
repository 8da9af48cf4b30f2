//! Fixtures shared by the engine benchmarks.

use casimir_core::{
    derive_material, Dimensionality, LifshitzJob, MaterialInput, MaterialSpec, Plate, ResponseKind,
    ResponseModel, GAUSS,
};

pub const SEPARATION: f64 = 250e-9;

pub fn gold(dimensionality: Dimensionality) -> MaterialSpec {
    derive_material(&MaterialInput::gold(15.0, dimensionality)).expect("gold parameters are valid")
}

/// Drude bulk plate facing a weak-localization sheet at 250 nm.
pub fn wl_job(temperature: f64, field_gauss: f64) -> LifshitzJob {
    LifshitzJob::new(
        SEPARATION,
        temperature,
        field_gauss * GAUSS,
        Plate::Response(
            ResponseModel::new(ResponseKind::Drude, gold(Dimensionality::ThreeD)).unwrap(),
        ),
        Plate::Response(
            ResponseModel::new(ResponseKind::DrudeWl, gold(Dimensionality::TwoD)).unwrap(),
        ),
    )
    .expect("benchmark job is valid")
}
