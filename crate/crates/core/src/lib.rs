//! Casimir pressure between a bulk plate and a disordered conducting sheet,
//! with weak-localization response and disorder-fluctuation widths.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod fluctuations;
pub mod lifshitz;
pub mod matsubara;
pub mod quadrature;
pub mod quantities;
pub mod reflection;
pub mod response;
pub mod special;

pub use error::{Error, Result};
pub use fit::{
    fit_scaling_distance, fit_scaling_tau, linear_least_squares, DistanceFit, LinearFit, TauFit,
    WEAK_DISORDER_LIMIT,
};
pub use fluctuations::{
    ballistic_parameter, distribution_width, distribution_width_with, energy_distribution,
    energy_sensitivities, fluctuation_report, full_log_energy, one_loop_energy,
    predicted_width_gap_ratio, separation_parameter, width_gap_ratio, width_squared,
    ConductivityCovariance, Correlation, EnergyDensity, ExponentialCorrelation, FluctuationKernel,
    FluctuationReport, PhotonPropagator, ScalingConstants, ScreenedResponse, Separable,
    WidthGapRatio, DEFAULT_KAPPA, DEFAULT_TEMPERATURE,
};
pub use lifshitz::{
    casimir_energy, casimir_pressure, casimir_pressure_fixed_terms, ideal_energy, ideal_pressure,
    mode_integrals, mode_integrand, mode_log_terms, suppression_metrics, LifshitzJob,
    ModeIntegrals, NumericsConfig, Plate, PressureResult, SuppressionMetrics, MIN_TEMPERATURE,
};
pub use quantities::{
    derive_material, matsubara_frequency, to_wavevector, Dimensionality, MaterialInput,
    MaterialSpec, PhysicalConstants, GAUSS, NANOMETER, SI,
};
pub use reflection::{
    reflect_2d, reflect_3d, zero_mode_reflection, Mode, Polarization, ReflectionPair,
};
pub use response::{
    dc_conductivity, dephasing_time, drude_pi, plasma_pi, total_pi, wl_conductivity, wl_correction,
    FrozenResponse, ResponseKind, ResponseModel,
};
pub use special::digamma;
