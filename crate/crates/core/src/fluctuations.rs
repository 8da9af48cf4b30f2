//! Sample-to-sample fluctuations of the Casimir energy between a disordered
//! sheet (plate 1) and a clean plasma sheet (plate 2).
//!
//! The mean energy is the one-loop (first-order in `r1 r2`) Lifshitz energy
//! with plate 1 screened by the in-plane photon propagator. Its first-order
//! response to a conductivity fluctuation `delta sigma(omega)` of plate 1 is
//!
//! ```text
//! delta E = -k_B T sum_{n>=1} mu0 omega_n delta sigma(omega_n) S_n,
//! S_n = 1/(8 pi a^2) int y sum_X D^X Gamma_1^X r_2^X e^{-y} dy,
//! ```
//!
//! so the width follows from the conductivity covariance as
//! `W^2 = sum_{n,n'} s_n s_n' <delta sigma(omega_n) delta sigma(omega_n')>`.

use std::cell::Cell;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{positive, Error, Result};
use crate::lifshitz::{NumericsConfig, MIN_TEMPERATURE};
use crate::matsubara::{collect_matsubara, Term, Truncation};
use crate::quadrature::{integrate, QuadOptions};
use crate::quantities::{matsubara_unchecked, to_wavevector, Dimensionality, MaterialSpec, SI};
use crate::reflection::{zero_mode_reflection, Polarization};
use crate::response::{FrozenResponse, ResponseKind, ResponseModel};

/// Kernel amplitude that reproduces the tau-slope `C1 = 0.096` for gold at
/// a = 250 nm, T = 1 K (mean free paths 20 to 200 nm) with the separable
/// correlation and cooperon factor 2.
pub const DEFAULT_KAPPA: f64 = 0.029_58;

/// Temperature used for fluctuation reports unless configured otherwise, K.
pub const DEFAULT_TEMPERATURE: f64 = 1.0;

const Y_SPAN: f64 = 45.0;
const PANEL_EDGES: [f64; 6] = [0.0, 1.0, 3.0, 7.0, 15.0, Y_SPAN];

/// Free-space imaginary-frequency photon propagator in the plane-wave basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhotonPropagator;

impl PhotonPropagator {
    /// In-plane value `D^X(0)`: `q_perp / (2 xi^2)` for TM, `1 / (2 q_perp)`
    /// for TE. Units make `Pi D` dimensionless for a sheet response.
    pub fn in_plane(&self, polarization: Polarization, q_perp: f64, xi: f64) -> Result<f64> {
        if !(q_perp > 0.0) {
            return Err(Error::Domain(format!(
                "q_perp must be positive, got {q_perp}"
            )));
        }
        match polarization {
            Polarization::Te => Ok(1.0 / (2.0 * q_perp)),
            Polarization::Tm if xi == 0.0 => Err(Error::ZeroFrequency),
            Polarization::Tm => Ok(q_perp / (2.0 * xi * xi)),
        }
    }

    /// Propagation between two planes a distance `z` apart.
    pub fn between(&self, polarization: Polarization, q_perp: f64, xi: f64, z: f64) -> Result<f64> {
        Ok(self.in_plane(polarization, q_perp, xi)? * (-q_perp * z.abs()).exp())
    }
}

#[inline]
fn propagators(q_perp: f64, xi2: f64) -> [f64; 2] {
    [q_perp / (2.0 * xi2), 1.0 / (2.0 * q_perp)]
}

/// A sheet response dressed by the in-plane propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenedResponse {
    pub base: ResponseModel,
    frozen: FrozenResponse,
}

impl ScreenedResponse {
    pub fn new(base: ResponseModel, temperature: f64, field: f64) -> Result<Self> {
        if base.dimensionality() != Dimensionality::TwoD {
            return Err(Error::Validation {
                field: "dimensionality",
                reason: "the one-loop fluctuation model takes two 2d plates".into(),
            });
        }
        Ok(ScreenedResponse {
            base,
            frozen: base.at_conditions(temperature, field)?,
        })
    }

    /// Drude-averaged sheet; no weak-localization shift in the mean.
    pub fn drude(material: MaterialSpec) -> Result<Self> {
        Self::new(
            ResponseModel::new(ResponseKind::Drude, material)?,
            DEFAULT_TEMPERATURE,
            0.0,
        )
    }

    pub fn plasma(material: MaterialSpec) -> Result<Self> {
        Self::new(
            ResponseModel::new(ResponseKind::Plasma, material)?,
            DEFAULT_TEMPERATURE,
            0.0,
        )
    }

    pub fn material(&self) -> &MaterialSpec {
        &self.base.material
    }

    /// Bare `<Pi>` at omega (rad/s), 1/m.
    pub fn pi(&self, omega: f64) -> f64 {
        self.frozen.pi(omega)
    }

    fn denominator(
        &self,
        polarization: Polarization,
        omega: f64,
        q_perp: f64,
    ) -> Result<(f64, f64)> {
        let xi = to_wavevector(omega);
        let d = PhotonPropagator.in_plane(polarization, q_perp, xi)?;
        let denom = 1.0 - self.pi(omega) * d;
        if !(denom > 0.0) {
            return Err(Error::RpaPole {
                n: 0,
                q_perp,
                polarization: polarization.as_str(),
            });
        }
        Ok((d, denom))
    }

    /// `Pi~ = <Pi> / (1 - <Pi> D(0))` at omega > 0.
    pub fn screened(&self, polarization: Polarization, omega: f64, q_perp: f64) -> Result<f64> {
        let (_, denom) = self.denominator(polarization, omega, q_perp)?;
        Ok(self.pi(omega) / denom)
    }

    /// `Gamma_1 = (1 / (1 - <Pi> D(0))) (1 + Pi~ D(0))`.
    pub fn vertex(&self, polarization: Polarization, omega: f64, q_perp: f64) -> Result<f64> {
        let (d, denom) = self.denominator(polarization, omega, q_perp)?;
        let screened = self.pi(omega) / denom;
        Ok((1.0 + screened * d) / denom)
    }

    /// `r = -Pi~ D(0)` at omega > 0; the zero-mode limit at omega = 0.
    pub fn reflection(&self, polarization: Polarization, omega: f64, q_perp: f64) -> Result<f64> {
        if omega == 0.0 {
            return Ok(zero_mode_reflection(&self.frozen, polarization, q_perp));
        }
        let (d, denom) = self.denominator(polarization, omega, q_perp)?;
        Ok(-self.pi(omega) * d / denom)
    }
}

/// Conductivity covariance `<delta sigma(omega) delta sigma(omega')>` up to
/// the overall variance scale.
pub trait ConductivityCovariance: Sync {
    /// Dimensionless correlation between two Matsubara frequencies (rad/s),
    /// symmetric in its arguments.
    fn correlation(&self, omega1: f64, omega2: f64) -> f64;

    /// `sum_{n,n'} s_n s_n' c(omega_n, omega_n')`, rows reduced in index order.
    fn quadratic_form(&self, omegas: &[f64], s: &[f64]) -> f64 {
        let rows: Vec<f64> = (0..omegas.len())
            .into_par_iter()
            .map(|n| {
                let mut row = 0.0;
                for m in 0..omegas.len() {
                    row += self.correlation(omegas[n], omegas[m]) * s[m];
                }
                s[n] * row
            })
            .collect();
        rows.iter().sum()
    }
}

/// Frequency-independent correlation; the double sum collapses to a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Separable;

impl ConductivityCovariance for Separable {
    fn correlation(&self, _: f64, _: f64) -> f64 {
        1.0
    }

    fn quadratic_form(&self, _: &[f64], s: &[f64]) -> f64 {
        let total: f64 = s.iter().sum();
        total * total
    }
}

/// `exp(-|omega - omega'| / cutoff)`, cutoff in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialCorrelation {
    pub cutoff: f64,
}

impl ConductivityCovariance for ExponentialCorrelation {
    fn correlation(&self, omega1: f64, omega2: f64) -> f64 {
        (-(omega1 - omega2).abs() / self.cutoff).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Correlation {
    Separable,
    Exponential { cutoff: f64 },
}

/// Disorder-averaged conductivity covariance of plate 1:
/// `<delta sigma delta sigma> = amplitude * cooperon_factor * (sigma_D hbar / (eps_F tau))^2 * c(omega, omega')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationKernel {
    pub amplitude: f64,
    /// 2 without field, 1 once the cooperon channel is suppressed by a field.
    pub cooperon_factor: f64,
    pub correlation: Correlation,
}

impl Default for FluctuationKernel {
    fn default() -> Self {
        FluctuationKernel {
            amplitude: DEFAULT_KAPPA,
            cooperon_factor: 2.0,
            correlation: Correlation::Separable,
        }
    }
}

impl FluctuationKernel {
    pub fn with_amplitude(amplitude: f64) -> Self {
        FluctuationKernel {
            amplitude,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::Validation {
                field: "amplitude",
                reason: format!("must be non-negative, got {}", self.amplitude),
            });
        }
        if self.cooperon_factor != 1.0 && self.cooperon_factor != 2.0 {
            return Err(Error::Validation {
                field: "cooperon_factor",
                reason: format!("must be 1 or 2, got {}", self.cooperon_factor),
            });
        }
        if let Correlation::Exponential { cutoff } = self.correlation {
            positive("cutoff", cutoff)?;
        }
        Ok(())
    }

    /// Equal-frequency variance `<delta sigma^2>`, S^2.
    pub fn variance(&self, material: &MaterialSpec) -> f64 {
        let sigma_drude =
            material.n_2d * SI.e_charge * SI.e_charge * material.tau / material.m_star;
        let relative = sigma_drude * material.disorder_parameter();
        self.amplitude * self.cooperon_factor * relative * relative
    }

    fn quadratic_form(&self, omegas: &[f64], s: &[f64]) -> f64 {
        match self.correlation {
            Correlation::Separable => Separable.quadratic_form(omegas, s),
            Correlation::Exponential { cutoff } => {
                ExponentialCorrelation { cutoff }.quadratic_form(omegas, s)
            }
        }
    }
}

fn validate_geometry(separation: f64, temperature: f64) -> Result<()> {
    positive("separation", separation)?;
    if !(temperature.is_finite() && temperature >= MIN_TEMPERATURE) {
        return Err(Error::Validation {
            field: "temperature",
            reason: format!("must be at least {MIN_TEMPERATURE} K, got {temperature}"),
        });
    }
    Ok(())
}

fn quad_options(numerics: &NumericsConfig) -> QuadOptions {
    QuadOptions {
        rel_tol: numerics.quad_rel_tol,
        abs_tol: 0.0,
        max_subdivisions: numerics.quad_max_subdivisions,
    }
}

fn truncation(numerics: &NumericsConfig) -> Truncation {
    Truncation::Adaptive {
        rel_tol: numerics.matsubara_rel_tol,
        max_terms: numerics.max_matsubara,
    }
}

// Reflection and screening data of one sheet at one Matsubara frequency.
#[derive(Clone, Copy)]
enum SheetAt {
    Zero(FrozenResponse),
    Finite(f64),
}

impl SheetAt {
    fn new(plate: &ScreenedResponse, n: usize, omega: f64) -> Self {
        if n == 0 {
            SheetAt::Zero(plate.frozen)
        } else {
            SheetAt::Finite(plate.pi(omega))
        }
    }

    /// `[r_TM, r_TE]` and `[1 - Pi D_TM, 1 - Pi D_TE]`.
    #[inline]
    fn reflect(&self, q_perp: f64, xi2: f64) -> ([f64; 2], [f64; 2]) {
        match *self {
            SheetAt::Zero(ref r) => (
                [
                    zero_mode_reflection(r, Polarization::Tm, q_perp),
                    zero_mode_reflection(r, Polarization::Te, q_perp),
                ],
                [1.0, 1.0],
            ),
            SheetAt::Finite(pi) => {
                let d = propagators(q_perp, xi2);
                let denom = [1.0 - pi * d[0], 1.0 - pi * d[1]];
                ([-pi * d[0] / denom[0], -pi * d[1] / denom[1]], denom)
            }
        }
    }
}

fn pole_error(n: usize, pole: Option<(f64, usize)>) -> Result<()> {
    match pole {
        Some((q_perp, pol)) => Err(Error::RpaPole {
            n,
            q_perp,
            polarization: Polarization::BOTH[pol].as_str(),
        }),
        None => Ok(()),
    }
}

/// Energies `[one-loop, full logarithm]` per unit area, J/m^2.
fn energies(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<[f64; 2]> {
    validate_geometry(separation, temperature)?;
    numerics.validate()?;
    let a = separation;
    let quad = quad_options(numerics);
    let term = |n: usize| -> Result<Term<2>> {
        let omega = matsubara_unchecked(n as u64, temperature);
        let xi = to_wavevector(omega);
        let xi2 = xi * xi;
        let s1 = SheetAt::new(plate1, n, omega);
        let s2 = SheetAt::new(plate2, n, omega);
        let pole = Cell::new(None);
        let broken = Cell::new(None);
        let f = |y: f64| {
            let q_perp = y / (2.0 * a);
            let (r1, d1) = s1.reflect(q_perp, xi2);
            let (r2, d2) = s2.reflect(q_perp, xi2);
            let decay = (-y).exp();
            let mut linear = 0.0;
            let mut log = 0.0;
            for x in 0..2 {
                if !(d1[x] > 0.0 && d2[x] > 0.0) {
                    pole.set(Some((q_perp, x)));
                    continue;
                }
                let rr = r1[x] * r2[x] * decay;
                if !(rr < 1.0) {
                    broken.set(Some((q_perp, 1.0 - rr)));
                    continue;
                }
                linear -= rr;
                log += (-rr).ln_1p();
            }
            [y * linear, y * log]
        };
        let y0 = 2.0 * xi * a;
        let r = integrate(f, &PANEL_EDGES.map(|e| y0 + e), &quad);
        pole_error(n, pole.get())?;
        if let Some((q_perp, value)) = broken.get() {
            return Err(Error::LogArgument { n, q_perp, value });
        }
        let scale = SI.k_b * temperature / (8.0 * PI * a * a);
        Ok(Term {
            value: [scale * r.value[0], scale * r.value[1]],
            abs_error: [scale * r.abs_error[0], scale * r.abs_error[1]],
        })
    };
    let collected = collect_matsubara(term, truncation(numerics))?;
    let mut sum = collected.tail;
    for (n, t) in collected.terms.iter().enumerate() {
        let w = if n == 0 { 0.5 } else { 1.0 };
        sum[0] += w * t.value[0];
        sum[1] += w * t.value[1];
    }
    if !collected.converged {
        return Err(Error::NotConverged {
            n_terms: collected.terms.len(),
            partial_pressure: f64::NAN,
            partial_energy: sum[0],
            tail_estimate: collected.tail[0],
        });
    }
    Ok(sum)
}

/// Lifshitz energy between two sheets with the logarithm expanded to first
/// order, J/m^2.
pub fn one_loop_energy(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<f64> {
    Ok(energies(plate1, plate2, separation, temperature, numerics)?[0])
}

/// The same two-sheet energy with the full logarithm, J/m^2.
pub fn full_log_energy(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<f64> {
    Ok(energies(plate1, plate2, separation, temperature, numerics)?[1])
}

/// Energy sensitivities `s_n = -d E / d delta sigma(omega_n)` in J/(m^2 S),
/// with the Matsubara frequencies they belong to. Index 0 is the zero mode,
/// which a conductivity fluctuation cannot move.
pub fn energy_sensitivities(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    validate_geometry(separation, temperature)?;
    numerics.validate()?;
    let a = separation;
    let quad = quad_options(numerics);
    let term = |n: usize| -> Result<Term<1>> {
        if n == 0 {
            return Ok(Term {
                value: [0.0],
                abs_error: [0.0],
            });
        }
        let omega = matsubara_unchecked(n as u64, temperature);
        let xi = to_wavevector(omega);
        let xi2 = xi * xi;
        let pi1 = plate1.pi(omega);
        let s2 = SheetAt::new(plate2, n, omega);
        let pole = Cell::new(None);
        let f = |y: f64| {
            let q_perp = y / (2.0 * a);
            let d = propagators(q_perp, xi2);
            let (r2, d2) = s2.reflect(q_perp, xi2);
            let mut acc = 0.0;
            for x in 0..2 {
                let denom = 1.0 - pi1 * d[x];
                if !(denom > 0.0 && d2[x] > 0.0) {
                    pole.set(Some((q_perp, x)));
                    continue;
                }
                acc += d[x] * r2[x] / (denom * denom);
            }
            [y * acc * (-y).exp()]
        };
        let y0 = 2.0 * xi * a;
        let r = integrate(f, &PANEL_EDGES.map(|e| y0 + e), &quad);
        pole_error(n, pole.get())?;
        let scale = SI.k_b * temperature * SI.mu0 * omega / (8.0 * PI * a * a);
        Ok(Term {
            value: [scale * r.value[0]],
            abs_error: [scale * r.abs_error[0]],
        })
    };
    let collected = collect_matsubara(term, truncation(numerics))?;
    if !collected.converged {
        return Err(Error::NotConverged {
            n_terms: collected.terms.len(),
            partial_pressure: f64::NAN,
            partial_energy: f64::NAN,
            tail_estimate: collected.tail[0],
        });
    }
    let omegas = (0..collected.terms.len())
        .map(|n| matsubara_unchecked(n as u64, temperature))
        .collect();
    let s = collected.terms.iter().map(|t| t.value[0]).collect();
    Ok((omegas, s))
}

/// Standard deviation of the Casimir energy over disorder realizations of
/// plate 1, J/m^2.
pub fn distribution_width(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    kernel: &FluctuationKernel,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<f64> {
    Ok(width_squared(plate1, plate2, kernel, separation, temperature, numerics)?.sqrt())
}

/// `W^2`, J^2/m^4.
pub fn width_squared(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    kernel: &FluctuationKernel,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<f64> {
    kernel.validate()?;
    let (omegas, s) = energy_sensitivities(plate1, plate2, separation, temperature, numerics)?;
    let form = kernel.quadratic_form(&omegas, &s);
    Ok(kernel.variance(plate1.material()) * form.max(0.0))
}

/// Width computed with a caller-supplied covariance (variance scale taken
/// from `kernel`, correlation from `covariance`).
pub fn distribution_width_with(
    plate1: &ScreenedResponse,
    plate2: &ScreenedResponse,
    kernel: &FluctuationKernel,
    covariance: &dyn ConductivityCovariance,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<f64> {
    kernel.validate()?;
    let (omegas, s) = energy_sensitivities(plate1, plate2, separation, temperature, numerics)?;
    let form = covariance.quadratic_form(&omegas, &s);
    Ok((kernel.variance(plate1.material()) * form.max(0.0)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EnergyDensity {
    /// Probability density, m^2/J.
    Finite(f64),
    /// Zero width: all probability sits at the mean.
    PointMass,
}

/// Gaussian density of Casimir energies centred on `mean` with width `width`.
pub fn energy_distribution(mean: f64, width: f64, e: f64) -> Result<EnergyDensity> {
    if !(width.is_finite() && width >= 0.0) {
        return Err(Error::Validation {
            field: "width",
            reason: format!("must be non-negative, got {width}"),
        });
    }
    if width == 0.0 {
        return Ok(EnergyDensity::PointMass);
    }
    let z = (e - mean) / width;
    Ok(EnergyDensity::Finite(
        (-0.5 * z * z).exp() / (2.0 * PI * width * width).sqrt(),
    ))
}

/// `hbar c / (eps_F a)`.
pub fn separation_parameter(material: &MaterialSpec, separation: f64) -> f64 {
    SI.hbar * SI.c / (material.epsilon_f * separation)
}

/// `c tau / a`.
pub fn ballistic_parameter(material: &MaterialSpec, separation: f64) -> f64 {
    SI.c * material.tau / separation
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationReport {
    pub separation: f64,
    pub tau: f64,
    pub temperature: f64,
    pub e0_drude: f64,
    pub e0_plasma: f64,
    pub width_w: f64,
    /// `W / |E0^Drude|`.
    pub ratio_w_over_e0: f64,
    /// `W / |E0^plasma|`.
    pub ratio_w_over_e0_plasma: f64,
    /// `W / |E0^Drude - E0^plasma|`.
    pub ratio_w_over_gap: f64,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub fit_residual: Option<f64>,
    pub sharply_peaked: bool,
    pub wide: bool,
}

impl FluctuationReport {
    pub fn density(&self, e: f64) -> Result<EnergyDensity> {
        energy_distribution(self.e0_drude, self.width_w, e)
    }
}

/// Mean energies, width and regime flags for a Drude sheet of `sheet`
/// facing a plasma sheet of `clean`.
pub fn fluctuation_report(
    sheet: &MaterialSpec,
    clean: &MaterialSpec,
    kernel: &FluctuationKernel,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
) -> Result<FluctuationReport> {
    let drude = ScreenedResponse::new(
        ResponseModel::new(ResponseKind::Drude, *sheet)?,
        temperature,
        0.0,
    )?;
    let plasma1 = ScreenedResponse::new(
        ResponseModel::new(ResponseKind::Plasma, *sheet)?,
        temperature,
        0.0,
    )?;
    let plasma2 = ScreenedResponse::new(
        ResponseModel::new(ResponseKind::Plasma, *clean)?,
        temperature,
        0.0,
    )?;
    let e0_drude = one_loop_energy(&drude, &plasma2, separation, temperature, numerics)?;
    let e0_plasma = one_loop_energy(&plasma1, &plasma2, separation, temperature, numerics)?;
    let width_w = distribution_width(&drude, &plasma2, kernel, separation, temperature, numerics)?;
    let gap = (e0_drude - e0_plasma).abs();
    if gap == 0.0 {
        return Err(Error::DegenerateGap(e0_drude));
    }
    let ratio_w_over_gap = width_w / gap;
    Ok(FluctuationReport {
        separation,
        tau: sheet.tau,
        temperature,
        e0_drude,
        e0_plasma,
        width_w,
        ratio_w_over_e0: width_w / e0_drude.abs(),
        ratio_w_over_e0_plasma: width_w / e0_plasma.abs(),
        ratio_w_over_gap,
        c1: None,
        c2: None,
        fit_residual: None,
        sharply_peaked: ratio_w_over_gap < 0.1,
        wide: separation_parameter(sheet, separation) > 1.0
            || ballistic_parameter(sheet, separation) > 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthGapRatio {
    /// `W / |E0^Drude - E0^plasma|` from the full computation.
    pub direct: f64,
    /// `C2 (sqrt(hbar c / eps_F a) + (C2 / C1) c tau / a)`.
    pub predicted: f64,
    pub separation_parameter: f64,
    pub ballistic_parameter: f64,
}

/// Fitted constants of the two scaling laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingConstants {
    pub c1: f64,
    pub c2: f64,
}

/// Closed-form width-to-gap prediction from fitted constants.
pub fn predicted_width_gap_ratio(
    material: &MaterialSpec,
    separation: f64,
    constants: ScalingConstants,
) -> f64 {
    let s = separation_parameter(material, separation);
    let b = ballistic_parameter(material, separation);
    constants.c2 * (s.sqrt() + (constants.c2 / constants.c1) * b)
}

/// Direct and closed-form width-to-gap ratios.
pub fn width_gap_ratio(
    sheet: &MaterialSpec,
    clean: &MaterialSpec,
    kernel: &FluctuationKernel,
    separation: f64,
    temperature: f64,
    numerics: &NumericsConfig,
    constants: ScalingConstants,
) -> Result<WidthGapRatio> {
    let report = fluctuation_report(sheet, clean, kernel, separation, temperature, numerics)?;
    Ok(WidthGapRatio {
        direct: report.ratio_w_over_gap,
        predicted: predicted_width_gap_ratio(sheet, separation, constants),
        separation_parameter: separation_parameter(sheet, separation),
        ballistic_parameter: ballistic_parameter(sheet, separation),
    })
}
