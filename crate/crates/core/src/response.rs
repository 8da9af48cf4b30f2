//! Electromagnetic linear response of a plate on the imaginary frequency axis.
//!
//! Responses are expressed in inverse-length form so they plug straight
//! into the reflection formulas: a sheet gives `Pi` in 1/m, a bulk plate in
//! 1/m^2. Both share the prefactor `mu0 n e^2 / m*` (see
//! [`MaterialSpec::plasma_strength`]), with `n` the sheet or bulk density.
//! For a sheet this is the same as `Pi = -mu0 * omega * sigma(i omega)`.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::{to_wavevector, validate_temperature, Dimensionality, MaterialSpec, SI};
use crate::special::digamma_positive;

/// Above this value of `hbar / (4 e H D tau_phi)` the zero-field closed form
/// replaces the digamma expression.
pub const WL_ZERO_FIELD_SWITCH: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResponseKind {
    #[serde(rename = "plasma")]
    Plasma,
    #[serde(rename = "drude")]
    Drude,
    #[serde(rename = "drude_wl")]
    DrudeWl,
}

impl ResponseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResponseKind::Plasma => "plasma",
            ResponseKind::Drude => "drude",
            ResponseKind::DrudeWl => "drude_wl",
        }
    }
}

/// A plate's response model bound to its material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseModel {
    pub kind: ResponseKind,
    pub material: MaterialSpec,
}

/// A response value together with the frequency it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseValue {
    /// 1/m for a sheet, 1/m^2 for a bulk plate.
    pub pi: f64,
    /// Matsubara frequency in inverse-length form, 1/m.
    pub omega_n: f64,
}

impl ResponseModel {
    pub fn new(kind: ResponseKind, material: MaterialSpec) -> Result<Self> {
        if kind == ResponseKind::DrudeWl && material.dimensionality != Dimensionality::TwoD {
            return Err(Error::Validation {
                field: "dimensionality",
                reason: "weak-localization correction is only defined for a 2d plate".into(),
            });
        }
        Ok(ResponseModel { kind, material })
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.material.dimensionality
    }

    /// Freeze temperature and field so `pi(omega)` is a cheap closed form.
    pub fn at_conditions(&self, temperature: f64, field: f64) -> Result<FrozenResponse> {
        let strength = self.material.plasma_strength();
        let (relaxation_rate, wl_sigma) = match self.kind {
            ResponseKind::Plasma => (0.0, 0.0),
            ResponseKind::Drude => (1.0 / self.material.tau, 0.0),
            ResponseKind::DrudeWl => (
                1.0 / self.material.tau,
                wl_conductivity(&self.material, temperature, field)?,
            ),
        };
        Ok(FrozenResponse {
            kind: self.kind,
            dimensionality: self.material.dimensionality,
            strength,
            relaxation_rate,
            wl_sigma,
        })
    }
}

/// Response with temperature and field already applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenResponse {
    pub kind: ResponseKind,
    pub dimensionality: Dimensionality,
    /// `mu0 n e^2 / m*`.
    pub strength: f64,
    /// `1/tau`, zero for the plasma model.
    pub relaxation_rate: f64,
    /// Weak-localization conductivity correction, S.
    pub wl_sigma: f64,
}

impl FrozenResponse {
    /// `Pi(i omega)` for omega in rad/s.
    #[inline]
    pub fn pi(&self, omega: f64) -> f64 {
        match self.kind {
            ResponseKind::Plasma => -self.strength,
            ResponseKind::Drude => -self.strength * omega / (omega + self.relaxation_rate),
            ResponseKind::DrudeWl => {
                -self.strength * omega / (omega + self.relaxation_rate)
                    - SI.mu0 * omega.abs() * self.wl_sigma
            }
        }
    }

    /// DC conductivity in S (sheet) or S/m (bulk); infinite for the plasma model.
    pub fn dc_conductivity(&self) -> f64 {
        match self.kind {
            ResponseKind::Plasma => f64::INFINITY,
            _ => self.strength / (SI.mu0 * self.relaxation_rate) + self.wl_sigma,
        }
    }
}

fn check_omega(omega: f64) -> Result<f64> {
    if omega.is_finite() && omega >= 0.0 {
        Ok(omega)
    } else {
        Err(Error::Validation {
            field: "omega_n",
            reason: format!("must be non-negative, got {omega}"),
        })
    }
}

/// Drude response `-(mu0 n e^2/m*) omega / (omega + 1/tau)`.
pub fn drude_pi(model: &ResponseModel, omega: f64) -> Result<ResponseValue> {
    let omega = check_omega(omega)?;
    if model.kind == ResponseKind::Plasma {
        return Err(Error::ModelMismatch {
            model: "plasma",
            operation: "drude_pi",
        });
    }
    let strength = model.material.plasma_strength();
    Ok(ResponseValue {
        pi: -strength * omega / (omega + 1.0 / model.material.tau),
        omega_n: to_wavevector(omega),
    })
}

/// Dissipationless response `-mu0 n e^2 / m*`, frequency independent.
pub fn plasma_pi(model: &ResponseModel, omega: f64) -> Result<ResponseValue> {
    let omega = check_omega(omega)?;
    if model.kind != ResponseKind::Plasma {
        return Err(Error::ModelMismatch {
            model: model.kind.as_str(),
            operation: "plasma_pi",
        });
    }
    Ok(ResponseValue {
        pi: -model.material.plasma_strength(),
        omega_n: to_wavevector(omega),
    })
}

/// Nyquist dephasing time of a 2D film,
/// `1/tau_phi = k_B T / (2 pi D nu hbar^2) ln(pi D nu hbar)`.
pub fn dephasing_time(material: &MaterialSpec, temperature: f64) -> Result<f64> {
    let t = validate_temperature(temperature)?;
    if material.dimensionality != Dimensionality::TwoD {
        return Err(Error::Validation {
            field: "dimensionality",
            reason: "dephasing time formula applies to 2d films".into(),
        });
    }
    let hbar = SI.hbar;
    let g = PI * material.diffusion * material.dos_2d * hbar;
    if g <= 1.0 {
        return Err(Error::Domain(format!(
            "pi D nu hbar = {g} <= 1, Nyquist dephasing rate would be non-positive"
        )));
    }
    let rate =
        SI.k_b * t / (2.0 * PI * material.diffusion * material.dos_2d * hbar * hbar) * g.ln();
    Ok(1.0 / rate)
}

/// `e^2 / (2 pi^2 hbar)`, S.
pub fn wl_conductance_quantum() -> f64 {
    SI.e_charge * SI.e_charge / (2.0 * PI * PI * SI.hbar)
}

/// Hikami-Larkin-Nagaoka conductivity correction in S.
///
/// Depends on |H| only. Returns 0 (with a warning) when `tau_phi <= tau`,
/// where the diffusive formula has no meaning.
pub fn wl_conductivity(material: &MaterialSpec, temperature: f64, field: f64) -> Result<f64> {
    let tau_phi = dephasing_time(material, temperature)?;
    if !field.is_finite() {
        return Err(Error::Validation {
            field: "field",
            reason: format!("must be finite, got {field}"),
        });
    }
    let tau = material.tau;
    if tau_phi <= tau {
        warn!(
            "tau_phi = {tau_phi:e} s <= tau = {tau:e} s at T = {temperature} K; \
             weak-localization correction set to zero"
        );
        return Ok(0.0);
    }
    let h = field.abs();
    let g0 = wl_conductance_quantum();
    let scale = SI.hbar / (4.0 * SI.e_charge * material.diffusion);
    if h == 0.0 || scale / (h * tau_phi) > WL_ZERO_FIELD_SWITCH {
        return Ok(-g0 * (tau_phi / tau).ln());
    }
    let x = scale / (h * tau_phi);
    Ok(g0 * (digamma_positive(0.5 + x) - (scale / (h * tau)).ln()))
}

/// Weak-localization response correction `delta Pi = -mu0 |omega| delta sigma`.
pub fn wl_correction(
    material: &MaterialSpec,
    omega: f64,
    temperature: f64,
    field: f64,
) -> Result<ResponseValue> {
    let omega = check_omega(omega)?;
    let sigma = wl_conductivity(material, temperature, field)?;
    Ok(ResponseValue {
        pi: -SI.mu0 * omega * sigma,
        omega_n: to_wavevector(omega),
    })
}

/// Full response of the model at (omega, T, H).
pub fn total_pi(
    model: &ResponseModel,
    omega: f64,
    temperature: f64,
    field: f64,
) -> Result<ResponseValue> {
    match model.kind {
        ResponseKind::Plasma => plasma_pi(model, omega),
        ResponseKind::Drude => drude_pi(model, omega),
        ResponseKind::DrudeWl => {
            let base = drude_pi(model, omega)?;
            let delta = wl_correction(&model.material, omega, temperature, field)?;
            Ok(ResponseValue {
                pi: base.pi + delta.pi,
                omega_n: base.omega_n,
            })
        }
    }
}

/// DC conductivity: `n e^2 tau / m*`, plus the HLN correction for a
/// weak-localization plate. S for sheets, S/m for bulk.
pub fn dc_conductivity(model: &ResponseModel, temperature: f64, field: f64) -> Result<f64> {
    let m = &model.material;
    let drude = m.carrier_density() * SI.e_charge * SI.e_charge * m.tau / m.m_star;
    match model.kind {
        ResponseKind::Plasma => Err(Error::ModelMismatch {
            model: "plasma",
            operation: "dc_conductivity",
        }),
        ResponseKind::Drude => Ok(drude),
        ResponseKind::DrudeWl => Ok(drude + wl_conductivity(m, temperature, field)?),
    }
}
