//! Reflection coefficients of sheets and half-spaces at imaginary frequency.
//!
//! Sign convention: only the products `r1 r2` enter the Lifshitz formula, and
//! for two ideal plates each product must tend to +1. The sheet formulas are
//! used as written (`Pi / (Pi - 2 xi^2 / q_perp)`, `Pi / (Pi - 2 q_perp)`, both
//! non-negative for `Pi <= 0`), the half-space TM coefficient is the usual
//! `(eps q_perp - k) / (eps q_perp + k)`, and the half-space TE coefficient is
//! taken with the opposite overall sign, `(k - q_perp) / (k + q_perp)`, so that
//! it also tends to +1. Taken literally, the two published TE forms have
//! opposite ideal limits, which would make an ideal sheet/half-space pair repel
//! in TE.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::Dimensionality;
use crate::response::{FrozenResponse, ResponseKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "TM")]
    Tm,
    #[serde(rename = "TE")]
    Te,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Tm, Polarization::Te];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::Tm => "TM",
            Polarization::Te => "TE",
        }
    }
}

/// In-plane wavevector and Matsubara frequency of one photon mode, 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub q: f64,
    pub xi: f64,
    pub q_perp: f64,
}

impl Mode {
    pub fn new(q: f64, xi: f64) -> Result<Self> {
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::Validation {
                field: "q",
                reason: format!("must be non-negative, got {q}"),
            });
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::Validation {
                field: "xi",
                reason: format!("must be non-negative, got {xi}"),
            });
        }
        Ok(Mode {
            q,
            xi,
            q_perp: q.hypot(xi),
        })
    }

    /// Build from `q_perp >= xi`.
    pub fn from_q_perp(q_perp: f64, xi: f64) -> Result<Self> {
        if !(q_perp >= xi) {
            return Err(Error::Validation {
                field: "q_perp",
                reason: format!("q_perp = {q_perp} must be >= xi = {xi}"),
            });
        }
        let q = ((q_perp - xi) * (q_perp + xi)).sqrt();
        Mode::new(q, xi).map(|m| Mode { q_perp, ..m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_tm: f64,
    pub r_te: f64,
}

impl ReflectionPair {
    pub const ZERO: ReflectionPair = ReflectionPair {
        r_tm: 0.0,
        r_te: 0.0,
    };
    pub const IDEAL: ReflectionPair = ReflectionPair {
        r_tm: 1.0,
        r_te: 1.0,
    };

    pub fn get(&self, polarization: Polarization) -> f64 {
        match polarization {
            Polarization::Tm => self.r_tm,
            Polarization::Te => self.r_te,
        }
    }
}

/// `eps(i omega) = 1 - Pi / xi^2`, with `Pi` in 1/m^2 and `xi = omega / c`.
pub fn dielectric_from_pi(pi: f64, xi: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    Ok(1.0 - pi / (xi * xi))
}

/// Sheet coefficients; `pi` in 1/m.
pub fn reflect_2d(mode: &Mode, pi: f64) -> Result<ReflectionPair> {
    if mode.xi == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    if !pi.is_finite() {
        return Err(Error::Domain(format!("non-finite sheet response {pi}")));
    }
    let (r_tm, r_te) = sheet(pi, mode.q_perp, mode.xi * mode.xi);
    Ok(ReflectionPair { r_tm, r_te })
}

/// Half-space coefficients; `pi` in 1/m^2.
pub fn reflect_3d(mode: &Mode, pi: f64) -> Result<ReflectionPair> {
    if mode.xi == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    if !pi.is_finite() || mode.q_perp * mode.q_perp - pi < 0.0 {
        return Err(Error::Domain(format!(
            "half-space response {pi} gives q_perp^2 - Pi < 0"
        )));
    }
    let (r_tm, r_te) = bulk(pi, mode.q_perp, mode.xi * mode.xi);
    Ok(ReflectionPair { r_tm, r_te })
}

#[inline]
pub(crate) fn sheet(pi: f64, q_perp: f64, xi2: f64) -> (f64, f64) {
    (pi / (pi - 2.0 * xi2 / q_perp), pi / (pi - 2.0 * q_perp))
}

#[inline]
pub(crate) fn bulk(pi: f64, q_perp: f64, xi2: f64) -> (f64, f64) {
    let k = (q_perp * q_perp - pi).sqrt();
    let s = k + q_perp;
    // k - q_perp = -pi / (k + q_perp), written without cancellation
    let te = -pi / (s * s);
    let eps = 1.0 - pi / xi2;
    let tm = (eps * q_perp - k) / (eps * q_perp + k);
    (tm, te)
}

#[inline]
pub(crate) fn evaluate(
    dimensionality: Dimensionality,
    pi: f64,
    q_perp: f64,
    xi2: f64,
) -> (f64, f64) {
    match dimensionality {
        Dimensionality::TwoD => sheet(pi, q_perp, xi2),
        Dimensionality::ThreeD => bulk(pi, q_perp, xi2),
    }
}

/// Reflection at the zero Matsubara frequency, from the analytic omega -> 0
/// limit of the finite-frequency formulas. `q` in 1/m.
///
/// TM reflects perfectly whenever the plate conducts at DC. TE vanishes for
/// a finite DC conductivity and stays finite for the plasma model.
pub fn zero_mode_reflection(response: &FrozenResponse, polarization: Polarization, q: f64) -> f64 {
    match polarization {
        Polarization::Tm => {
            if response.kind == ResponseKind::Plasma || response.dc_conductivity() != 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Polarization::Te => match response.kind {
            ResponseKind::Drude | ResponseKind::DrudeWl => 0.0,
            ResponseKind::Plasma => {
                let s = response.strength;
                match response.dimensionality {
                    Dimensionality::TwoD => s / (s + 2.0 * q),
                    Dimensionality::ThreeD => {
                        let k = (q * q + s).sqrt();
                        s / ((k + q) * (k + q))
                    }
                }
            }
        },
    }
}
