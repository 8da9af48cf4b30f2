//! Physical constants, unit conventions and derived electronic parameters.
//!
//! Everything is SI. Matsubara frequencies are carried in rad/s until they
//! reach the Lifshitz layer, where [`to_wavevector`] converts them to the
//! inverse-length form `xi = omega / c` used by the reflection formulas.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// CODATA 2018 SI constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// Free electron mass, kg.
    pub m0: f64,
    /// Vacuum permeability, H/m.
    pub mu0: f64,
}

pub const SI: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    e_charge: 1.602_176_634e-19,
    m0: 9.109_383_701_5e-31,
    mu0: 1.256_637_062_12e-6,
};

pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
pub const NANOMETER: f64 = 1e-9;
pub const GAUSS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimensionality {
    #[serde(rename = "2d")]
    TwoD,
    #[serde(rename = "3d")]
    ThreeD,
}

impl Dimensionality {
    pub fn as_str(self) -> &'static str {
        match self {
            Dimensionality::TwoD => "2d",
            Dimensionality::ThreeD => "3d",
        }
    }
}

/// User-facing material parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialInput {
    /// Fermi energy, eV.
    pub epsilon_f: f64,
    /// Effective mass in units of the free electron mass.
    pub mstar_ratio: f64,
    /// Elastic mean free path, nm.
    pub mfp: f64,
    pub dimensionality: Dimensionality,
}

impl MaterialInput {
    /// Gold Fermi energy and band mass with the given mean free path.
    pub fn gold(mfp_nm: f64, dimensionality: Dimensionality) -> Self {
        MaterialInput {
            epsilon_f: 5.53,
            mstar_ratio: 1.10,
            mfp: mfp_nm,
            dimensionality,
        }
    }
}

/// Electronic parameters derived from a [`MaterialInput`], all SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    /// Fermi energy, J.
    pub epsilon_f: f64,
    /// Effective mass, kg.
    pub m_star: f64,
    /// Fermi velocity, m/s.
    pub v_f: f64,
    /// Elastic scattering time, s.
    pub tau: f64,
    /// Diffusion constant, m^2/s.
    pub diffusion: f64,
    /// 2D density of states per spin, 1/(J m^2).
    pub dos_2d: f64,
    /// Sheet carrier density, 1/m^2.
    pub n_2d: f64,
    /// Bulk carrier density, 1/m^3.
    pub n_3d: f64,
    /// Elastic mean free path, m.
    pub mfp: f64,
    pub dimensionality: Dimensionality,
}

/// Derive SI electronic parameters from eV / nm / mass-ratio inputs.
///
/// The carrier densities follow the free-electron closures
/// `n_2d = 2 nu eps_F` and `n_3d = (2 m* eps_F / hbar^2)^{3/2} / (3 pi^2)`.
pub fn derive_material(input: &MaterialInput) -> Result<MaterialSpec> {
    let eps_ev = positive("epsilon_f", input.epsilon_f)?;
    let ratio = positive("mstar_ratio", input.mstar_ratio)?;
    let mfp_nm = positive("mfp", input.mfp)?;

    let epsilon_f = eps_ev * ELECTRON_VOLT;
    let m_star = ratio * SI.m0;
    let mfp = mfp_nm * NANOMETER;
    Ok(MaterialSpec::from_si(
        epsilon_f,
        m_star,
        mfp,
        input.dimensionality,
    ))
}

impl MaterialSpec {
    /// Build from SI primaries. Inputs are assumed positive.
    pub fn from_si(epsilon_f: f64, m_star: f64, mfp: f64, dimensionality: Dimensionality) -> Self {
        let hbar = SI.hbar;
        let v_f = (2.0 * epsilon_f / m_star).sqrt();
        let tau = mfp / v_f;
        let diffusion = match dimensionality {
            Dimensionality::TwoD => v_f * v_f * tau / 2.0,
            Dimensionality::ThreeD => v_f * v_f * tau / 3.0,
        };
        let dos_2d = m_star / (2.0 * PI * hbar * hbar);
        let n_2d = 2.0 * dos_2d * epsilon_f;
        let n_3d = (2.0 * m_star * epsilon_f / (hbar * hbar)).powf(1.5) / (3.0 * PI * PI);
        MaterialSpec {
            epsilon_f,
            m_star,
            v_f,
            tau,
            diffusion,
            dos_2d,
            n_2d,
            n_3d,
            mfp,
            dimensionality,
        }
    }

    /// Same material with a different elastic scattering time (mean free
    /// path rescaled at fixed Fermi velocity).
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        let tau = positive("tau", tau)?;
        Ok(Self::from_si(
            self.epsilon_f,
            self.m_star,
            tau * self.v_f,
            self.dimensionality,
        ))
    }

    pub fn with_dimensionality(&self, dimensionality: Dimensionality) -> Self {
        Self::from_si(self.epsilon_f, self.m_star, self.mfp, dimensionality)
    }

    /// Carrier density matching the dimensionality: 1/m^2 in 2D, 1/m^3 in 3D.
    pub fn carrier_density(&self) -> f64 {
        match self.dimensionality {
            Dimensionality::TwoD => self.n_2d,
            Dimensionality::ThreeD => self.n_3d,
        }
    }

    /// Plasma response magnitude `mu0 n e^2 / m*` in inverse-length form:
    /// 1/m for a sheet, 1/m^2 (= omega_p^2 / c^2) for bulk.
    pub fn plasma_strength(&self) -> f64 {
        SI.mu0 * self.carrier_density() * SI.e_charge * SI.e_charge / self.m_star
    }

    /// Disorder parameter `hbar / (eps_F tau)`.
    pub fn disorder_parameter(&self) -> f64 {
        SI.hbar / (self.epsilon_f * self.tau)
    }
}

/// Bosonic Matsubara frequency `2 pi n k_B T / hbar`, rad/s.
pub fn matsubara_frequency(n: u64, temperature: f64) -> Result<f64> {
    let t = positive("temperature", temperature)?;
    Ok(matsubara_unchecked(n, t))
}

#[inline]
pub(crate) fn matsubara_unchecked(n: u64, temperature: f64) -> f64 {
    2.0 * PI * n as f64 * SI.k_b * temperature / SI.hbar
}

/// Angular frequency to inverse length, `omega / c`.
#[inline]
pub fn to_wavevector(omega: f64) -> f64 {
    omega / SI.c
}

pub(crate) fn validate_temperature(temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::Validation {
            field: "temperature",
            reason: format!("must be positive, got {temperature}"),
        });
    }
    Ok(temperature)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gold2d() -> MaterialSpec {
        derive_material(&MaterialInput::gold(15.0, Dimensionality::TwoD)).unwrap()
    }

    #[test]
    fn gold_parameters_stored() {
        let m = gold2d();
        assert_relative_eq!(m.epsilon_f, 5.53 * ELECTRON_VOLT, max_relative = 1e-15);
        assert_relative_eq!(m.m_star, 1.10 * SI.m0, max_relative = 1e-15);
        assert_relative_eq!(m.mfp, 15e-9, max_relative = 1e-15);
    }

    #[test]
    fn gold_derived_values() {
        // v_F = sqrt(2 eps_F / m*), tau = l / v_F, D = v_F^2 tau / 2 by hand:
        // 2 * 8.8600e-19 J / 1.00203e-30 kg -> 1.3298e6 m/s.
        let m = gold2d();
        assert_relative_eq!(m.v_f, 1.33e6, max_relative = 5e-3);
        assert_relative_eq!(m.tau, 1.13e-14, max_relative = 5e-3);
        assert_relative_eq!(m.diffusion, 1.0e-2, max_relative = 5e-3);
    }

    #[test]
    fn mfp_linearity() {
        let a = gold2d();
        let b = derive_material(&MaterialInput::gold(30.0, Dimensionality::TwoD)).unwrap();
        assert_relative_eq!(b.tau, 2.0 * a.tau, max_relative = 1e-14);
        assert_relative_eq!(b.diffusion, 2.0 * a.diffusion, max_relative = 1e-14);
        assert_eq!(b.v_f, a.v_f);
    }

    #[test]
    fn recomputation_round_trip() {
        for dim in [Dimensionality::TwoD, Dimensionality::ThreeD] {
            let m = derive_material(&MaterialInput::gold(15.0, dim)).unwrap();
            let hbar = SI.hbar;
            let v_f = (2.0 * m.epsilon_f / m.m_star).sqrt();
            assert_relative_eq!(m.v_f, v_f, max_relative = 1e-12);
            assert_relative_eq!(m.tau, m.mfp / v_f, max_relative = 1e-12);
            let dos = m.m_star / (2.0 * PI * hbar * hbar);
            assert_relative_eq!(m.dos_2d, dos, max_relative = 1e-12);
            assert_relative_eq!(m.n_2d, 2.0 * dos * m.epsilon_f, max_relative = 1e-12);
            let kf = (2.0 * m.m_star * m.epsilon_f).sqrt() / hbar;
            assert_relative_eq!(m.n_3d, kf.powi(3) / (3.0 * PI * PI), max_relative = 1e-12);
        }
        let m = gold2d();
        assert_relative_eq!(
            m.diffusion,
            m.v_f * m.v_f * m.tau / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_non_positive_inputs() {
        let mut input = MaterialInput::gold(15.0, Dimensionality::TwoD);
        input.mstar_ratio = 0.0;
        match derive_material(&input) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "mstar_ratio"),
            other => panic!("unexpected {other:?}"),
        }
        input = MaterialInput::gold(-1.0, Dimensionality::TwoD);
        assert!(matches!(
            derive_material(&input),
            Err(Error::Validation { field: "mfp", .. })
        ));
        input = MaterialInput::gold(15.0, Dimensionality::TwoD);
        input.epsilon_f = f64::NAN;
        assert!(matches!(
            derive_material(&input),
            Err(Error::Validation {
                field: "epsilon_f",
                ..
            })
        ));
    }

    #[test]
    fn matsubara_values() {
        assert_eq!(matsubara_frequency(0, 3.0).unwrap(), 0.0);
        // 2 pi k_B (1 K) / hbar = 8.2255e11 rad/s
        let w1 = matsubara_frequency(1, 1.0).unwrap();
        assert_relative_eq!(w1, 8.2255e11, max_relative = 1e-4);
        assert_relative_eq!(
            matsubara_frequency(2, 1.0).unwrap(),
            2.0 * w1,
            max_relative = 1e-15
        );
        assert!(matsubara_frequency(1, 0.0).is_err());
        assert!(matsubara_frequency(1, -2.0).is_err());
    }

    #[test]
    fn wavevector_conversion() {
        assert_eq!(to_wavevector(0.0), 0.0);
        assert_relative_eq!(to_wavevector(3e8), 1.000_692_286, max_relative = 1e-9);
        assert_eq!(to_wavevector(SI.c), 1.0);
    }
}
