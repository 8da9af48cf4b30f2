//! Lifshitz energy and pressure between a bulk plate and a sheet.
//!
//! Each Matsubara term is integrated in `y = 2 q_perp a` over
//! `[2 xi_n a, 2 xi_n a + Y_SPAN]`, where the integrand has decayed below
//! `e^{-Y_SPAN}` of its starting value. Energy and pressure share the same
//! quadrature; the pressure integrand is the analytic `a`-derivative.
//!
//! The Matsubara sum stops once three consecutive terms, and the
//! ideal-conductor bound on those terms, fall below `matsubara_rel_tol` of
//! the running sum. The bound matters for the weak-localization sheet, whose
//! response changes sign at high frequency so that its terms cross zero.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{positive, Error, Result};
use crate::matsubara::{sum_matsubara_bounded, SumOutcome, Term, Truncation};
use crate::quadrature::{integrate, QuadOptions};
use crate::quantities::{matsubara_unchecked, to_wavevector, Dimensionality, MaterialSpec, SI};
use crate::reflection::{evaluate, zero_mode_reflection, Polarization};
use crate::response::{FrozenResponse, ResponseKind, ResponseModel};
use crate::special::polylog_small;

/// Lowest accepted temperature, K. The dephasing time diverges as T -> 0.
pub const MIN_TEMPERATURE: f64 = 0.01;

const Y_SPAN: f64 = 45.0;
const PANEL_EDGES: [f64; 6] = [0.0, 1.0, 3.0, 7.0, 15.0, Y_SPAN];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plate {
    /// Perfect reflector in both polarizations at every frequency.
    Ideal,
    Response(ResponseModel),
}

impl Plate {
    pub fn dimensionality(&self) -> Option<Dimensionality> {
        match self {
            Plate::Ideal => None,
            Plate::Response(m) => Some(m.dimensionality()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Plate::Ideal => "ideal",
            Plate::Response(m) => m.kind.as_str(),
        }
    }

    fn freeze(&self, temperature: f64, field: f64) -> Result<FrozenPlate> {
        Ok(match self {
            Plate::Ideal => FrozenPlate::Ideal,
            Plate::Response(m) => FrozenPlate::Finite(m.at_conditions(temperature, field)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericsConfig {
    pub quad_rel_tol: f64,
    pub matsubara_rel_tol: f64,
    pub max_matsubara: usize,
    pub quad_max_subdivisions: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            quad_rel_tol: 1e-9,
            matsubara_rel_tol: 1e-9,
            max_matsubara: 10_000_000,
            quad_max_subdivisions: 200,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, tol) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("matsubara_rel_tol", self.matsubara_rel_tol),
        ] {
            if !(tol > 0.0 && tol <= 1e-2) {
                return Err(Error::Validation {
                    field,
                    reason: format!("must lie in (0, 1e-2], got {tol}"),
                });
            }
        }
        if self.max_matsubara < 10 {
            return Err(Error::Validation {
                field: "max_matsubara",
                reason: format!("must be at least 10, got {}", self.max_matsubara),
            });
        }
        if self.quad_max_subdivisions == 0 {
            return Err(Error::Validation {
                field: "quad_max_subdivisions",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    fn quad_options(&self) -> QuadOptions {
        QuadOptions {
            rel_tol: self.quad_rel_tol,
            abs_tol: 0.0,
            max_subdivisions: self.quad_max_subdivisions,
        }
    }
}

/// One pressure evaluation: a bulk plate facing a sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifshitzJob {
    /// Plate separation, m.
    pub separation: f64,
    /// K.
    pub temperature: f64,
    /// Applied perpendicular field, T.
    pub field: f64,
    pub plate1: Plate,
    pub plate2: Plate,
    pub numerics: NumericsConfig,
}

impl LifshitzJob {
    pub fn new(
        separation: f64,
        temperature: f64,
        field: f64,
        plate1: Plate,
        plate2: Plate,
    ) -> Result<Self> {
        let job = LifshitzJob {
            separation,
            temperature,
            field,
            plate1,
            plate2,
            numerics: NumericsConfig::default(),
        };
        job.validate()?;
        Ok(job)
    }

    pub fn with_numerics(mut self, numerics: NumericsConfig) -> Result<Self> {
        numerics.validate()?;
        self.numerics = numerics;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("separation", self.separation)?;
        if !(self.temperature.is_finite() && self.temperature >= MIN_TEMPERATURE) {
            return Err(Error::Validation {
                field: "temperature",
                reason: format!(
                    "must be at least {MIN_TEMPERATURE} K, got {}",
                    self.temperature
                ),
            });
        }
        if !(self.field.is_finite() && self.field >= 0.0) {
            return Err(Error::Validation {
                field: "field",
                reason: format!("must be non-negative, got {}", self.field),
            });
        }
        if self.plate1.dimensionality() == Some(Dimensionality::TwoD) {
            return Err(Error::Validation {
                field: "plate1",
                reason: "plate 1 is the bulk (3d) plate".into(),
            });
        }
        if self.plate2.dimensionality() == Some(Dimensionality::ThreeD) {
            return Err(Error::Validation {
                field: "plate2",
                reason: "plate 2 is the sheet (2d) plate".into(),
            });
        }
        self.numerics.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureResult {
    /// Pa; negative means attraction.
    pub pressure: f64,
    /// J/m^2.
    pub energy_per_area: f64,
    /// `pressure / ideal_pressure(a)`.
    pub normalized: f64,
    pub n_terms_used: usize,
    /// Accumulated quadrature error relative to |pressure|.
    pub quad_error_est: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
enum FrozenPlate {
    Ideal,
    Finite(FrozenResponse),
}

#[derive(Debug, Clone, Copy)]
enum PlateAt {
    Ideal,
    Zero(FrozenResponse),
    Finite {
        dimensionality: Dimensionality,
        pi: f64,
    },
}

impl FrozenPlate {
    fn at(&self, n: usize, omega: f64) -> PlateAt {
        match self {
            FrozenPlate::Ideal => PlateAt::Ideal,
            FrozenPlate::Finite(r) if n == 0 => PlateAt::Zero(*r),
            FrozenPlate::Finite(r) => PlateAt::Finite {
                dimensionality: r.dimensionality,
                pi: r.pi(omega),
            },
        }
    }
}

impl PlateAt {
    #[inline]
    fn reflect(&self, q_perp: f64, xi2: f64) -> (f64, f64) {
        match *self {
            PlateAt::Ideal => (1.0, 1.0),
            PlateAt::Zero(ref r) => (
                zero_mode_reflection(r, Polarization::Tm, q_perp),
                zero_mode_reflection(r, Polarization::Te, q_perp),
            ),
            PlateAt::Finite { dimensionality, pi } => evaluate(dimensionality, pi, q_perp, xi2),
        }
    }
}

/// The two y-integrals of one Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIntegrals {
    /// `int y sum_X ln(1 - rho_X e^{-y}) dy`.
    pub log_integral: f64,
    /// `int y^2 sum_X rho_X e^{-y} / (1 - rho_X e^{-y}) dy`.
    pub force_integral: f64,
    pub abs_error: [f64; 2],
    pub converged: bool,
}

fn integrate_modes<F>(
    products: F,
    a: f64,
    y0: f64,
    quad: &QuadOptions,
) -> std::result::Result<ModeIntegrals, (f64, f64)>
where
    F: Fn(f64) -> (f64, f64),
{
    let broken: Cell<Option<(f64, f64)>> = Cell::new(None);
    let integrand = |y: f64| {
        let q_perp = y / (2.0 * a);
        let (rho_tm, rho_te) = products(q_perp);
        let decay = (-y).exp();
        let mut log_sum = 0.0;
        let mut force_sum = 0.0;
        for rho in [rho_tm, rho_te] {
            let x = rho * decay;
            if !(x < 1.0) {
                broken.set(Some((q_perp, 1.0 - x)));
                continue;
            }
            log_sum += (-x).ln_1p();
            force_sum += x / (1.0 - x);
        }
        [y * log_sum, y * y * force_sum]
    };
    let r = integrate(integrand, &PANEL_EDGES.map(|e| y0 + e), quad);
    if let Some(bad) = broken.get() {
        return Err(bad);
    }
    Ok(ModeIntegrals {
        log_integral: r.value[0],
        force_integral: r.value[1],
        abs_error: r.abs_error,
        converged: r.converged,
    })
}

/// Mode integrals from `y0 = 2 xi a` with reflection products supplied as a
/// function of `q_perp` (1/m). The integration layout is the one used by
/// [`casimir_pressure`].
pub fn mode_integrals<F>(
    products: F,
    separation: f64,
    y0: f64,
    numerics: &NumericsConfig,
) -> Result<ModeIntegrals>
where
    F: Fn(f64) -> (f64, f64),
{
    positive("separation", separation)?;
    numerics.validate()?;
    integrate_modes(products, separation, y0, &numerics.quad_options()).map_err(
        |(q_perp, value)| Error::LogArgument {
            n: 0,
            q_perp,
            value,
        },
    )
}

struct Prepared {
    a: f64,
    temperature: f64,
    p1: FrozenPlate,
    p2: FrozenPlate,
    quad: QuadOptions,
}

impl Prepared {
    fn new(job: &LifshitzJob) -> Result<Self> {
        job.validate()?;
        Ok(Prepared {
            a: job.separation,
            temperature: job.temperature,
            p1: job.plate1.freeze(job.temperature, job.field)?,
            p2: job.plate2.freeze(job.temperature, job.field)?,
            quad: job.numerics.quad_options(),
        })
    }

    fn plates_at(&self, n: usize) -> (PlateAt, PlateAt, f64) {
        let omega = matsubara_unchecked(n as u64, self.temperature);
        let xi = to_wavevector(omega);
        (self.p1.at(n, omega), self.p2.at(n, omega), xi)
    }

    /// Energy and pressure contributions of Matsubara index `n` (unweighted).
    fn term(&self, n: usize) -> Result<Term<2>> {
        let a = self.a;
        let (p1, p2, xi) = self.plates_at(n);
        let xi2 = xi * xi;
        let products = |q_perp: f64| {
            let (tm1, te1) = p1.reflect(q_perp, xi2);
            let (tm2, te2) = p2.reflect(q_perp, xi2);
            (tm1 * tm2, te1 * te2)
        };
        let m = integrate_modes(products, a, 2.0 * xi * a, &self.quad)
            .map_err(|(q_perp, value)| Error::LogArgument { n, q_perp, value })?;
        let kt = SI.k_b * self.temperature;
        let energy_scale = kt / (8.0 * PI * a * a);
        let pressure_scale = -kt / (8.0 * PI * a * a * a);
        Ok(Term {
            value: [
                energy_scale * m.log_integral,
                pressure_scale * m.force_integral,
            ],
            abs_error: [
                energy_scale * m.abs_error[0],
                pressure_scale.abs() * m.abs_error[1],
            ],
        })
    }

    /// Magnitude of the ideal-plate term at `n`, which bounds the term of
    /// any passive pair (`|rho| <= 1`). Unbounded below `y0 = 2`, where the
    /// series form is not used.
    fn envelope(&self, n: usize) -> [f64; 2] {
        let a = self.a;
        let xi = to_wavevector(matsubara_unchecked(n as u64, self.temperature));
        let y0 = 2.0 * xi * a;
        if y0 < 2.0 {
            return [f64::INFINITY; 2];
        }
        let z = (-y0).exp();
        let (li1, li2, li3) = (
            polylog_small(1, z),
            polylog_small(2, z),
            polylog_small(3, z),
        );
        let kt = SI.k_b * self.temperature;
        [
            2.0 * kt / (8.0 * PI * a * a) * (y0 * li2 + li3),
            2.0 * kt / (8.0 * PI * a * a * a) * (y0 * y0 * li1 + 2.0 * y0 * li2 + 2.0 * li3),
        ]
    }

    fn sum(&self, truncation: Truncation) -> Result<SumOutcome<2>> {
        sum_matsubara_bounded(|n| self.term(n), |n| self.envelope(n), truncation)
    }
}

/// Per-polarization log factors `[ln(1 - rTM rTM e^{-2 q_perp a}), ln(1 - rTE rTE e^{-2 q_perp a})]`
/// at Matsubara index `n` and in-plane wavevector `q` (1/m).
pub fn mode_log_terms(job: &LifshitzJob, n: usize, q: f64) -> Result<[f64; 2]> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::Validation {
            field: "q",
            reason: format!("must be non-negative, got {q}"),
        });
    }
    let prepared = Prepared::new(job)?;
    let (p1, p2, xi) = prepared.plates_at(n);
    let q_perp = (q * q + xi * xi).sqrt();
    let (tm1, te1) = p1.reflect(q_perp, xi * xi);
    let (tm2, te2) = p2.reflect(q_perp, xi * xi);
    let decay = (-2.0 * q_perp * job.separation).exp();
    let mut out = [0.0; 2];
    for (slot, rho) in out.iter_mut().zip([tm1 * tm2, te1 * te2]) {
        let x = rho * decay;
        if !(x < 1.0) {
            return Err(Error::LogArgument {
                n,
                q_perp,
                value: 1.0 - x,
            });
        }
        *slot = (-x).ln_1p();
    }
    Ok(out)
}

/// Sum of both polarization log factors. The energy per area is
/// `k_B T sum'_n int_0^inf q dq / (2 pi) * mode_integrand(n, q)`.
pub fn mode_integrand(job: &LifshitzJob, n: usize, q: f64) -> Result<f64> {
    let [tm, te] = mode_log_terms(job, n, q)?;
    Ok(tm + te)
}

fn finish(job: &LifshitzJob, outcome: SumOutcome<2>) -> Result<PressureResult> {
    if !outcome.converged {
        return Err(Error::NotConverged {
            n_terms: outcome.n_terms,
            partial_pressure: outcome.sum[1],
            partial_energy: outcome.sum[0],
            tail_estimate: outcome.tail[1],
        });
    }
    let pressure = outcome.sum[1];
    Ok(PressureResult {
        pressure,
        energy_per_area: outcome.sum[0],
        normalized: pressure / ideal_pressure(job.separation),
        n_terms_used: outcome.n_terms,
        quad_error_est: if pressure == 0.0 {
            0.0
        } else {
            outcome.abs_error[1] / pressure.abs()
        },
        converged: true,
    })
}

/// Casimir energy per unit area, J/m^2.
pub fn casimir_energy(job: &LifshitzJob) -> Result<f64> {
    Ok(casimir_pressure(job)?.energy_per_area)
}

/// Casimir pressure with adaptive Matsubara truncation.
pub fn casimir_pressure(job: &LifshitzJob) -> Result<PressureResult> {
    let prepared = Prepared::new(job)?;
    let outcome = prepared.sum(Truncation::Adaptive {
        rel_tol: job.numerics.matsubara_rel_tol,
        max_terms: job.numerics.max_matsubara,
    })?;
    finish(job, outcome)
}

/// Casimir pressure from exactly `n_terms` Matsubara terms, no tail.
pub fn casimir_pressure_fixed_terms(job: &LifshitzJob, n_terms: usize) -> Result<PressureResult> {
    let prepared = Prepared::new(job)?;
    let outcome = prepared.sum(Truncation::Fixed(n_terms))?;
    finish(job, outcome)
}

/// Ideal-conductor pressure `-hbar c pi^2 / (240 a^4)`, Pa.
pub fn ideal_pressure(separation: f64) -> f64 {
    -SI.hbar * SI.c * PI.powi(2) / (240.0 * separation.powi(4))
}

/// Ideal-conductor energy per area `-hbar c pi^2 / (720 a^3)`, J/m^2.
pub fn ideal_energy(separation: f64) -> f64 {
    -SI.hbar * SI.c * PI.powi(2) / (720.0 * separation.powi(3))
}

/// Pressures of the plasma, Drude and Drude+WL pairs at zero field, and the
/// derived suppression figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuppressionMetrics {
    pub plasma: PressureResult,
    pub drude: PressureResult,
    pub drude_wl: PressureResult,
    /// `P_Drude - P_WL`.
    pub numerator: f64,
    /// `P_plasma - P_Drude`.
    pub denominator: f64,
    pub ratio: f64,
    /// `1 - P_WL / P_Drude`.
    pub wl_suppression: f64,
}

/// Evaluate the three model pairs for a bulk plate `bulk` and a sheet
/// `sheet`. The bulk plate is Drude in the Drude and Drude+WL pairs.
pub fn suppression_metrics(
    bulk: &MaterialSpec,
    sheet: &MaterialSpec,
    temperature: f64,
    separation: f64,
    numerics: NumericsConfig,
) -> Result<SuppressionMetrics> {
    let job = |k1, k2| -> Result<LifshitzJob> {
        LifshitzJob::new(
            separation,
            temperature,
            0.0,
            Plate::Response(ResponseModel::new(k1, *bulk)?),
            Plate::Response(ResponseModel::new(k2, *sheet)?),
        )?
        .with_numerics(numerics)
    };
    let plasma_job = job(ResponseKind::Plasma, ResponseKind::Plasma)?;
    let drude_job = job(ResponseKind::Drude, ResponseKind::Drude)?;
    let wl_job = job(ResponseKind::Drude, ResponseKind::DrudeWl)?;
    let (plasma, (drude, drude_wl)) = rayon::join(
        || casimir_pressure(&plasma_job),
        || {
            rayon::join(
                || casimir_pressure(&drude_job),
                || casimir_pressure(&wl_job),
            )
        },
    );
    let (plasma, drude, drude_wl) = (plasma?, drude?, drude_wl?);
    let numerator = drude.pressure - drude_wl.pressure;
    let denominator = plasma.pressure - drude.pressure;
    Ok(SuppressionMetrics {
        plasma,
        drude,
        drude_wl,
        numerator,
        denominator,
        ratio: numerator / denominator,
        wl_suppression: 1.0 - drude_wl.pressure / drude.pressure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{derive_material, MaterialInput};
    use approx::assert_relative_eq;

    const A: f64 = 250e-9;

    fn gold(dim: Dimensionality) -> MaterialSpec {
        derive_material(&MaterialInput::gold(15.0, dim)).unwrap()
    }

    fn pair(k1: ResponseKind, k2: ResponseKind, t: f64) -> LifshitzJob {
        LifshitzJob::new(
            A,
            t,
            0.0,
            Plate::Response(ResponseModel::new(k1, gold(Dimensionality::ThreeD)).unwrap()),
            Plate::Response(ResponseModel::new(k2, gold(Dimensionality::TwoD)).unwrap()),
        )
        .unwrap()
    }

    fn ideal_job(t: f64) -> LifshitzJob {
        LifshitzJob::new(A, t, 0.0, Plate::Ideal, Plate::Ideal).unwrap()
    }

    #[test]
    fn ideal_pressure_closed_form() {
        assert_relative_eq!(ideal_pressure(250e-9), -0.3330, max_relative = 1e-3);
        assert_relative_eq!(
            ideal_pressure(500e-9),
            ideal_pressure(250e-9) / 16.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(ideal_pressure(1e-6), -1.30e-3, max_relative = 3e-3);
    }

    #[test]
    fn ideal_mode_integrand_substitution() {
        let job = ideal_job(1.0);
        let [tm, te] = mode_log_terms(&job, 0, 1.0 / (2.0 * A)).unwrap();
        let want = (1.0 - (-1.0f64).exp()).ln();
        assert_relative_eq!(tm, want, max_relative = 1e-14);
        assert_relative_eq!(te, want, max_relative = 1e-14);
    }

    #[test]
    fn mode_integrand_decays() {
        for n in [0, 1, 10] {
            let job = pair(ResponseKind::Drude, ResponseKind::DrudeWl, 0.1);
            let near = mode_integrand(&job, n, 1.0 / A).unwrap();
            let far = mode_integrand(&job, n, 20.0 / A).unwrap();
            assert!(near < 0.0 && far <= 0.0);
            assert!(far.abs() < 1e-15 * near.abs(), "n = {n}: {far} vs {near}");
        }
    }

    #[test]
    fn rejects_bad_jobs() {
        assert!(matches!(
            LifshitzJob::new(A, 0.005, 0.0, Plate::Ideal, Plate::Ideal),
            Err(Error::Validation {
                field: "temperature",
                ..
            })
        ));
        assert!(matches!(
            LifshitzJob::new(-A, 1.0, 0.0, Plate::Ideal, Plate::Ideal),
            Err(Error::Validation {
                field: "separation",
                ..
            })
        ));
        assert!(matches!(
            LifshitzJob::new(A, 1.0, -1.0, Plate::Ideal, Plate::Ideal),
            Err(Error::Validation { field: "field", .. })
        ));
        let sheet = ResponseModel::new(ResponseKind::Drude, gold(Dimensionality::TwoD)).unwrap();
        assert!(LifshitzJob::new(A, 1.0, 0.0, Plate::Response(sheet), Plate::Ideal).is_err());
        let job = ideal_job(1.0);
        let bad = NumericsConfig {
            quad_rel_tol: 0.5,
            ..Default::default()
        };
        assert!(job.with_numerics(bad).is_err());
    }

    #[test]
    fn ideal_plates_at_room_scale_temperature() {
        // At 3 K the thermal correction at 250 nm is far below 1e-4.
        let r = casimir_pressure(&ideal_job(3.0)).unwrap();
        assert_relative_eq!(r.normalized, 1.0, max_relative = 1e-4);
        assert_relative_eq!(r.energy_per_area, ideal_energy(A), max_relative = 1e-4);
    }

    #[test]
    fn model_ordering() {
        let t = 1.0;
        let plasma =
            casimir_pressure(&pair(ResponseKind::Plasma, ResponseKind::Plasma, t)).unwrap();
        let drude = casimir_pressure(&pair(ResponseKind::Drude, ResponseKind::Drude, t)).unwrap();
        let wl = casimir_pressure(&pair(ResponseKind::Drude, ResponseKind::DrudeWl, t)).unwrap();
        assert!(0.0 < wl.normalized);
        assert!(wl.normalized < drude.normalized);
        assert!(drude.normalized < plasma.normalized);
        assert!(plasma.normalized < 1.0);
    }

    #[test]
    fn fixed_terms_approach_adaptive() {
        let job = pair(ResponseKind::Plasma, ResponseKind::Plasma, 3.0);
        let full = casimir_pressure(&job).unwrap();
        let fixed = casimir_pressure_fixed_terms(&job, full.n_terms_used).unwrap();
        // the only difference is the geometric tail estimate
        assert!(fixed.pressure.abs() < full.pressure.abs());
        assert_relative_eq!(fixed.pressure, full.pressure, max_relative = 1e-6);
    }
}
