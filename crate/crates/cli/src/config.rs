//! Run configuration: TOML text with dotted section keys.
//!
//! ```toml
//! plate1.model = "drude"
//! plate2.model = "drude_wl"
//! geometry.separation_nm = 250
//! conditions.temperature_k = 0.1
//! sweep.variable = "field"
//! sweep.min = 0
//! sweep.max = 100
//! sweep.count = 60
//! ```
//!
//! Every key other than the two plate models and the separation has a
//! default; see the README for the full list.

use casimir_core::{
    derive_material, Correlation, Dimensionality, FluctuationKernel, LifshitzJob, MaterialInput,
    MaterialSpec, NumericsConfig, Plate, ResponseKind, ResponseModel, ScalingConstants,
    DEFAULT_KAPPA, DEFAULT_TEMPERATURE, GAUSS, MIN_TEMPERATURE, NANOMETER,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("`{key}`: {reason}")]
    Range { key: String, reason: String },
    #[error("unknown key `{key}`{}", location(*.line))]
    UnknownKey { key: String, line: Option<usize> },
}

fn location(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

fn range(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Range {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlateModel {
    Ideal,
    Plasma,
    Drude,
    DrudeWl,
}

impl PlateModel {
    fn kind(self) -> Option<ResponseKind> {
        match self {
            PlateModel::Ideal => None,
            PlateModel::Plasma => Some(ResponseKind::Plasma),
            PlateModel::Drude => Some(ResponseKind::Drude),
            PlateModel::DrudeWl => Some(ResponseKind::DrudeWl),
        }
    }
}

fn gold_epsilon_f() -> f64 {
    5.53
}
fn gold_mstar() -> f64 {
    1.10
}
fn default_mfp() -> f64 {
    15.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateConfig {
    pub model: PlateModel,
    /// Fermi energy, eV.
    #[serde(default = "gold_epsilon_f")]
    pub epsilon_f_ev: f64,
    #[serde(default = "gold_mstar")]
    pub mstar_ratio: f64,
    /// Elastic mean free path, nm.
    #[serde(default = "default_mfp")]
    pub mfp_nm: f64,
    /// Defaults to 3d for plate 1 and 2d for plate 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensionality: Option<Dimensionality>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Geometry {
    /// Plate separation, nm. Required.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_nm: Option<f64>,
}

fn default_temperature() -> f64 {
    0.1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default)]
    pub field_gauss: f64,
}

impl Default for Conditions {
    fn default() -> Self {
        Conditions {
            temperature_k: default_temperature(),
            field_gauss: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Gauss.
    Field,
    /// Kelvin.
    Temperature,
    /// Nanometres.
    Separation,
    /// Mean free path of the disordered plate, nm (fluctuations only).
    Mfp,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::Field => "field",
            SweepVariable::Temperature => "temperature",
            SweepVariable::Separation => "separation",
            SweepVariable::Mfp => "mfp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// Repeat a field sweep at each of these temperatures (K).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub temperatures_k: Vec<f64>,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.max;
                }
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericsSection {
    pub quad_rel_tol: f64,
    pub matsubara_rel_tol: f64,
    pub max_matsubara: usize,
    pub quad_max_subdivisions: usize,
}

impl Default for NumericsSection {
    fn default() -> Self {
        let d = NumericsConfig::default();
        NumericsSection {
            quad_rel_tol: d.quad_rel_tol,
            matsubara_rel_tol: d.matsubara_rel_tol,
            max_matsubara: d.max_matsubara,
            quad_max_subdivisions: d.quad_max_subdivisions,
        }
    }
}

impl NumericsSection {
    pub fn to_core(self) -> NumericsConfig {
        NumericsConfig {
            quad_rel_tol: self.quad_rel_tol,
            matsubara_rel_tol: self.matsubara_rel_tol,
            max_matsubara: self.max_matsubara,
            quad_max_subdivisions: self.quad_max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationForm {
    #[default]
    Separable,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FluctuationSection {
    /// Kernel amplitude.
    pub kappa: f64,
    /// 2 without field, 1 with the cooperon channel suppressed.
    pub cooperon_factor: f64,
    pub correlation: CorrelationForm,
    /// Frequency cutoff of the exponential correlation, rad/s.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation_cutoff_rad_s: Option<f64>,
    pub temperature_k: f64,
    /// Constants used for the closed-form width-to-gap prediction.
    pub c1: f64,
    pub c2: f64,
    /// Samples per Gaussian curve.
    pub curve_points: usize,
    /// Half-width of each sampled curve in units of W.
    pub curve_span: f64,
}

impl Default for FluctuationSection {
    fn default() -> Self {
        FluctuationSection {
            kappa: DEFAULT_KAPPA,
            cooperon_factor: 2.0,
            correlation: CorrelationForm::Separable,
            correlation_cutoff_rad_s: None,
            temperature_k: DEFAULT_TEMPERATURE,
            c1: 0.096,
            c2: 0.038,
            curve_points: 101,
            curve_span: 4.0,
        }
    }
}

impl FluctuationSection {
    pub fn kernel(&self) -> FluctuationKernel {
        FluctuationKernel {
            amplitude: self.kappa,
            cooperon_factor: self.cooperon_factor,
            correlation: match self.correlation {
                CorrelationForm::Separable => Correlation::Separable,
                CorrelationForm::Exponential => Correlation::Exponential {
                    cutoff: self.correlation_cutoff_rad_s.unwrap_or(f64::NAN),
                },
            },
        }
    }

    pub fn constants(&self) -> ScalingConstants {
        ScalingConstants {
            c1: self.c1,
            c2: self.c2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Defaults to json for `pressure` and `fluctuations`, csv otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub plate1: PlateConfig,
    pub plate2: PlateConfig,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub conditions: Conditions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub fluctuations: FluctuationSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Parse and validate configuration text. Unknown keys are errors when
/// `strict` is set; otherwise they are returned for the caller to report.
pub fn parse_config(
    text: &str,
    strict: bool,
) -> Result<(RunConfig, Vec<ConfigError>), ConfigError> {
    let mut unknown = Vec::new();
    let de = toml::Deserializer::new(text);
    let config: RunConfig = serde_ignored::deserialize(de, |path| unknown.push(path.to_string()))
        .map_err(|e| parse_error(text, e))?;
    let mut unknown: Vec<ConfigError> = unknown
        .into_iter()
        .map(|key| ConfigError::UnknownKey {
            line: find_key(text, &key),
            key,
        })
        .collect();
    if strict && !unknown.is_empty() {
        return Err(unknown.remove(0));
    }
    config.validate()?;
    Ok((config, unknown))
}

fn parse_error(text: &str, e: toml::de::Error) -> ConfigError {
    let (line, column) = match e.span() {
        Some(span) => line_column(text, span.start),
        None => (1, 1),
    };
    ConfigError::Parse {
        line,
        column,
        message: e.message().to_string(),
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Best-effort line of a dotted key, written either in full or as the last
/// segment inside a `[section]` table.
fn find_key(text: &str, key: &str) -> Option<usize> {
    let last = key.rsplit('.').next()?;
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            let head = l.split('=').next().unwrap_or("").trim();
            l.contains('=') && (head == key || head == last)
        })
        .map(|i| i + 1)
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, plate) in [("plate1", &self.plate1), ("plate2", &self.plate2)] {
            for (field, value) in [
                ("epsilon_f_ev", plate.epsilon_f_ev),
                ("mstar_ratio", plate.mstar_ratio),
                ("mfp_nm", plate.mfp_nm),
            ] {
                positive(&format!("{name}.{field}"), value)?;
            }
        }
        match self.geometry.separation_nm {
            Some(a) => positive("geometry.separation_nm", a)?,
            None => return Err(range("geometry.separation_nm", "required")),
        }
        at_least(
            "conditions.temperature_k",
            self.conditions.temperature_k,
            MIN_TEMPERATURE,
        )?;
        non_negative("conditions.field_gauss", self.conditions.field_gauss)?;
        if let Some(sweep) = &self.sweep {
            validate_sweep(sweep)?;
        }
        self.numerics
            .to_core()
            .validate()
            .map_err(|e| core_field("numerics", e))?;
        let f = &self.fluctuations;
        non_negative("fluctuations.kappa", f.kappa)?;
        if f.cooperon_factor != 1.0 && f.cooperon_factor != 2.0 {
            return Err(range(
                "fluctuations.cooperon_factor",
                format!("must be 1 or 2, got {}", f.cooperon_factor),
            ));
        }
        if f.correlation == CorrelationForm::Exponential {
            match f.correlation_cutoff_rad_s {
                Some(c) => positive("fluctuations.correlation_cutoff_rad_s", c)?,
                None => {
                    return Err(range(
                        "fluctuations.correlation_cutoff_rad_s",
                        "required by the exponential correlation",
                    ))
                }
            }
        }
        at_least(
            "fluctuations.temperature_k",
            f.temperature_k,
            MIN_TEMPERATURE,
        )?;
        positive("fluctuations.c1", f.c1)?;
        positive("fluctuations.c2", f.c2)?;
        if f.curve_points < 2 {
            return Err(range("fluctuations.curve_points", "must be at least 2"));
        }
        positive("fluctuations.curve_span", f.curve_span)?;
        Ok(())
    }

    /// Fixed plate separation, nm.
    pub fn separation_nm(&self) -> f64 {
        self.geometry.separation_nm.unwrap_or(f64::NAN)
    }

    pub fn numerics(&self) -> NumericsConfig {
        self.numerics.to_core()
    }

    /// Material of plate `index` (1 or 2), with its mean free path replaced
    /// when `mfp_nm` is given.
    pub fn material(&self, index: usize, mfp_nm: Option<f64>) -> Result<MaterialSpec, ConfigError> {
        let (name, plate, default_dim) = match index {
            1 => ("plate1", &self.plate1, Dimensionality::ThreeD),
            _ => ("plate2", &self.plate2, Dimensionality::TwoD),
        };
        derive_material(&MaterialInput {
            epsilon_f: plate.epsilon_f_ev,
            mstar_ratio: plate.mstar_ratio,
            mfp: mfp_nm.unwrap_or(plate.mfp_nm),
            dimensionality: plate.dimensionality.unwrap_or(default_dim),
        })
        .map_err(|e| core_field(name, e))
    }

    pub fn plate(&self, index: usize) -> Result<Plate, ConfigError> {
        let (name, model) = match index {
            1 => ("plate1", self.plate1.model),
            _ => ("plate2", self.plate2.model),
        };
        match model.kind() {
            None => Ok(Plate::Ideal),
            Some(kind) => ResponseModel::new(kind, self.material(index, None)?)
                .map(Plate::Response)
                .map_err(|e| core_field(name, e)),
        }
    }

    /// Lifshitz job at the given point (separation nm, temperature K, field gauss).
    pub fn job(&self, point: GridPoint) -> Result<LifshitzJob, ConfigError> {
        LifshitzJob::new(
            point.separation_nm * NANOMETER,
            point.temperature_k,
            point.field_gauss * GAUSS,
            self.plate(1)?,
            self.plate(2)?,
        )
        .and_then(|job| job.with_numerics(self.numerics()))
        .map_err(|e| core_field("job", e))
    }

    /// Grid points of the configured sweep, or the single fixed point.
    pub fn grid(&self) -> Vec<GridPoint> {
        let base = GridPoint {
            swept: f64::NAN,
            separation_nm: self.separation_nm(),
            temperature_k: self.conditions.temperature_k,
            field_gauss: self.conditions.field_gauss,
            mfp_nm: None,
        };
        let Some(sweep) = &self.sweep else {
            return vec![base];
        };
        let temperatures = if sweep.temperatures_k.is_empty() {
            vec![base.temperature_k]
        } else {
            sweep.temperatures_k.clone()
        };
        let mut points = Vec::new();
        for t in temperatures {
            for v in sweep.values() {
                let mut p = GridPoint {
                    swept: v,
                    temperature_k: t,
                    ..base
                };
                match sweep.variable {
                    SweepVariable::Field => p.field_gauss = v,
                    SweepVariable::Temperature => p.temperature_k = v,
                    SweepVariable::Separation => p.separation_nm = v,
                    SweepVariable::Mfp => p.mfp_nm = Some(v),
                }
                points.push(p);
            }
        }
        points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub swept: f64,
    pub separation_nm: f64,
    pub temperature_k: f64,
    pub field_gauss: f64,
    pub mfp_nm: Option<f64>,
}

fn validate_sweep(s: &SweepSpec) -> Result<(), ConfigError> {
    if s.count < 2 {
        return Err(range(
            "sweep.count",
            format!("must be at least 2, got {}", s.count),
        ));
    }
    if !(s.min.is_finite() && s.max.is_finite()) {
        return Err(range("sweep.min", "bounds must be finite"));
    }
    if s.max <= s.min {
        return Err(range(
            "sweep.max",
            format!("must exceed sweep.min ({} <= {})", s.max, s.min),
        ));
    }
    // a linear field sweep may start at zero field; everything else is
    // strictly positive
    let zero_ok = s.variable == SweepVariable::Field && s.spacing == Spacing::Linear;
    if s.min < 0.0 || (s.min == 0.0 && !zero_ok) {
        return Err(range(
            "sweep.min",
            format!("must be positive, got {}", s.min),
        ));
    }
    if s.variable == SweepVariable::Temperature {
        at_least("sweep.min", s.min, MIN_TEMPERATURE)?;
    }
    if !s.temperatures_k.is_empty() {
        if s.variable != SweepVariable::Field {
            return Err(range(
                "sweep.temperatures_k",
                "only applies to a field sweep",
            ));
        }
        for &t in &s.temperatures_k {
            at_least("sweep.temperatures_k", t, MIN_TEMPERATURE)?;
        }
    }
    Ok(())
}

fn positive(key: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(range(key, format!("must be positive, got {v}")))
    }
}

fn non_negative(key: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(range(key, format!("must be non-negative, got {v}")))
    }
}

fn at_least(key: &str, v: f64, min: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v >= min {
        Ok(())
    } else {
        Err(range(key, format!("must be at least {min}, got {v}")))
    }
}

fn core_field(section: &str, e: casimir_core::Error) -> ConfigError {
    match e {
        casimir_core::Error::Validation { field, reason } => {
            range(&format!("{section}.{field}"), reason)
        }
        other => range(section, other.to_string()),
    }
}
