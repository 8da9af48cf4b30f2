//! The four subcommands. Each builds its rows from a validated
//! [`RunConfig`] and hands them to [`crate::output`].

use std::path::{Path, PathBuf};

use casimir_core::{
    casimir_pressure, dc_conductivity, energy_distribution, fit_scaling_distance, fit_scaling_tau,
    fluctuation_report, ideal_pressure, predicted_width_gap_ratio, separation_parameter,
    Dimensionality, DistanceFit, EnergyDensity, Error, FluctuationReport, LifshitzJob,
    NumericsConfig, ResponseKind, ResponseModel, TauFit, GAUSS, NANOMETER,
};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, Format, GridPoint, PlateModel, RunConfig, SweepVariable};
use crate::error::CliError;
use crate::output::{
    csv, emit, json, Cell, CONDUCTIVITY_HEADER, DISTRIBUTION_HEADER, FLUCTUATION_HEADER,
    PRESSURE_HEADER, SWEEP_HEADER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Pressure,
    Sweep,
    Conductivity,
    Fluctuations,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Pressure => "pressure",
            Command::Sweep => "sweep",
            Command::Conductivity => "conductivity",
            Command::Fluctuations => "fluctuations",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Pressure | Command::Fluctuations => Format::Json,
            Command::Sweep | Command::Conductivity => Format::Csv,
        }
    }
}

/// Command-line overrides of the `output` section plus the worker count.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    /// Threads for grid points; `None` uses every available core.
    pub workers: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Meta<'a> {
    pub command: &'static str,
    pub version: &'static str,
    pub numerics: NumericsConfig,
    pub config: &'a RunConfig,
}

fn meta(command: Command, config: &RunConfig) -> Meta<'_> {
    Meta {
        command: command.as_str(),
        version: env!("CARGO_PKG_VERSION"),
        numerics: config.numerics(),
        config,
    }
}

pub fn run(command: Command, config: &RunConfig, options: &RunOptions) -> Result<(), CliError> {
    let format = options
        .format
        .or(config.output.format)
        .unwrap_or(command.default_format());
    let out = options
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));
    let out = out.as_deref();
    match command {
        Command::Pressure => pressure(config, format, out),
        Command::Sweep => {
            let rows = in_pool(options.workers, || sweep_rows(config))?;
            let text = match format {
                Format::Csv => {
                    let cells: Vec<_> = rows.iter().map(|r| r.cells()).collect();
                    csv(SWEEP_HEADER, cells.iter().map(|c| c.as_slice()))
                }
                Format::Json => json(&meta(command, config), &rows),
            };
            emit(out, &text)?;
            let failed = rows.iter().filter(|r| !r.converged).count();
            if failed > 0 {
                return Err(CliError::PartialFailure {
                    failed,
                    total: rows.len(),
                });
            }
            Ok(())
        }
        Command::Conductivity => {
            let rows = conductivity_rows(config)?;
            let text = match format {
                Format::Csv => {
                    let cells: Vec<_> = rows.iter().map(|r| r.cells()).collect();
                    csv(CONDUCTIVITY_HEADER, cells.iter().map(|c| c.as_slice()))
                }
                Format::Json => json(&meta(command, config), &rows),
            };
            emit(out, &text)
        }
        Command::Fluctuations => {
            let study = in_pool(options.workers, || fluctuation_study(config))?;
            match format {
                Format::Csv => {
                    let cells: Vec<_> = study.rows.iter().map(|r| r.cells()).collect();
                    emit(
                        out,
                        &csv(FLUCTUATION_HEADER, cells.iter().map(|c| c.as_slice())),
                    )?;
                    match out {
                        Some(path) => emit(Some(&distribution_path(path)), &study.curves_csv())?,
                        None => info!(
                            "no --out path; distribution curves are only written alongside a file"
                        ),
                    }
                }
                Format::Json => {
                    let doc = FluctuationDocument {
                        meta: meta(command, config),
                        rows: &study.rows,
                        fit: study.fit,
                        curves: &study.curves,
                    };
                    let mut text = serde_json::to_string_pretty(&doc).expect("rows serialize");
                    text.push('\n');
                    emit(out, &text)?;
                }
            }
            Ok(())
        }
    }
}

fn in_pool<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            warn!("could not build a {workers:?}-thread pool ({e}); using the global pool");
            f()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureRow {
    pub a_nm: f64,
    #[serde(rename = "T_K")]
    pub t_k: f64,
    #[serde(rename = "H_gauss")]
    pub h_gauss: f64,
    #[serde(rename = "P_Pa")]
    pub p_pa: f64,
    #[serde(rename = "E_J_m2")]
    pub e_j_m2: f64,
    #[serde(rename = "P_norm")]
    pub p_norm: f64,
    pub n_terms: usize,
    pub quad_error: f64,
    pub converged: bool,
}

fn pressure(config: &RunConfig, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    if config.sweep.is_some() {
        warn!("`pressure` ignores the sweep section; evaluating the fixed conditions");
    }
    let point = GridPoint {
        swept: f64::NAN,
        separation_nm: config.separation_nm(),
        temperature_k: config.conditions.temperature_k,
        field_gauss: config.conditions.field_gauss,
        mfp_nm: None,
    };
    let job = config.job(point)?;
    let base = PressureRow {
        a_nm: point.separation_nm,
        t_k: point.temperature_k,
        h_gauss: point.field_gauss,
        p_pa: f64::NAN,
        e_j_m2: f64::NAN,
        p_norm: f64::NAN,
        n_terms: 0,
        quad_error: f64::NAN,
        converged: false,
    };
    let (row, failure) = match casimir_pressure(&job) {
        Ok(r) => (
            PressureRow {
                p_pa: r.pressure,
                e_j_m2: r.energy_per_area,
                p_norm: r.normalized,
                n_terms: r.n_terms_used,
                quad_error: r.quad_error_est,
                converged: r.converged,
                ..base
            },
            None,
        ),
        Err(
            e @ Error::NotConverged {
                n_terms,
                partial_pressure,
                partial_energy,
                ..
            },
        ) => (
            PressureRow {
                p_pa: partial_pressure,
                e_j_m2: partial_energy,
                p_norm: partial_pressure / ideal_pressure(job.separation),
                n_terms,
                ..base
            },
            Some(e),
        ),
        Err(e) => return Err(e.into()),
    };
    let text = match format {
        Format::Json => json(&meta(Command::Pressure, config), std::slice::from_ref(&row)),
        Format::Csv => {
            let cells = [
                Cell::Num(row.a_nm),
                Cell::Num(row.t_k),
                Cell::Num(row.h_gauss),
                Cell::Num(row.p_pa),
                Cell::Num(row.e_j_m2),
                Cell::Num(row.p_norm),
                Cell::Int(row.n_terms),
                Cell::Num(row.quad_error),
                Cell::Bool(row.converged),
            ];
            csv(PRESSURE_HEADER, [cells.as_slice()])
        }
    };
    emit(out, &text)?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub swept: f64,
    #[serde(rename = "H_gauss")]
    pub h_gauss: f64,
    #[serde(rename = "T_K")]
    pub t_k: f64,
    pub a_nm: f64,
    #[serde(rename = "P_Pa")]
    pub p_pa: Option<f64>,
    #[serde(rename = "P_norm")]
    pub p_norm: Option<f64>,
    /// DC conductivity of plate 2 over its Drude value, when plate 2 is a
    /// Drude or weak-localization sheet.
    pub sigma_norm: Option<f64>,
    pub n_terms: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Num(self.swept),
            Cell::Num(self.h_gauss),
            Cell::Num(self.t_k),
            Cell::Num(self.a_nm),
            Cell::Opt(self.p_pa),
            Cell::Opt(self.p_norm),
            Cell::Opt(self.sigma_norm),
            Cell::Int(self.n_terms),
            Cell::Bool(self.converged),
        ]
    }
}

fn require_sweep(config: &RunConfig, command: Command) -> Result<(), ConfigError> {
    match &config.sweep {
        None => Err(ConfigError::Range {
            key: "sweep".into(),
            reason: format!("`{}` needs a sweep section", command.as_str()),
        }),
        Some(s) if s.variable == SweepVariable::Mfp => Err(ConfigError::Range {
            key: "sweep.variable".into(),
            reason: format!(
                "`mfp` sweeps are only available to `fluctuations`, not `{}`",
                command.as_str()
            ),
        }),
        Some(_) => Ok(()),
    }
}

/// `sigma(T, H) / sigma_Drude` of plate 2, or `None` when plate 2 has no
/// finite DC conductivity.
fn sigma_norm(config: &RunConfig, point: &GridPoint) -> Result<Option<f64>, ConfigError> {
    let kind = match config.plate2.model {
        PlateModel::Drude => ResponseKind::Drude,
        PlateModel::DrudeWl => ResponseKind::DrudeWl,
        PlateModel::Plasma | PlateModel::Ideal => return Ok(None),
    };
    let material = config.material(2, None)?;
    let field = point.field_gauss * GAUSS;
    let core = |e: Error| ConfigError::Range {
        key: "plate2".into(),
        reason: e.to_string(),
    };
    let with = ResponseModel::new(kind, material).map_err(core)?;
    let without = ResponseModel::new(ResponseKind::Drude, material).map_err(core)?;
    let sigma = dc_conductivity(&with, point.temperature_k, field).map_err(core)?;
    let drude = dc_conductivity(&without, point.temperature_k, field).map_err(core)?;
    Ok(Some(sigma / drude))
}

/// Pressure at every grid point, in grid order. Points that fail carry
/// `converged = false` and, when the Matsubara cap was hit, the partial sums.
pub fn sweep_rows(config: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    require_sweep(config, Command::Sweep)?;
    let grid = config.grid();
    let prepared: Vec<(GridPoint, LifshitzJob, Option<f64>)> = grid
        .iter()
        .map(|p| Ok((*p, config.job(*p)?, sigma_norm(config, p)?)))
        .collect::<Result<_, ConfigError>>()?;
    let rows = prepared
        .par_iter()
        .map(|(p, job, sigma)| {
            let mut row = SweepRow {
                swept: p.swept,
                h_gauss: p.field_gauss,
                t_k: p.temperature_k,
                a_nm: p.separation_nm,
                p_pa: None,
                p_norm: None,
                sigma_norm: *sigma,
                n_terms: 0,
                converged: false,
                error: None,
            };
            match casimir_pressure(job) {
                Ok(r) => {
                    row.p_pa = Some(r.pressure);
                    row.p_norm = Some(r.normalized);
                    row.n_terms = r.n_terms_used;
                    row.converged = r.converged;
                }
                Err(e) => {
                    warn!(
                        "grid point T = {} K, H = {} G, a = {} nm: {e}",
                        p.temperature_k, p.field_gauss, p.separation_nm
                    );
                    if let Error::NotConverged {
                        n_terms,
                        partial_pressure,
                        ..
                    } = e
                    {
                        row.p_pa = Some(partial_pressure);
                        row.p_norm = Some(partial_pressure / ideal_pressure(job.separation));
                        row.n_terms = n_terms;
                    }
                    row.error = Some(e.to_string());
                }
            }
            row
        })
        .collect();
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConductivityRow {
    pub swept: f64,
    #[serde(rename = "H_gauss")]
    pub h_gauss: f64,
    #[serde(rename = "T_K")]
    pub t_k: f64,
    pub sigma_norm: f64,
}

impl ConductivityRow {
    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Num(self.swept),
            Cell::Num(self.h_gauss),
            Cell::Num(self.t_k),
            Cell::Num(self.sigma_norm),
        ]
    }
}

/// `sigma(T, H) / sigma_Drude` of plate 2 over the sweep grid.
pub fn conductivity_rows(config: &RunConfig) -> Result<Vec<ConductivityRow>, CliError> {
    require_sweep(config, Command::Conductivity)?;
    config.material(2, None)?;
    let mut rows = Vec::new();
    for p in config.grid() {
        let sigma = sigma_norm(config, &p)?.ok_or_else(|| ConfigError::Range {
            key: "plate2.model".into(),
            reason: "conductivity needs a drude or drude_wl plate".into(),
        })?;
        rows.push(ConductivityRow {
            swept: p.swept,
            h_gauss: p.field_gauss,
            t_k: p.temperature_k,
            sigma_norm: sigma,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationRow {
    pub swept: f64,
    pub a_nm: f64,
    pub mfp_nm: f64,
    #[serde(rename = "T_K")]
    pub t_k: f64,
    /// Closed-form width-to-gap ratio from the configured constants.
    #[serde(rename = "W_over_gap_predicted")]
    pub predicted_w_over_gap: f64,
    /// Disorder parameter `hbar / (eps_F tau)` of plate 1.
    pub disorder_parameter: f64,
    /// `hbar c / (eps_F a)`.
    pub separation_parameter: f64,
    pub fit_exponent: Option<f64>,
    #[serde(flatten)]
    pub report: FluctuationReport,
}

impl FluctuationRow {
    fn cells(&self) -> Vec<Cell> {
        let r = &self.report;
        vec![
            Cell::Num(self.swept),
            Cell::Num(self.a_nm),
            Cell::Num(self.mfp_nm),
            Cell::Num(self.t_k),
            Cell::Num(r.e0_drude),
            Cell::Num(r.e0_plasma),
            Cell::Num(r.width_w),
            Cell::Num(r.ratio_w_over_e0),
            Cell::Num(r.ratio_w_over_e0_plasma),
            Cell::Num(r.ratio_w_over_gap),
            Cell::Num(self.predicted_w_over_gap),
            Cell::Opt(r.c1),
            Cell::Opt(r.c2),
            Cell::Opt(self.fit_exponent),
            Cell::Opt(r.fit_residual),
            Cell::Bool(r.sharply_peaked),
            Cell::Bool(r.wide),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalingFit {
    Tau(TauFit),
    Distance(DistanceFit),
}

/// Sampled Gaussian distribution of Casimir energies at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub a_nm: f64,
    pub mfp_nm: f64,
    /// Set when W = 0 and the distribution is a point mass at E0.
    pub point_mass: bool,
    pub energies: Vec<f64>,
    pub densities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationStudy {
    pub rows: Vec<FluctuationRow>,
    pub fit: Option<ScalingFit>,
    pub curves: Vec<Curve>,
}

#[derive(Serialize)]
struct FluctuationDocument<'a> {
    meta: Meta<'a>,
    rows: &'a [FluctuationRow],
    fit: Option<ScalingFit>,
    curves: &'a [Curve],
}

impl FluctuationStudy {
    fn curves_csv(&self) -> String {
        let mut cells = Vec::new();
        for c in &self.curves {
            for (e, d) in c.energies.iter().zip(&c.densities) {
                cells.push(vec![
                    Cell::Num(c.a_nm),
                    Cell::Num(c.mfp_nm),
                    Cell::Num(*e),
                    Cell::Num(*d),
                ]);
            }
        }
        csv(DISTRIBUTION_HEADER, cells.iter().map(|c| c.as_slice()))
    }
}

fn distribution_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or("fluctuations".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.distribution.csv"))
}

/// Fluctuation reports for plate 1 (disordered sheet) against plate 2
/// (clean plasma sheet), both treated as 2d. A `separation` sweep adds the
/// distance fit, an `mfp` sweep the scattering-time fit.
pub fn fluctuation_study(config: &RunConfig) -> Result<FluctuationStudy, CliError> {
    if let Some(s) = &config.sweep {
        if s.variable == SweepVariable::Field {
            return Err(ConfigError::Range {
                key: "sweep.variable".into(),
                reason: "the fluctuation model has no field dependence; use fluctuations.cooperon_factor".into(),
            }
            .into());
        }
    }
    let f = &config.fluctuations;
    let kernel = f.kernel();
    let numerics = config.numerics();
    let clean = config
        .material(2, None)?
        .with_dimensionality(Dimensionality::TwoD);
    let variable = config.sweep.as_ref().map(|s| s.variable);
    let points: Vec<_> = config
        .grid()
        .into_iter()
        .map(|mut p| {
            if variable != Some(SweepVariable::Temperature) {
                p.temperature_k = f.temperature_k;
            }
            let sheet = config
                .material(1, p.mfp_nm)?
                .with_dimensionality(Dimensionality::TwoD);
            Ok((p, sheet))
        })
        .collect::<Result<_, ConfigError>>()?;
    let reports: Vec<FluctuationReport> = points
        .par_iter()
        .map(|(p, sheet)| {
            fluctuation_report(
                sheet,
                &clean,
                &kernel,
                p.separation_nm * NANOMETER,
                p.temperature_k,
                &numerics,
            )
        })
        .collect::<Result<_, Error>>()?;

    let mut rows: Vec<FluctuationRow> = points
        .iter()
        .zip(reports)
        .map(|((p, sheet), report)| FluctuationRow {
            swept: p.swept,
            a_nm: p.separation_nm,
            mfp_nm: sheet.mfp / NANOMETER,
            t_k: p.temperature_k,
            predicted_w_over_gap: predicted_width_gap_ratio(
                sheet,
                p.separation_nm * NANOMETER,
                f.constants(),
            ),
            disorder_parameter: sheet.disorder_parameter(),
            separation_parameter: separation_parameter(sheet, p.separation_nm * NANOMETER),
            fit_exponent: None,
            report,
        })
        .collect();

    let fit = match variable {
        Some(SweepVariable::Mfp) => {
            let h: Vec<f64> = rows.iter().map(|r| r.disorder_parameter).collect();
            let y: Vec<f64> = rows.iter().map(|r| r.report.ratio_w_over_e0).collect();
            fit_or_warn(fit_scaling_tau(&h, &y).map(ScalingFit::Tau))
        }
        Some(SweepVariable::Separation) => {
            let s: Vec<f64> = rows.iter().map(|r| r.separation_parameter).collect();
            let y: Vec<f64> = rows
                .iter()
                .map(|r| r.report.ratio_w_over_e0_plasma)
                .collect();
            fit_or_warn(fit_scaling_distance(&s, &y).map(ScalingFit::Distance))
        }
        _ => None,
    };
    for row in &mut rows {
        match fit {
            Some(ScalingFit::Tau(t)) => {
                row.report.c1 = Some(t.c1);
                row.report.fit_residual = Some(t.residual);
            }
            Some(ScalingFit::Distance(d)) => {
                row.report.c2 = Some(d.c2);
                row.report.fit_residual = Some(d.residual);
                row.fit_exponent = Some(d.exponent);
            }
            None => {}
        }
    }

    let curves = rows
        .iter()
        .map(|r| sample_curve(r, f.curve_points, f.curve_span))
        .collect::<Result<_, Error>>()?;
    Ok(FluctuationStudy { rows, fit, curves })
}

fn fit_or_warn(fit: casimir_core::Result<ScalingFit>) -> Option<ScalingFit> {
    match fit {
        Ok(f) => Some(f),
        Err(e) => {
            warn!("scaling fit skipped: {e}");
            None
        }
    }
}

fn sample_curve(row: &FluctuationRow, points: usize, span: f64) -> casimir_core::Result<Curve> {
    let (mean, width) = (row.report.e0_drude, row.report.width_w);
    let mut curve = Curve {
        a_nm: row.a_nm,
        mfp_nm: row.mfp_nm,
        point_mass: false,
        energies: Vec::with_capacity(points),
        densities: Vec::with_capacity(points),
    };
    if width == 0.0 {
        curve.point_mass = true;
        curve.energies.push(mean);
        curve.densities.push(f64::INFINITY);
        return Ok(curve);
    }
    for i in 0..points {
        let e = mean + width * span * (2.0 * i as f64 / (points - 1) as f64 - 1.0);
        let density = match energy_distribution(mean, width, e)? {
            EnergyDensity::Finite(d) => d,
            EnergyDensity::PointMass => f64::INFINITY,
        };
        curve.energies.push(e);
        curve.densities.push(density);
    }
    Ok(curve)
}
