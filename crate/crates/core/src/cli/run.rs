use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{sweep_points, CavityMethod, OracleModelKind, OutputFormat, Scenario, ScenarioConfig, SweepPoint};
use crate::dephasing::{
    decoherence_factor_discrete, decoherence_norm_cavity, decoherence_norm_integral, evolve_entangled_state,
    forced_mode, reduced_density_matrix,
};
use crate::doublewell::{population_difference_exact, tunneling_trace, AtomTruncation, TunnelingConfig};
use crate::error::Error;
use crate::linalg::purity;
use crate::model::{lambda_mn, SpectralDensity};
use crate::oracle::{
    oracle_decoherence_factors, oracle_displacements, oracle_population_difference, oracle_reduced_density,
};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DECOBEC_OUT";
/// Output directory used when neither the command line, the config nor the
/// environment names one.
pub const DEFAULT_OUT_DIR: &str = "decobec-out";

/// One output column. `label` identifies the sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: &'static str,
    pub label: String,
    pub values: Vec<f64>,
}

impl Column {
    fn new(name: impl Into<String>, unit: &'static str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            unit,
            label: String::new(),
            values,
        }
    }

    fn flag(name: &str, n: usize, on: bool) -> Self {
        Self::new(name, "flag", vec![if on { 1.0 } else { 0.0 }; n])
    }

    pub fn header(&self) -> String {
        if self.label.is_empty() {
            format!("{} [{}]", self.name, self.unit)
        } else {
            format!("{}[{}] [{}]", self.name, self.label, self.unit)
        }
    }
}

/// All columns of a run, sharing the time axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioTable {
    pub scenario: &'static str,
    pub config_hash: String,
    pub times: Vec<f64>,
    pub columns: Vec<Column>,
}

impl ScenarioTable {
    pub fn column(&self, name: &str, label: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name && c.label == label)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t [time]");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.header());
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            write!(out, "{t:?}").unwrap();
            for c in &self.columns {
                write!(out, ",{:?}", c.values[i]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

/// A sweep point that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointFailure {
    pub point: String,
    pub kind: FailureKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Config,
    Numerical,
    Resource,
}

impl FailureKind {
    fn of(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => FailureKind::Config,
            Error::Accuracy { .. } | Error::Range(_) => FailureKind::Numerical,
            Error::Resource(_) => FailureKind::Resource,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            FailureKind::Config => 1,
            FailureKind::Numerical => 2,
            FailureKind::Resource => 3,
        }
    }
}

/// Result of computing every sweep point, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub table: ScenarioTable,
    pub warnings: Vec<String>,
    pub failures: Vec<PointFailure>,
    /// Largest closed-form versus oracle deviation (oracle runs only).
    pub max_deviation: Option<f64>,
    /// True when `max_deviation` exceeds the configured bound.
    pub deviation_exceeded: bool,
}

impl ScenarioOutput {
    /// 0 on success, otherwise the code of the most severe failure.
    pub fn exit_code(&self) -> i32 {
        let worst = self.failures.iter().map(|f| f.kind).max();
        match worst {
            Some(k) => k.exit_code(),
            None if self.deviation_exceeded => FailureKind::Numerical.exit_code(),
            None => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub artifact_version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
    pub scenario: &'static str,
    pub warnings: Vec<String>,
    pub failures: Vec<PointFailure>,
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub workers: usize,
    pub format: Option<OutputFormat>,
}

/// Output directory: explicit flag, then the config (relative to the config
/// file), then [`OUT_DIR_ENV`], then [`DEFAULT_OUT_DIR`].
pub fn resolve_out_dir(flag: Option<&Path>, config: &ScenarioConfig, config_path: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = &config.output.directory {
        let dir = PathBuf::from(dir);
        return match config_path.and_then(Path::parent) {
            Some(base) if dir.is_relative() => base.join(dir),
            _ => dir,
        };
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(DEFAULT_OUT_DIR),
    }
}

#[derive(Debug)]
struct PointResult {
    columns: Vec<Column>,
    deviation: Option<f64>,
}

/// Compute every sweep point on `workers` threads. Failures of single points
/// are recorded, not returned.
pub fn compute(config: &ScenarioConfig, workers: usize) -> Result<ScenarioOutput, super::CliError> {
    let points = sweep_points(config).map_err(super::CliError::Config)?;
    let times = config.times.samples();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| super::CliError::Io(std::io::Error::other(e)))?;
    let results: Vec<Result<PointResult, Error>> =
        pool.install(|| points.par_iter().map(|p| compute_point(&p.config, &times)).collect());

    let mut warnings = config_warnings(config);
    let mut failures = Vec::new();
    let template: Option<Vec<Column>> = results.iter().find_map(|r| r.as_ref().ok().map(|p| p.columns.clone()));
    let mut columns = Vec::new();
    let mut max_deviation: Option<f64> = None;
    let n = times.len();
    for (point, result) in points.iter().zip(results) {
        let (mut group, failed) = match result {
            Ok(p) => {
                if let Some(d) = p.deviation {
                    max_deviation = Some(max_deviation.map_or(d, |m: f64| m.max(d)));
                }
                (p.columns, false)
            }
            Err(e) => {
                failures.push(PointFailure {
                    point: point_name(point),
                    kind: FailureKind::of(&e),
                    message: e.to_string(),
                });
                let placeholder = template
                    .iter()
                    .flatten()
                    .map(|c| Column {
                        values: vec![0.0; n],
                        ..c.clone()
                    })
                    .collect();
                (placeholder, true)
            }
        };
        if !config.sweep.is_empty() || failed {
            group.push(Column::flag("failed", n, failed));
        }
        for c in &mut group {
            c.label = point.label.clone();
        }
        columns.extend(group);
    }
    for c in &columns {
        if c.values.iter().any(|v| !v.is_finite()) {
            warnings.push(format!("non-finite values in {} were replaced by 0", c.header()));
        }
    }
    for c in &mut columns {
        for v in &mut c.values {
            if !v.is_finite() {
                *v = 0.0;
            }
        }
    }
    let deviation_exceeded =
        config.scenario == Scenario::OracleCheck && max_deviation.is_some_and(|d| d > config.oracle.max_deviation);
    if deviation_exceeded {
        warnings.push(format!(
            "oracle deviation {:e} exceeds the bound {:e}",
            max_deviation.unwrap_or(0.0),
            config.oracle.max_deviation
        ));
    }
    Ok(ScenarioOutput {
        table: ScenarioTable {
            scenario: config.scenario.name(),
            config_hash: config.hash(),
            times,
            columns,
        },
        warnings,
        failures,
        max_deviation,
        deviation_exceeded,
    })
}

fn point_name(point: &SweepPoint) -> String {
    if point.label.is_empty() {
        "base".into()
    } else {
        point.label.clone()
    }
}

fn config_warnings(config: &ScenarioConfig) -> Vec<String> {
    let mut w = Vec::new();
    if let Some(Ok(list)) = config.pump.map(|p| p.validate()) {
        w.extend(list.into_iter().map(|m| format!("pump: {m}")));
    }
    if let Some(Ok(list)) = config.geometry.map(|g| g.validate()) {
        w.extend(list.into_iter().map(|m| format!("geometry: {m}")));
    }
    w
}

/// Compute and write the scenario file and `manifest.json` to
/// `options.out_dir`.
pub fn run(config: &ScenarioConfig, options: &RunOptions) -> Result<(RunManifest, ScenarioOutput), super::CliError> {
    let start = Instant::now();
    let output = compute(config, options.workers)?;
    let format = options.format.unwrap_or(config.output.format);
    std::fs::create_dir_all(&options.out_dir).map_err(super::CliError::Io)?;
    let file = options.out_dir.join(format!(
        "{}_{}.{}",
        output.table.scenario,
        output.table.config_hash,
        format.extension()
    ));
    let body = match format {
        OutputFormat::Csv => output.table.to_csv(),
        OutputFormat::Json => output.table.to_json(),
    };
    std::fs::write(&file, body).map_err(super::CliError::Io)?;
    let manifest = RunManifest {
        config_hash: output.table.config_hash.clone(),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: vec![file],
        scenario: output.table.scenario,
        warnings: output.warnings.clone(),
        failures: output.failures.clone(),
        max_deviation: output.max_deviation,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(options.out_dir.join("manifest.json"), text).map_err(super::CliError::Io)?;
    Ok((manifest, output))
}

fn compute_point(config: &ScenarioConfig, times: &[f64]) -> Result<PointResult, Error> {
    let columns = match config.scenario {
        Scenario::Fig1a | Scenario::Fig1b => cavity_columns(config, times)?,
        Scenario::SingleWell => single_well_columns(config, times)?,
        Scenario::Fig2 => tunneling_columns(config, times, false)?,
        Scenario::DoubleWell => tunneling_columns(config, times, true)?,
        Scenario::OracleCheck => return oracle_columns(config, times),
    };
    Ok(PointResult {
        columns,
        deviation: None,
    })
}

fn cavity_columns(config: &ScenarioConfig, times: &[f64]) -> Result<Vec<Column>, Error> {
    let cavity = &config.cavity;
    let omega0 = cavity.omega0.unwrap_or_else(|| config.pump_frequency());
    match cavity.method {
        CavityMethod::ClosedForm => {
            let lambda = match (cavity.lambda, &config.pump, &config.density) {
                (Some(l), _, _) => {
                    let d = cavity.m as f64 - cavity.n as f64;
                    l * d * d
                }
                (None, Some(pump), Some(SpectralDensity::CavityInverseCubic { scale })) => {
                    lambda_mn(pump, *scale, cavity.m, cavity.n, config.units.hbar)
                }
                _ => return Err(Error::InvalidArgument("no cavity decoherence rate".into())),
            };
            let values = times
                .iter()
                .map(|&t| decoherence_norm_cavity(lambda, omega0, t, cavity.variant))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(vec![Column::new("abs_O", "1", values)])
        }
        CavityMethod::Quadrature => {
            let (Some(mut pump), Some(density)) = (config.pump, config.density.as_ref()) else {
                return Err(Error::InvalidArgument("quadrature needs pump and density".into()));
            };
            pump.pump_frequency = omega0;
            let k_max = cavity.k_max_factor * omega0 / config.units.c;
            let mut norm = Vec::with_capacity(times.len());
            let mut diverged = Vec::with_capacity(times.len());
            for &t in times {
                let r =
                    decoherence_norm_integral(cavity.m, cavity.n, &pump, density, config.units, t, config.tol, k_max)?;
                norm.push(r.norm);
                diverged.push(if r.quadrature.diverged { 1.0 } else { 0.0 });
            }
            Ok(vec![
                Column::new("abs_O", "1", norm),
                Column::new("diverged", "flag", diverged),
            ])
        }
    }
}

fn single_well_columns(config: &ScenarioConfig, times: &[f64]) -> Result<Vec<Column>, Error> {
    let grid = config.mode_grid()?;
    let spec = &config.single_well;
    let c = spec.complex_amplitudes();
    let d = c.len();
    let mut rho_abs = vec![vec![Vec::with_capacity(times.len()); d]; d];
    let mut o_abs = vec![vec![Vec::with_capacity(times.len()); d]; d];
    let mut pur = Vec::with_capacity(times.len());
    for &t in times {
        let state = evolve_entangled_state(&c, &grid, spec.omega0, spec.kappa, t)?;
        let rho = reduced_density_matrix(&state);
        for m in 0..d {
            for n in m..d {
                rho_abs[m][n].push(rho[(m, n)].norm());
                if n > m {
                    o_abs[m][n].push(decoherence_factor_discrete(m as u32, n as u32, &grid, t).norm());
                }
            }
        }
        pur.push(purity(&rho));
    }
    let mut columns = Vec::new();
    for m in 0..d {
        for n in m + 1..d {
            columns.push(Column::new(
                format!("abs_O_{m}{n}"),
                "1",
                std::mem::take(&mut o_abs[m][n]),
            ));
        }
    }
    for m in 0..d {
        for n in m..d {
            columns.push(Column::new(
                format!("abs_rho_{m}{n}"),
                "1",
                std::mem::take(&mut rho_abs[m][n]),
            ));
        }
    }
    columns.push(Column::new("purity", "1", pur));
    Ok(columns)
}

fn tunneling_columns(config: &ScenarioConfig, times: &[f64], full: bool) -> Result<Vec<Column>, Error> {
    let tun = &config.tunneling;
    let trace = tunneling_trace(&TunnelingConfig {
        alpha: tun.alpha,
        delta: config.delta()?,
        grid: config.mode_grid()?,
        times: times.to_vec(),
        truncation: tun.truncation,
        n_ref: tun.n_ref,
        variant: tun.variant,
    })?;
    let valid: Vec<f64> = trace.s.iter().map(|s| if s.is_some() { 1.0 } else { 0.0 }).collect();
    let theta = trace.theta.iter().map(|t| t.unwrap_or(0.0)).collect();
    let mut columns = vec![
        Column::new("p_exact", "atoms", trace.p_exact),
        Column::new("p_compact", "atoms", trace.p_compact),
        Column::new("J", "1", trace.j),
    ];
    if full {
        columns.push(Column::new(
            "S",
            "rad",
            trace.s.iter().map(|s| s.unwrap_or(0.0)).collect(),
        ));
    }
    columns.push(Column::new("theta", "rad", theta));
    columns.push(Column::new("fit_valid", "flag", valid));
    Ok(columns)
}

fn max_gap(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect()
}

fn oracle_columns(config: &ScenarioConfig, times: &[f64]) -> Result<PointResult, Error> {
    let trunc = config
        .truncation
        .ok_or_else(|| Error::InvalidArgument("oracle run needs a truncation".into()))?;
    let fits = trunc
        .photon_dimension()
        .and_then(|p| p.checked_mul(trunc.max_atoms as usize + 1))
        .is_some_and(|d| d <= trunc.dimension_cap);
    if !fits {
        return Err(Error::Resource(format!(
            "{} atom levels x {} photons per mode over {} modes exceed the cap {}",
            trunc.max_atoms + 1,
            trunc.max_photons_per_mode + 1,
            trunc.num_modes,
            trunc.dimension_cap
        )));
    }
    let grid = config.mode_grid()?;
    let options = &config.oracle.evolve;
    let mut columns = Vec::new();
    let mut worst = 0.0f64;
    let mut track = |col: &Column| worst = col.values.iter().fold(worst, |m, v| m.max(*v));

    match config.oracle.model {
        OracleModelKind::SingleWell => {
            let spec = &config.single_well;
            let c = spec.complex_amplitudes();

            let disp = oracle_displacements(&grid, 1, times, trunc.max_photons_per_mode, options)?;
            let mut gap = vec![0.0; times.len()];
            for (i, &t) in times.iter().enumerate() {
                for (k, mode) in grid.modes().iter().enumerate() {
                    let closed = forced_mode(mode.effective_coupling(), mode.omega, t).alpha;
                    gap[i] = f64::max(gap[i], (closed - disp[i][k]).norm());
                }
            }
            let col = Column::new("dev_alpha", "1", gap);
            track(&col);
            columns.push(col);

            let pairs: Vec<(u32, u32)> = (0..=trunc.max_atoms)
                .flat_map(|m| (m + 1..=trunc.max_atoms).map(move |n| (m, n)))
                .collect();
            let factors = oracle_decoherence_factors(&grid, &pairs, times, trunc.max_photons_per_mode, options)?;
            for (p, &(m, n)) in pairs.iter().enumerate() {
                let closed: Vec<Complex64> = times
                    .iter()
                    .map(|&t| decoherence_factor_discrete(m, n, &grid, t).value)
                    .collect();
                let oracle: Vec<Complex64> = factors.iter().map(|row| row[p]).collect();
                let dev = closed.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).collect();
                columns.push(Column::new(
                    format!("abs_O_{m}{n}_closed"),
                    "1",
                    closed.iter().map(|z| z.norm()).collect(),
                ));
                columns.push(Column::new(
                    format!("abs_O_{m}{n}_oracle"),
                    "1",
                    oracle.iter().map(|z| z.norm()).collect(),
                ));
                let col = Column::new(format!("dev_O_{m}{n}"), "1", dev);
                track(&col);
                columns.push(col);
            }

            let rho_oracle = oracle_reduced_density(&c, &grid, spec.omega0, spec.kappa, times, &trunc, options)?;
            let mut dev = Vec::with_capacity(times.len());
            let mut pur_closed = Vec::with_capacity(times.len());
            let mut pur_oracle = Vec::with_capacity(times.len());
            for (&t, ro) in times.iter().zip(&rho_oracle) {
                let rho = reduced_density_matrix(&evolve_entangled_state(&c, &grid, spec.omega0, spec.kappa, t)?);
                dev.push((&rho - ro).iter().map(|z| z.norm()).fold(0.0, f64::max));
                pur_closed.push(purity(&rho));
                pur_oracle.push(purity(ro));
            }
            columns.push(Column::new("purity_closed", "1", pur_closed));
            columns.push(Column::new("purity_oracle", "1", pur_oracle));
            let col = Column::new("dev_rho", "1", dev);
            track(&col);
            columns.push(col);
        }
        OracleModelKind::DoubleWell => {
            let tun = &config.tunneling;
            let delta = config.delta()?;
            let closed = times
                .iter()
                .map(|&t| {
                    population_difference_exact(
                        tun.alpha,
                        &grid,
                        delta,
                        t,
                        AtomTruncation::MaxAtoms {
                            max_atoms: trunc.max_atoms,
                        },
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = oracle_population_difference(tun.alpha, &grid, delta, times, &trunc, options)?;
            let col = Column::new("dev_p", "atoms", max_gap(&closed, &oracle));
            track(&col);
            columns.push(Column::new("p_closed", "atoms", closed));
            columns.push(Column::new("p_oracle", "atoms", oracle));
            columns.push(col);
        }
    }
    Ok(PointResult {
        columns,
        deviation: Some(worst),
    })
}
