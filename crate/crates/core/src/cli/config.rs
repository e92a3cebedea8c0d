use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::dephasing::CavityVariant;
use crate::doublewell::{AtomTruncation, CompactVariant};
use crate::model::{
    build_mode_grid, splitting_delta, GridSpec, ModeGrid, PumpConfig, SpectralDensity, TrapGeometry, Units,
};
use crate::oracle::{EvolveOptions, TruncationSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Fig1a,
    Fig1b,
    Fig2,
    SingleWell,
    DoubleWell,
    OracleCheck,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Fig1a => "fig1a",
            Scenario::Fig1b => "fig1b",
            Scenario::Fig2 => "fig2",
            Scenario::SingleWell => "single_well",
            Scenario::DoubleWell => "double_well",
            Scenario::OracleCheck => "oracle_check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub directory: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(default)]
    pub t_start: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_t_end() -> f64 {
    50.0
}

fn default_steps() -> usize {
    500
}

impl Default for TimeSpec {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: default_t_end(),
            steps: default_steps(),
        }
    }
}

impl TimeSpec {
    pub fn samples(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.t_start + span * i as f64 / last).collect()
    }
}

/// One swept parameter: a dotted path into the config and its values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    pub values: Vec<f64>,
}

/// A mode given directly by frequency and couplings (per ħ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitMode {
    pub omega: f64,
    #[serde(default)]
    pub coupling: f64,
    #[serde(default)]
    pub coupling_im: f64,
    #[serde(default)]
    pub tunneling: f64,
    #[serde(default)]
    pub tunneling_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CavityMethod {
    #[default]
    ClosedForm,
    Quadrature,
}

/// Parameters of the cavity decoherence curves (`fig1a`, `fig1b`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySpec {
    /// Rate `λ_01` for neighbouring atom numbers, scaled by `(m−n)²`;
    /// computed from the pump and a cavity density when absent.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Pump frequency `ω₀`; the pump's value (or 1) when absent.
    #[serde(default)]
    pub omega0: Option<f64>,
    #[serde(default)]
    pub m: u32,
    #[serde(default = "one_u32")]
    pub n: u32,
    #[serde(default)]
    pub variant: CavityVariant,
    #[serde(default)]
    pub method: CavityMethod,
    /// Quadrature cutoff in units of `ω₀/c`.
    #[serde(default = "default_k_max_factor")]
    pub k_max_factor: f64,
}

fn one_u32() -> u32 {
    1
}

fn default_k_max_factor() -> f64 {
    1e4
}

impl Default for CavitySpec {
    fn default() -> Self {
        Self {
            lambda: None,
            omega0: None,
            m: 0,
            n: 1,
            variant: CavityVariant::Corrected,
            method: CavityMethod::ClosedForm,
            k_max_factor: default_k_max_factor(),
        }
    }
}

/// Single-well entangled-state run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleWellSpec {
    /// Initial `c_n` as `[re, im]`, indexed by atom number.
    #[serde(default = "default_amplitudes")]
    pub amplitudes: Vec<[f64; 2]>,
    /// Condensate frequency `Ω₀`.
    #[serde(default = "unit")]
    pub omega0: f64,
    #[serde(default)]
    pub kappa: f64,
}

fn unit() -> f64 {
    1.0
}

fn default_amplitudes() -> Vec<[f64; 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![[h, 0.0], [h, 0.0]]
}

impl Default for SingleWellSpec {
    fn default() -> Self {
        Self {
            amplitudes: default_amplitudes(),
            omega0: 1.0,
            kappa: 0.0,
        }
    }
}

impl SingleWellSpec {
    pub fn complex_amplitudes(&self) -> Vec<Complex64> {
        self.amplitudes.iter().map(|a| Complex64::new(a[0], a[1])).collect()
    }
}

/// Double-well tunneling run (`fig2`, `double_well`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunnelingSpec {
    #[serde(default = "unit")]
    pub alpha: f64,
    /// Tunneling splitting `δ`; taken from a double-well geometry when absent.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub n_ref: Option<u32>,
    #[serde(default)]
    pub variant: CompactVariant,
    #[serde(default)]
    pub truncation: AtomTruncation,
}

impl Default for TunnelingSpec {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            delta: None,
            n_ref: None,
            variant: CompactVariant::Derived,
            truncation: AtomTruncation::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleModelKind {
    #[default]
    SingleWell,
    DoubleWell,
}

/// Closed form versus brute force on a small instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default)]
    pub model: OracleModelKind,
    #[serde(default = "default_max_deviation")]
    pub max_deviation: f64,
    #[serde(default)]
    pub evolve: EvolveOptions,
}

fn default_max_deviation() -> f64 {
    1e-6
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            model: OracleModelKind::SingleWell,
            max_deviation: default_max_deviation(),
            evolve: EvolveOptions::default(),
        }
    }
}

fn default_tol() -> f64 {
    1e-10
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub pump: Option<PumpConfig>,
    #[serde(default)]
    pub density: Option<SpectralDensity>,
    #[serde(default)]
    pub geometry: Option<TrapGeometry>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Explicit modes; used instead of a generated grid when present.
    #[serde(default)]
    pub modes: Option<Vec<ExplicitMode>>,
    #[serde(default)]
    pub times: TimeSpec,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    #[serde(default)]
    pub truncation: Option<TruncationSpec>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub cavity: CavitySpec,
    #[serde(default)]
    pub single_well: SingleWellSpec,
    #[serde(default)]
    pub tunneling: TunnelingSpec,
    #[serde(default)]
    pub oracle: OracleSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Every problem found in a config.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub messages: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.messages.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Blank out lines starting with `//` or `#` so JSON positions are kept.
pub fn strip_comments(raw: &str) -> String {
    raw.lines()
        .map(|line| {
            let t = line.trim_start();
            if t.starts_with("//") || t.starts_with('#') {
                ""
            } else {
                line
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parse, fill defaults and check a config, reporting all violations.
pub fn validate_config(raw: &str) -> Result<ScenarioConfig, ConfigError> {
    let text = strip_comments(raw);
    let mut config: ScenarioConfig = serde_json::from_str(&text).map_err(|e| ConfigError {
        messages: vec![format!("syntax: {e}")],
    })?;
    fill_default_sweep(&mut config);
    let messages = if config.sweep.is_empty() {
        check(&config)
    } else {
        match sweep_points(&config) {
            Ok(points) => {
                let per_point: Vec<(String, Vec<String>)> =
                    points.into_iter().map(|p| (p.label, check(&p.config))).collect();
                let mut messages: Vec<String> = Vec::new();
                for (label, list) in &per_point {
                    for m in list {
                        if per_point.iter().all(|(_, other)| other.contains(m)) {
                            if !messages.contains(m) {
                                messages.push(m.clone());
                            }
                        } else {
                            messages.push(format!("sweep point {label}: {m}"));
                        }
                    }
                }
                messages
            }
            Err(e) => e.messages,
        }
    };
    if messages.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError { messages })
    }
}

fn fill_default_sweep(config: &mut ScenarioConfig) {
    if !config.sweep.is_empty() {
        return;
    }
    match config.scenario {
        Scenario::Fig1a if config.cavity.lambda.is_none() && config.pump.is_none() => {
            config.sweep.push(SweepAxis {
                parameter: "cavity.lambda".into(),
                values: vec![1e-3, 5e-3, 2e-2],
            });
        }
        Scenario::Fig1b if config.cavity.omega0.is_none() => {
            config.sweep.push(SweepAxis {
                parameter: "cavity.omega0".into(),
                values: vec![0.5, 1.0, 2.0, 4.0],
            });
        }
        _ => {}
    }
}

fn push_err<T>(messages: &mut Vec<String>, field: &str, r: crate::Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            messages.push(format!("{field}: {e}"));
            None
        }
    }
}

/// Semantic checks of one fully specified config (no sweep applied).
fn check(config: &ScenarioConfig) -> Vec<String> {
    let mut m = Vec::new();
    push_err(&mut m, "units", config.units.validate());
    if let Some(pump) = &config.pump {
        push_err(&mut m, "pump", pump.validate());
    }
    if let Some(density) = &config.density {
        push_err(&mut m, "density", density.validate());
    }
    if let Some(geometry) = &config.geometry {
        push_err(&mut m, "geometry", geometry.validate());
    }
    if let Some(grid) = &config.grid {
        if !(grid.k_min > 0.0 && grid.k_min < grid.k_max && grid.k_max.is_finite()) {
            m.push(format!(
                "grid: need 0 < k_min < k_max, got [{}, {}]",
                grid.k_min, grid.k_max
            ));
        }
        if grid.n_radial == 0 || grid.n_angular == 0 {
            m.push("grid: n_radial and n_angular must be at least 1".into());
        }
    }
    if let Some(modes) = &config.modes {
        if modes.is_empty() {
            m.push("modes: at least one mode is required".into());
        }
        for (i, mode) in modes.iter().enumerate() {
            let vals = [
                mode.omega,
                mode.coupling,
                mode.coupling_im,
                mode.tunneling,
                mode.tunneling_im,
            ];
            if vals.iter().any(|v| !v.is_finite()) {
                m.push(format!("modes.{i}: values must be finite"));
            }
        }
    }
    let t = &config.times;
    if !(t.t_start >= 0.0 && t.t_start.is_finite()) {
        m.push(format!("times.t_start must be non-negative, got {}", t.t_start));
    }
    if !(t.t_end > t.t_start && t.t_end.is_finite()) {
        m.push(format!("times.t_end must exceed t_start, got {}", t.t_end));
    }
    if t.steps < 2 {
        m.push(format!("times.steps must be at least 2, got {}", t.steps));
    }
    if !(config.tol > 0.0) {
        m.push(format!("tol must be positive, got {}", config.tol));
    }
    for (i, axis) in config.sweep.iter().enumerate() {
        if axis.values.is_empty() {
            m.push(format!("sweep.{i}: no values for {}", axis.parameter));
        }
        if axis.values.iter().any(|v| !v.is_finite()) {
            m.push(format!("sweep.{i}: values must be finite"));
        }
    }
    if let Some(trunc) = &config.truncation {
        push_err(&mut m, "truncation", trunc.validate());
    }

    match config.scenario {
        Scenario::Fig1a | Scenario::Fig1b => check_cavity(config, &mut m),
        Scenario::SingleWell => {
            check_amplitudes(config, &mut m);
            check_grid_source(config, &mut m);
        }
        Scenario::Fig2 | Scenario::DoubleWell => {
            check_tunneling(config, &mut m);
            check_grid_source(config, &mut m);
        }
        Scenario::OracleCheck => {
            check_grid_source(config, &mut m);
            match &config.truncation {
                None => m.push("truncation: required for oracle_check".into()),
                Some(trunc) => {
                    if let Some(modes) = &config.modes {
                        if modes.len() != trunc.num_modes {
                            m.push(format!(
                                "truncation.num_modes = {} but {} modes are given",
                                trunc.num_modes,
                                modes.len()
                            ));
                        }
                    }
                }
            }
            if !(config.oracle.max_deviation > 0.0) {
                m.push("oracle.max_deviation must be positive".into());
            }
            match config.oracle.model {
                OracleModelKind::SingleWell => {
                    check_amplitudes(config, &mut m);
                    if let Some(trunc) = &config.truncation {
                        if config.single_well.amplitudes.len() != trunc.max_atoms as usize + 1 {
                            m.push(format!(
                                "single_well.amplitudes needs truncation.max_atoms + 1 = {} entries",
                                trunc.max_atoms + 1
                            ));
                        }
                    }
                }
                OracleModelKind::DoubleWell => check_tunneling(config, &mut m),
            }
        }
    }
    m
}

fn check_cavity(config: &ScenarioConfig, m: &mut Vec<String>) {
    let cavity = &config.cavity;
    if let Some(l) = cavity.lambda {
        if !(l >= 0.0 && l.is_finite()) {
            m.push(format!("cavity.lambda must be non-negative, got {l}"));
        }
    } else if !matches!(
        (&config.pump, &config.density),
        (Some(_), Some(SpectralDensity::CavityInverseCubic { .. }))
    ) {
        m.push("cavity.lambda: give it explicitly or provide pump and a cavity_inverse_cubic density".into());
    }
    if let Some(w) = cavity.omega0 {
        if !(w > 0.0 && w.is_finite()) {
            m.push(format!("cavity.omega0 must be positive, got {w}"));
        }
    }
    if cavity.method == CavityMethod::Quadrature {
        if config.pump.is_none() || config.density.is_none() {
            m.push("cavity.method = quadrature needs pump and density".into());
        }
        if !(cavity.k_max_factor > 1.0) {
            m.push(format!(
                "cavity.k_max_factor must exceed 1, got {}",
                cavity.k_max_factor
            ));
        }
    }
}

fn check_amplitudes(config: &ScenarioConfig, m: &mut Vec<String>) {
    let amps = &config.single_well.amplitudes;
    let total: f64 = amps.iter().map(|a| a[0] * a[0] + a[1] * a[1]).sum();
    if amps.is_empty() || (total - 1.0).abs() > 1e-9 {
        m.push(format!("single_well.amplitudes must be normalized, Σ|c_n|² = {total}"));
    }
}

fn check_tunneling(config: &ScenarioConfig, m: &mut Vec<String>) {
    let tun = &config.tunneling;
    if !(tun.alpha > 0.0 && tun.alpha.is_finite()) {
        m.push(format!("tunneling.alpha must be positive, got {}", tun.alpha));
    }
    match tun.delta {
        Some(d) if !d.is_finite() => m.push("tunneling.delta must be finite".into()),
        None if !matches!(config.geometry, Some(TrapGeometry::DoubleWell { .. })) => {
            m.push("tunneling.delta: give it explicitly or provide a double_well geometry".into())
        }
        _ => {}
    }
    if let Some(n) = tun.n_ref {
        if n < 2 {
            m.push(format!("tunneling.n_ref must be at least 2, got {n}"));
        }
    }
}

fn check_grid_source(config: &ScenarioConfig, m: &mut Vec<String>) {
    if config.modes.is_none()
        && (config.pump.is_none() || config.geometry.is_none() || config.density.is_none() || config.grid.is_none())
    {
        m.push("modes: give explicit modes or all of pump, geometry, density and grid".into());
    }
}

impl ScenarioConfig {
    /// Pump frequency, or 1 without a pump.
    pub fn pump_frequency(&self) -> f64 {
        self.pump.map_or(1.0, |p| p.pump_frequency)
    }

    pub fn mode_grid(&self) -> crate::Result<ModeGrid> {
        match &self.modes {
            Some(modes) => {
                let list: Vec<_> = modes
                    .iter()
                    .map(|m| {
                        (
                            m.omega,
                            Complex64::new(m.coupling, m.coupling_im),
                            Complex64::new(m.tunneling, m.tunneling_im),
                        )
                    })
                    .collect();
                ModeGrid::explicit(self.pump_frequency(), &list)
            }
            None => {
                let missing = || crate::Error::InvalidArgument("no mode source".into());
                build_mode_grid(
                    self.pump.as_ref().ok_or_else(missing)?,
                    self.geometry.as_ref().ok_or_else(missing)?,
                    self.density.as_ref().ok_or_else(missing)?,
                    self.grid.ok_or_else(missing)?,
                    self.units,
                )
            }
        }
    }

    pub fn delta(&self) -> crate::Result<f64> {
        match (self.tunneling.delta, &self.geometry) {
            (Some(d), _) => Ok(d),
            (None, Some(g)) => splitting_delta(g, self.units.hbar),
            (None, None) => Err(crate::Error::InvalidArgument("no tunneling splitting".into())),
        }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form,
    /// ignoring the output section.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputSpec::default();
        let text = serde_json::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        hex::encode(digest)[..16].to_string()
    }
}

/// One concrete config of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// `path=value` pairs joined by `;`, empty without a sweep.
    pub label: String,
    pub config: ScenarioConfig,
}

/// Cartesian product of the sweep axes, first axis slowest.
pub fn sweep_points(config: &ScenarioConfig) -> Result<Vec<SweepPoint>, ConfigError> {
    let mut base = config.clone();
    base.sweep.clear();
    let template = serde_json::to_value(&base).expect("config serializes");
    let mut messages = Vec::new();
    for axis in &config.sweep {
        if let Err(e) = lookup(&template, &axis.parameter) {
            messages.push(format!("sweep parameter {}: {e}", axis.parameter));
        }
    }
    if !messages.is_empty() {
        return Err(ConfigError { messages });
    }

    let mut points = vec![(String::new(), template)];
    for axis in &config.sweep {
        let mut next = Vec::with_capacity(points.len() * axis.values.len());
        for (label, value) in &points {
            for &v in &axis.values {
                let mut value = value.clone();
                set(&mut value, &axis.parameter, v);
                let piece = format!("{}={v}", axis.parameter);
                let label = if label.is_empty() {
                    piece
                } else {
                    format!("{label};{piece}")
                };
                next.push((label, value));
            }
        }
        points = next;
    }
    points
        .into_iter()
        .map(|(label, value)| {
            let config: ScenarioConfig = serde_json::from_value(value).map_err(|e| ConfigError {
                messages: vec![format!("sweep point {label}: {e}")],
            })?;
            Ok(SweepPoint { label, config })
        })
        .collect()
}

fn lookup<'a>(root: &'a Value, path: &str) -> Result<&'a Value, String> {
    let mut node = root;
    for segment in path.split('.') {
        node = match node {
            Value::Object(map) => map.get(segment).ok_or_else(|| format!("no field `{segment}`"))?,
            Value::Array(items) => segment
                .parse::<usize>()
                .ok()
                .and_then(|i| items.get(i))
                .ok_or_else(|| format!("no element `{segment}`"))?,
            _ => return Err(format!("`{segment}` is below a non-container value")),
        };
    }
    match node {
        Value::Number(_) | Value::Null => Ok(node),
        _ => Err("not a numeric parameter".into()),
    }
}

fn set(root: &mut Value, path: &str, v: f64) {
    let mut node = root;
    for segment in path.split('.') {
        node = match node {
            Value::Object(map) => map.get_mut(segment).expect("path checked"),
            Value::Array(items) => &mut items[segment.parse::<usize>().expect("path checked")],
            _ => unreachable!("path checked"),
        };
    }
    *node = if v.fract() == 0.0 && v.abs() < 9e15 && matches!(node, Value::Number(n) if n.is_u64() || n.is_i64()) {
        Value::from(v as i64)
    } else {
        Value::from(v)
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{ "scenario": "fig1a" }"#;

    #[test]
    fn minimal_fig1a_gets_defaults() {
        let c = validate_config(MINIMAL).unwrap();
        assert_eq!(c.times, TimeSpec::default());
        assert_eq!(c.units, Units::default());
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.output.format, OutputFormat::Csv);
        assert_eq!(c.sweep[0].parameter, "cavity.lambda");
        assert_eq!(c.sweep[0].values, vec![1e-3, 5e-3, 2e-2]);
        assert_eq!(sweep_points(&c).unwrap().len(), 3);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = validate_config(r#"{ "scenario": "fig1a", "omega0_typo": 1 }"#).unwrap_err();
        assert!(err.messages[0].contains("omega0_typo"), "{err}");
        assert!(err.messages[0].contains("line 1"), "{err}");
    }

    #[test]
    fn zero_detuning_is_named() {
        let raw = r#"{
            "scenario": "fig1a",
            "cavity": { "lambda": 0.01 },
            "pump": { "rabi_frequency": 1, "detuning": 0, "pump_frequency": 1 }
        }"#;
        let err = validate_config(raw).unwrap_err();
        assert!(
            err.messages
                .iter()
                .any(|m| m.contains("pump") && m.contains("detuning")),
            "{err}"
        );
    }

    #[test]
    fn violations_are_aggregated() {
        let raw = r#"{
            "scenario": "single_well",
            "times": { "t_end": -1, "steps": 1 },
            "single_well": { "amplitudes": [[1, 0], [1, 0]] }
        }"#;
        let err = validate_config(raw).unwrap_err();
        assert!(err.messages.len() >= 4, "{err}");
    }

    #[test]
    fn comments_are_stripped() {
        let raw = "// fig 1a\n{\n  # default sweep\n  \"scenario\": \"fig1a\"\n}\n";
        assert!(validate_config(raw).is_ok());
        let err = validate_config("// c\n{\n \"scenario\": \"fig1a\",\n \"bogus\": 1\n}").unwrap_err();
        assert!(err.messages[0].contains("line 4"), "{err}");
    }

    #[test]
    fn sweep_paths_must_exist() {
        let raw = r#"{ "scenario": "fig1a", "cavity": { "lambda": 0.1 },
                       "sweep": [{ "parameter": "cavity.lambada", "values": [1] }] }"#;
        let err = validate_config(raw).unwrap_err();
        assert!(err.messages[0].contains("lambada"), "{err}");
    }

    #[test]
    fn sweep_points_are_validated() {
        let raw = r#"{ "scenario": "fig1a", "cavity": { "lambda": 0.1 },
                       "sweep": [{ "parameter": "cavity.lambda", "values": [0.1, -1] }] }"#;
        let err = validate_config(raw).unwrap_err();
        assert!(err.messages[0].contains("cavity.lambda=-1"), "{err}");
    }

    #[test]
    fn product_sweep_and_integer_fields() {
        let raw = r#"{ "scenario": "fig1a", "cavity": { "lambda": 0.1 },
                       "sweep": [{ "parameter": "cavity.lambda", "values": [0.1, 0.2] },
                                 { "parameter": "cavity.n", "values": [1, 2, 3] }] }"#;
        let c = validate_config(raw).unwrap();
        let points = sweep_points(&c).unwrap();
        assert_eq!(points.len(), 6);
        assert_eq!(points[5].config.cavity.n, 3);
        assert_eq!(points[5].label, "cavity.lambda=0.2;cavity.n=3");
    }

    #[test]
    fn hash_ignores_output_and_is_stable() {
        let a = validate_config(MINIMAL).unwrap();
        let mut b = a.clone();
        b.output.directory = Some("elsewhere".into());
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
        let mut c = a.clone();
        c.times.steps = 10;
        assert_ne!(a.hash(), c.hash());
    }
}
