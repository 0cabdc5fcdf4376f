//! Run configuration read from TOML. Relative paths resolve against the
//! directory of the config file.

use crate::error::CliError;
use crate::ingest::SeriesKind;
use flexplan_core::model::{MarketMode, Objective};
use flexplan_core::studies::{default_heatmap_scales, SweepParameter};
use flexplan_core::weather::{PvSpec, WindSiteSpec};
use flexplan_core::{ProcessSpec, TechEconSpec};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputPaths {
    pub da_price: Option<PathBuf>,
    pub id_price: Option<PathBuf>,
    pub wind_speed: Option<PathBuf>,
    pub irradiance: Option<PathBuf>,
    pub gwi: Option<PathBuf>,
    /// Turbine curve `v_norm,q_rel`; the bundled generic curve when absent.
    pub wind_curve: Option<PathBuf>,
    /// Previously written scenario tree; skips ingestion and clustering.
    pub tree: Option<PathBuf>,
    /// Seeded synthetic days instead of files, for demonstrations.
    pub synthetic_days: Option<usize>,
}

impl InputPaths {
    pub fn series(&self, kind: SeriesKind) -> Option<&PathBuf> {
        match kind {
            SeriesKind::DaPrice => self.da_price.as_ref(),
            SeriesKind::IdPrice => self.id_price.as_ref(),
            SeriesKind::WindSpeed => self.wind_speed.as_ref(),
            SeriesKind::Irradiance => self.irradiance.as_ref(),
            SeriesKind::Gwi => self.gwi.as_ref(),
        }
    }

    fn paths_mut(&mut self) -> [&mut Option<PathBuf>; 7] {
        [
            &mut self.da_price,
            &mut self.id_price,
            &mut self.wind_speed,
            &mut self.irradiance,
            &mut self.gwi,
            &mut self.wind_curve,
            &mut self.tree,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Simultaneous,
    IdOnly,
}

impl From<ModeName> for MarketMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Simultaneous => MarketMode::Simultaneous,
            ModeName::IdOnly => MarketMode::IdOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveName {
    Tac,
    Gwi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterName {
    Oversizing,
    MinPartLoad,
    StorageHours,
    RampLimit,
    CapacityScale,
}

impl From<ParameterName> for SweepParameter {
    fn from(p: ParameterName) -> Self {
        match p {
            ParameterName::Oversizing => SweepParameter::Oversizing,
            ParameterName::MinPartLoad => SweepParameter::MinPartLoad,
            ParameterName::StorageHours => SweepParameter::StorageHours,
            ParameterName::RampLimit => SweepParameter::RampLimit,
            ParameterName::CapacityScale => SweepParameter::CapacityScale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    pub pareto_points: usize,
    pub sweep_parameter: ParameterName,
    /// Explicit sweep grid; evenly spaced defaults when absent.
    pub sweep_values: Option<Vec<f64>>,
    pub sweep_points: usize,
    pub heatmap_oversizing: Vec<f64>,
    pub heatmap_scale: Vec<f64>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            pareto_points: 7,
            sweep_parameter: ParameterName::Oversizing,
            sweep_values: None,
            sweep_points: 5,
            heatmap_oversizing: vec![0.0, 0.1, 0.2, 0.3, 0.4],
            heatmap_scale: default_heatmap_scales(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub inputs: InputPaths,
    pub process: ProcessSpec,
    /// Technology and economic data; reference data sized to the process when absent.
    pub econ: Option<TechEconSpec>,
    pub wind_site: WindSiteSpec,
    pub pv: PvSpec,
    pub clusters: usize,
    pub seed: u64,
    pub market_mode: ModeName,
    pub objective: ObjectiveName,
    /// Upper bound on annual GWI in kgCO2/a; turns a TAC solve into an epsilon-constraint solve.
    pub gwi_bound: Option<f64>,
    pub studies: StudyConfig,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: InputPaths::default(),
            process: ProcessSpec::reference(),
            econ: None,
            wind_site: WindSiteSpec::reference(),
            pv: PvSpec::reference(),
            clusters: 10,
            seed: 0,
            market_mode: ModeName::Simultaneous,
            objective: ObjectiveName::Tac,
            gwi_bound: None,
            studies: StudyConfig::default(),
            out: None,
        }
    }
}

impl RunConfig {
    /// Reads and checks a config file; relative paths become relative to its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        if !path.is_file() {
            return Err(CliError::config(
                "--config",
                format!("file not found: {}", path.display()),
            ));
        }
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.into(),
            source,
        })?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let field = e
                .span()
                .map_or_else(|| "config".into(), |s| field_at(text, s.start));
            CliError::config(field, msg)
        })?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        for p in self.inputs.paths_mut().into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(out) = &mut self.out {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
    }

    pub fn econ(&self) -> TechEconSpec {
        self.econ
            .unwrap_or_else(|| TechEconSpec::reference(self.process.nominal_power))
    }

    pub fn objective(&self) -> Objective {
        match (self.objective, self.gwi_bound) {
            (ObjectiveName::Gwi, _) => Objective::Gwi,
            (ObjectiveName::Tac, Some(b)) => Objective::EpsilonConstraint(b),
            (ObjectiveName::Tac, None) => Objective::Tac,
        }
    }

    /// Checks the model parameters; input files are checked when used.
    pub fn check(&self) -> Result<(), CliError> {
        if self.clusters == 0 {
            return Err(CliError::config("clusters", "must be at least 1"));
        }
        if let Some(v) = self.process.violations().first() {
            return Err(CliError::config("process", v.to_string()));
        }
        if let Some(v) = self.econ().violations().first() {
            return Err(CliError::config("econ", v.to_string()));
        }
        self.wind_site
            .check()
            .map_err(|e| CliError::config("wind_site", e.to_string()))?;
        self.pv
            .check()
            .map_err(|e| CliError::config("pv", e.to_string()))?;
        if let Some(b) = self.gwi_bound {
            if !b.is_finite() {
                return Err(CliError::config("gwi_bound", "must be finite"));
            }
        }
        if self.inputs.synthetic_days == Some(0) {
            return Err(CliError::config(
                "inputs.synthetic_days",
                "must be at least 1",
            ));
        }
        if self.studies.pareto_points < 2 {
            return Err(CliError::config(
                "studies.pareto_points",
                "must be at least 2",
            ));
        }
        if self.studies.heatmap_oversizing.is_empty() || self.studies.heatmap_scale.is_empty() {
            return Err(CliError::config(
                "studies.heatmap_oversizing",
                "heatmap axes must not be empty",
            ));
        }
        Ok(())
    }

    /// Requires a file path for `field` and checks that it exists.
    pub fn existing(path: Option<&PathBuf>, field: &str) -> Result<PathBuf, CliError> {
        let p = path.ok_or_else(|| CliError::config(field, "no input path configured"))?;
        if !p.is_file() {
            return Err(CliError::config(
                field,
                format!("input file not found: {}", p.display()),
            ));
        }
        Ok(p.clone())
    }
}

/// Best-effort dotted key of the TOML entry containing byte offset `at`.
fn field_at(text: &str, at: usize) -> String {
    let before = &text[..at.min(text.len())];
    let table = before
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('[') && l.ends_with(']'))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').trim().to_string());
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let line = text[line_start..].lines().next().unwrap_or("");
    let key = line
        .split_once('=')
        .map(|(k, _)| k.trim().to_string())
        .filter(|k| !k.starts_with('['));
    match (table, key) {
        (Some(t), Some(k)) => format!("{t}.{k}"),
        (Some(t), None) => t,
        (None, Some(k)) => k,
        (None, None) => "config".into(),
    }
}
