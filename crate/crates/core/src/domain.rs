//! Core data types shared across the crate.
//!
//! Everything here uses one internal unit system: power in MW, energy in MWh,
//! money in EUR and emissions in kgCO2. Per-kW catalogue figures are converted
//! once, in [`TechEconSpec::from_catalogue`].

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Quarter-hours per scheduling day.
pub const QUARTERS_PER_DAY: usize = 96;
/// Hours per scheduling day.
pub const HOURS_PER_DAY: usize = 24;
/// Length of one quarter-hour time step in hours.
pub const DT_HOURS: f64 = 0.25;
/// Days per year used for annualizing daily operating results.
pub const DAYS_PER_YEAR: f64 = 365.0;

const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resolution {
    QuarterHour,
    Hour,
}

impl Resolution {
    pub fn steps(self) -> usize {
        match self {
            Resolution::QuarterHour => QUARTERS_PER_DAY,
            Resolution::Hour => HOURS_PER_DAY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "EUR/MWh")]
    EurPerMwh,
    #[serde(rename = "MW")]
    Mw,
    #[serde(rename = "kgCO2/MWh")]
    KgCo2PerMwh,
    #[serde(rename = "1")]
    Dimensionless,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::EurPerMwh => "EUR/MWh",
            Unit::Mw => "MW",
            Unit::KgCo2PerMwh => "kgCO2/MWh",
            Unit::Dimensionless => "1",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "EUR/MWh" => Ok(Unit::EurPerMwh),
            "MW" => Ok(Unit::Mw),
            "kgCO2/MWh" => Ok(Unit::KgCo2PerMwh),
            "1" | "" | "-" | "dimensionless" => Ok(Unit::Dimensionless),
            other => Err(format!("unknown unit '{other}'")),
        }
    }
}

/// One day of a time series at a fixed resolution.
///
/// Construction does not enforce the invariants so that raw data can be
/// inspected by [`validate`]; all pipeline stages validate before use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyProfile {
    pub day_id: String,
    pub resolution: Resolution,
    pub unit: Unit,
    pub values: Vec<f64>,
}

impl DailyProfile {
    pub fn new(
        day_id: impl Into<String>,
        resolution: Resolution,
        unit: Unit,
        values: Vec<f64>,
    ) -> Self {
        Self {
            day_id: day_id.into(),
            resolution,
            unit,
            values,
        }
    }

    pub fn constant(
        day_id: impl Into<String>,
        resolution: Resolution,
        unit: Unit,
        value: f64,
    ) -> Self {
        Self::new(day_id, resolution, unit, vec![value; resolution.steps()])
    }

    /// Repeats each hourly value four times. Quarter-hour profiles are returned unchanged.
    pub fn to_quarter_hours(&self) -> DailyProfile {
        match self.resolution {
            Resolution::QuarterHour => self.clone(),
            Resolution::Hour => DailyProfile {
                day_id: self.day_id.clone(),
                resolution: Resolution::QuarterHour,
                unit: self.unit,
                values: self.values.iter().flat_map(|&v| [v; 4]).collect(),
            },
        }
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let expected = self.resolution.steps();
        if self.values.len() != expected {
            out.push(Violation::new(
                format!("profile {}", self.day_id),
                ViolationKind::LengthMismatch,
                format!(
                    "length mismatch: expected {expected} values, found {}",
                    self.values.len()
                ),
            ));
        }
        if let Some(pos) = self.values.iter().position(|v| !v.is_finite()) {
            out.push(Violation::new(
                format!("profile {}", self.day_id),
                ViolationKind::NonFinite,
                format!("non-finite value at step {pos}"),
            ));
        }
        out
    }
}

/// Hour index covering a quarter-hour step.
#[inline]
pub fn hour_of_quarter(t: usize) -> usize {
    t / 4
}

/// Generalized flexible production process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    /// Nominal power intake in MW.
    pub nominal_power: f64,
    /// Admissible intake above nominal, as a fraction of nominal.
    pub oversizing: f64,
    /// Lowest admissible intake, as a fraction of nominal.
    pub min_part_load: f64,
    /// Product storage capacity in hours of nominal production.
    pub storage_hours: f64,
    /// Maximum intake change per hour, as a fraction of nominal.
    pub ramp_limit: f64,
}

impl ProcessSpec {
    /// Reference process: 2.74 MW, 20 % oversizing, 50 % minimal part load,
    /// 3 h product storage, 25 %/h ramping.
    pub fn reference() -> Self {
        Self {
            nominal_power: 2.74,
            oversizing: 0.20,
            min_part_load: 0.50,
            storage_hours: 3.0,
            ramp_limit: 0.25,
        }
    }

    /// Steady-state process pinned at nominal power.
    pub fn inflexible(nominal_power: f64) -> Self {
        Self {
            nominal_power,
            oversizing: 0.0,
            min_part_load: 1.0,
            storage_hours: 0.0,
            ramp_limit: 0.0,
        }
    }

    pub fn max_power(&self) -> f64 {
        self.nominal_power * (1.0 + self.oversizing)
    }

    pub fn min_power(&self) -> f64 {
        self.nominal_power * self.min_part_load
    }

    /// Product storage capacity in MWh of intake equivalent.
    pub fn storage_capacity(&self) -> f64 {
        self.storage_hours * self.nominal_power
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let ctx = "process";
        let finite = [
            self.nominal_power,
            self.oversizing,
            self.min_part_load,
            self.storage_hours,
            self.ramp_limit,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            out.push(Violation::new(
                ctx,
                ViolationKind::NonFinite,
                "non-finite process parameter",
            ));
            return out;
        }
        if self.nominal_power <= 0.0 {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "nominal power must be > 0",
            ));
        }
        if self.min_part_load < 0.0 || self.min_part_load > 1.0 {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "minimal part load must lie in [0, 1]",
            ));
        }
        if self.oversizing < 0.0 {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "oversizing must be >= 0",
            ));
        }
        if self.storage_hours < 0.0 {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "storage hours must be >= 0",
            ));
        }
        if self.ramp_limit < 0.0 {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "ramp limit must be >= 0",
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Technology {
    Pv,
    Wind,
    Battery,
}

impl Technology {
    pub const ALL: [Technology; 3] = [Technology::Pv, Technology::Wind, Technology::Battery];

    pub fn name(self) -> &'static str {
        match self {
            Technology::Pv => "pv",
            Technology::Wind => "wind",
            Technology::Battery => "battery",
        }
    }
}

/// Cost, lifetime and embodied-emission data for one technology, in internal
/// units (per MW for generators, per MWh for the battery).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TechParams {
    /// Investment cost in EUR per MW (PV, wind) or EUR per MWh (battery).
    pub capex: f64,
    /// Lifetime in years.
    pub lifetime: f64,
    /// Annual maintenance cost in EUR per MW·a or EUR per MWh·a.
    pub maintenance: f64,
    /// Embodied emissions in kgCO2 per MW or per MWh.
    pub gwi_embodied: f64,
    /// Admissible capacity in MW (or MWh for the battery).
    pub capacity_max: f64,
}

/// Catalogue entry as usually published: per kW(p) or per kWh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub capex_per_kw: f64,
    pub lifetime: f64,
    pub maintenance_per_kw: f64,
    pub gwi_per_kw: f64,
    pub capacity_max: f64,
}

impl From<CatalogueEntry> for TechParams {
    fn from(e: CatalogueEntry) -> Self {
        TechParams {
            capex: e.capex_per_kw * 1000.0,
            lifetime: e.lifetime,
            maintenance: e.maintenance_per_kw * 1000.0,
            gwi_embodied: e.gwi_per_kw * 1000.0,
            capacity_max: e.capacity_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TechEconSpec {
    pub pv: TechParams,
    pub wind: TechParams,
    pub battery: TechParams,
    /// Interest rate for annuitizing investments.
    pub interest_rate: f64,
    /// Grid fee on withdrawn electricity in EUR/MWh.
    pub grid_fee: f64,
    /// Battery charge/discharge duration at full rate, in hours.
    pub battery_rate_hours: f64,
    pub eta_in: f64,
    pub eta_out: f64,
}

impl TechEconSpec {
    pub fn from_catalogue(
        pv: CatalogueEntry,
        wind: CatalogueEntry,
        battery: CatalogueEntry,
        interest_rate: f64,
        grid_fee: f64,
        battery_rate_hours: f64,
        round_trip_efficiency: f64,
    ) -> Self {
        let eta = round_trip_efficiency.sqrt();
        Self {
            pv: pv.into(),
            wind: wind.into(),
            battery: battery.into(),
            interest_rate,
            grid_fee,
            battery_rate_hours,
            eta_in: eta,
            eta_out: eta,
        }
    }

    /// German 2022 reference data for a process of the given nominal power.
    ///
    /// PV and wind are capped at the nominal power, the battery at the size
    /// whose full discharge rate equals nominal power. Embodied emission
    /// factors are illustrative placeholders of realistic magnitude; studies
    /// that report GWI should supply licensed life-cycle data.
    pub fn reference(nominal_power: f64) -> Self {
        let rate = 4.0;
        Self::from_catalogue(
            CatalogueEntry {
                capex_per_kw: 927.0,
                lifetime: 25.0,
                maintenance_per_kw: 17.0,
                gwi_per_kw: 1200.0,
                capacity_max: nominal_power,
            },
            CatalogueEntry {
                capex_per_kw: 1113.0,
                lifetime: 25.0,
                maintenance_per_kw: 13.0,
                gwi_per_kw: 700.0,
                capacity_max: nominal_power,
            },
            CatalogueEntry {
                capex_per_kw: 550.0,
                lifetime: 15.0,
                maintenance_per_kw: 20.0,
                gwi_per_kw: 110.0,
                capacity_max: rate * nominal_power,
            },
            0.08,
            29.6,
            rate,
            0.9,
        )
    }

    pub fn tech(&self, tech: Technology) -> &TechParams {
        match tech {
            Technology::Pv => &self.pv,
            Technology::Wind => &self.wind,
            Technology::Battery => &self.battery,
        }
    }

    pub fn tech_mut(&mut self, tech: Technology) -> &mut TechParams {
        match tech {
            Technology::Pv => &mut self.pv,
            Technology::Wind => &mut self.wind,
            Technology::Battery => &mut self.battery,
        }
    }

    /// Same data with every admissible capacity multiplied by `factor`.
    pub fn with_capacity_scale(&self, factor: f64) -> Self {
        let mut out = *self;
        for tech in Technology::ALL {
            out.tech_mut(tech).capacity_max *= factor;
        }
        out
    }

    /// Same data with no local energy system admissible.
    pub fn without_system(&self) -> Self {
        self.with_capacity_scale(0.0)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let ctx = "tech-econ";
        if !(self.interest_rate > 0.0 && self.interest_rate.is_finite()) {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "interest rate must be > 0",
            ));
        }
        for tech in Technology::ALL {
            let p = self.tech(tech);
            let name = tech.name();
            if !(p.lifetime > 0.0 && p.lifetime.is_finite()) {
                out.push(Violation::new(
                    ctx,
                    ViolationKind::OutOfRange,
                    format!("{name} lifetime must be > 0"),
                ));
            }
            if !(p.capacity_max >= 0.0 && p.capacity_max.is_finite()) {
                out.push(Violation::new(
                    ctx,
                    ViolationKind::OutOfRange,
                    format!("{name} capacity limit must be finite and >= 0"),
                ));
            }
            if !(p.capex.is_finite() && p.maintenance.is_finite() && p.gwi_embodied.is_finite()) {
                out.push(Violation::new(
                    ctx,
                    ViolationKind::NonFinite,
                    format!("{name} cost data not finite"),
                ));
            }
        }
        if !(self.battery_rate_hours > 0.0 && self.battery_rate_hours.is_finite()) {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "battery rate must be > 0 h",
            ));
        }
        if !(self.grid_fee.is_finite()) {
            out.push(Violation::new(
                ctx,
                ViolationKind::NonFinite,
                "grid fee not finite",
            ));
        }
        let eta = self.eta_in * self.eta_out;
        if !(eta > 0.0) || !self.eta_in.is_finite() || !self.eta_out.is_finite() {
            out.push(Violation::new(
                ctx,
                ViolationKind::OutOfRange,
                "battery efficiencies must be > 0",
            ));
        } else if eta > 1.0 {
            out.push(Violation::new(
                ctx,
                ViolationKind::EfficiencyAboveOne,
                format!("efficiency > 1: eta_in*eta_out = {eta}"),
            ));
        }
        out
    }
}

/// Second-stage node: one day-ahead price realization shared by its members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterNode {
    pub cluster_id: usize,
    pub da_price: DailyProfile,
    pub members: Vec<usize>,
}

/// Third-stage node: one historical day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioNode {
    pub scenario_id: usize,
    pub cluster_id: usize,
    pub probability: f64,
    pub id_price: DailyProfile,
    pub pv: DailyProfile,
    pub wind: DailyProfile,
    pub gwi: DailyProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTree {
    pub clusters: Vec<ClusterNode>,
    pub scenarios: Vec<ScenarioNode>,
}

impl ScenarioTree {
    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn n_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    pub fn cluster(&self, id: usize) -> Option<&ClusterNode> {
        self.clusters.iter().find(|c| c.cluster_id == id)
    }

    /// Position of the scenario's cluster within `clusters`.
    pub fn cluster_index_of(&self, scenario: &ScenarioNode) -> Option<usize> {
        self.clusters
            .iter()
            .position(|c| c.cluster_id == scenario.cluster_id)
    }

    /// Sum of member probabilities of the cluster at position `idx`.
    pub fn cluster_weight(&self, idx: usize) -> f64 {
        let id = self.clusters[idx].cluster_id;
        self.scenarios
            .iter()
            .filter(|s| s.cluster_id == id)
            .map(|s| s.probability)
            .sum()
    }

    /// Single-scenario tree whose day-ahead prices are the hourly means of `id_price`.
    pub fn single_day(
        id_price: DailyProfile,
        pv: DailyProfile,
        wind: DailyProfile,
        gwi: DailyProfile,
    ) -> Self {
        let q = id_price.to_quarter_hours();
        let da: Vec<f64> = q
            .values
            .chunks(4)
            .map(|c| c.iter().sum::<f64>() / 4.0)
            .collect();
        let day = q.day_id.clone();
        ScenarioTree {
            clusters: vec![ClusterNode {
                cluster_id: 0,
                da_price: DailyProfile::new(day, Resolution::Hour, Unit::EurPerMwh, da),
                members: vec![0],
            }],
            scenarios: vec![ScenarioNode {
                scenario_id: 0,
                cluster_id: 0,
                probability: 1.0,
                id_price: q,
                pv,
                wind,
                gwi,
            }],
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let ctx = "scenario tree";
        if self.scenarios.is_empty() {
            out.push(Violation::new(
                ctx,
                ViolationKind::Structure,
                "tree has no scenarios",
            ));
            return out;
        }
        let total: f64 = self.scenarios.iter().map(|s| s.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            out.push(Violation::new(
                ctx,
                ViolationKind::Probability,
                format!("probabilities sum to {total}, not 1"),
            ));
        }
        if self.scenarios.iter().any(|s| !(s.probability >= 0.0)) {
            out.push(Violation::new(
                ctx,
                ViolationKind::Probability,
                "negative probability",
            ));
        }
        let mut ids = HashSet::new();
        for c in &self.clusters {
            if !ids.insert(c.cluster_id) {
                out.push(Violation::new(
                    ctx,
                    ViolationKind::Structure,
                    format!("duplicate cluster id {}", c.cluster_id),
                ));
            }
            if c.members.is_empty() {
                out.push(Violation::new(
                    ctx,
                    ViolationKind::Structure,
                    format!("cluster {} has no members", c.cluster_id),
                ));
            }
            out.extend(expect_profile(
                &c.da_price,
                Resolution::Hour,
                Unit::EurPerMwh,
            ));
        }
        let mut scenario_ids = HashSet::new();
        for s in &self.scenarios {
            if !scenario_ids.insert(s.scenario_id) {
                out.push(Violation::new(
                    ctx,
                    ViolationKind::Structure,
                    format!("duplicate scenario id {}", s.scenario_id),
                ));
            }
            match self.cluster(s.cluster_id) {
                None => out.push(Violation::new(
                    ctx,
                    ViolationKind::Structure,
                    format!(
                        "scenario {} refers to missing cluster {}",
                        s.scenario_id, s.cluster_id
                    ),
                )),
                Some(c) if !c.members.contains(&s.scenario_id) => out.push(Violation::new(
                    ctx,
                    ViolationKind::Structure,
                    format!(
                        "scenario {} not listed in cluster {}",
                        s.scenario_id, s.cluster_id
                    ),
                )),
                Some(_) => {}
            }
            out.extend(expect_profile(
                &s.id_price,
                Resolution::QuarterHour,
                Unit::EurPerMwh,
            ));
            out.extend(expect_profile(
                &s.gwi,
                Resolution::QuarterHour,
                Unit::KgCo2PerMwh,
            ));
            for p in [&s.pv, &s.wind] {
                out.extend(expect_profile(
                    p,
                    Resolution::QuarterHour,
                    Unit::Dimensionless,
                ));
                if p.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    out.push(Violation::new(
                        format!("profile {}", p.day_id),
                        ViolationKind::OutOfRange,
                        "relative power output outside [0, 1]",
                    ));
                }
            }
        }
        for c in &self.clusters {
            for m in &c.members {
                if !self
                    .scenarios
                    .iter()
                    .any(|s| s.scenario_id == *m && s.cluster_id == c.cluster_id)
                {
                    out.push(Violation::new(
                        ctx,
                        ViolationKind::Structure,
                        format!("cluster {} lists unknown member {m}", c.cluster_id),
                    ));
                }
            }
        }
        out
    }
}

fn expect_profile(p: &DailyProfile, res: Resolution, unit: Unit) -> Vec<Violation> {
    let mut out = p.violations();
    if p.resolution != res {
        out.push(Violation::new(
            format!("profile {}", p.day_id),
            ViolationKind::ResolutionMismatch,
            format!("expected {res:?} resolution, found {:?}", p.resolution),
        ));
    }
    if p.unit != unit {
        out.push(Violation::new(
            format!("profile {}", p.day_id),
            ViolationKind::UnitMismatch,
            format!("unit mismatch: expected {unit}, found {}", p.unit),
        ));
    }
    out
}

/// Per-scenario operating schedule. Quarter-hour series have 96 entries,
/// state series (battery charge, product storage) 97.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSchedule {
    pub scenario_id: usize,
    pub cluster_id: usize,
    pub probability: f64,
    pub process_power: Vec<f64>,
    /// Day-ahead position of the scenario's cluster, per hour (MW, purchases > 0).
    pub da_trade: Vec<f64>,
    /// Intraday position per quarter-hour (MW, purchases > 0).
    pub id_trade: Vec<f64>,
    pub charge: Vec<f64>,
    pub discharge: Vec<f64>,
    pub state_of_charge: Vec<f64>,
    pub product_storage: Vec<f64>,
    pub pv_power: Vec<f64>,
    pub wind_power: Vec<f64>,
    /// Grid-fee auxiliaries as returned by the solver.
    pub grid_fee_aux: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub capex: f64,
    pub opex_el: f64,
    pub opex_grid: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.capex + self.opex_el + self.opex_grid
    }
}

/// Annual expected trade volumes in MWh/a. Sales are reported as positive magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TradeTotals {
    pub da_purchases: f64,
    pub da_sales: f64,
    pub id_purchases: f64,
    pub id_sales: f64,
}

impl TradeTotals {
    pub fn total_purchases(&self) -> f64 {
        self.da_purchases + self.id_purchases
    }

    pub fn total_sales(&self) -> f64 {
        self.da_sales + self.id_sales
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub q_pv: f64,
    pub q_wind: f64,
    pub q_batt: f64,
    pub tac: f64,
    pub gwi: f64,
    pub breakdown: CostBreakdown,
    pub trades: TradeTotals,
    pub schedules: Vec<ScenarioSchedule>,
}

impl DesignResult {
    pub fn capacity(&self, tech: Technology) -> f64 {
        match tech {
            Technology::Pv => self.q_pv,
            Technology::Wind => self.q_wind,
            Technology::Battery => self.q_batt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    LengthMismatch,
    NonFinite,
    UnitMismatch,
    ResolutionMismatch,
    OutOfRange,
    EfficiencyAboveOne,
    Probability,
    Structure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub context: String,
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    pub fn new(
        context: impl Into<String>,
        kind: ViolationKind,
        message: impl Into<String>,
    ) -> Self {
        Self {
            context: context.into(),
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.context, self.message)
    }
}

/// Checks every type invariant and returns the violations found.
///
/// Profiles of one series must share a unit; a profile whose unit differs
/// from the first profile of the collection is reported as a unit mismatch.
pub fn validate<'a, I>(profiles: I, process: &ProcessSpec, econ: &TechEconSpec) -> Vec<Violation>
where
    I: IntoIterator<Item = &'a DailyProfile>,
{
    let mut out = Vec::new();
    let mut first_unit: Option<Unit> = None;
    for p in profiles {
        out.extend(p.violations());
        match first_unit {
            None => first_unit = Some(p.unit),
            Some(u) if u != p.unit => out.push(Violation::new(
                format!("profile {}", p.day_id),
                ViolationKind::UnitMismatch,
                format!("unit mismatch: expected {u}, found {}", p.unit),
            )),
            Some(_) => {}
        }
        if p.unit == Unit::Dimensionless && p.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            out.push(Violation::new(
                format!("profile {}", p.day_id),
                ViolationKind::OutOfRange,
                "relative power output outside [0, 1]",
            ));
        }
    }
    out.extend(process.violations());
    out.extend(econ.violations());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_quarter_hour_profile_is_length_mismatch() {
        let p = DailyProfile::new(
            "d1",
            Resolution::QuarterHour,
            Unit::EurPerMwh,
            vec![1.0; 95],
        );
        let v = validate(
            [&p],
            &ProcessSpec::reference(),
            &TechEconSpec::reference(2.74),
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::LengthMismatch);
        assert!(v[0].message.contains("length mismatch"));
    }

    #[test]
    fn reference_process_is_valid() {
        let proc = ProcessSpec::reference();
        assert_eq!(proc.nominal_power, 2.74);
        assert_eq!(proc.oversizing, 0.20);
        assert_eq!(proc.min_part_load, 0.50);
        assert_eq!(proc.storage_hours, 3.0);
        assert_eq!(proc.ramp_limit, 0.25);
        let v = validate(
            std::iter::empty(),
            &proc,
            &TechEconSpec::reference(proc.nominal_power),
        );
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn efficiency_above_one_is_reported() {
        let mut econ = TechEconSpec::reference(1.0);
        econ.eta_in = 1.1;
        econ.eta_out = 1.0;
        let v = econ.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::EfficiencyAboveOne);
        assert!(v[0].message.contains("efficiency > 1"));
    }

    #[test]
    fn non_finite_and_mixed_units_are_reported() {
        let a = DailyProfile::new("a", Resolution::Hour, Unit::EurPerMwh, vec![1.0; 24]);
        let mut vals = vec![0.0; 24];
        vals[3] = f64::NAN;
        let b = DailyProfile::new("b", Resolution::Hour, Unit::Mw, vals);
        let v = validate(
            [&a, &b],
            &ProcessSpec::reference(),
            &TechEconSpec::reference(2.74),
        );
        let kinds: Vec<_> = v.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::NonFinite));
        assert!(kinds.contains(&ViolationKind::UnitMismatch));
    }

    #[test]
    fn process_bounds() {
        let mut p = ProcessSpec::reference();
        p.min_part_load = 1.2;
        assert_eq!(p.violations().len(), 1);
        p = ProcessSpec::reference();
        p.nominal_power = 0.0;
        assert_eq!(p.violations().len(), 1);
    }

    #[test]
    fn catalogue_conversion_to_mw() {
        let econ = TechEconSpec::reference(2.74);
        assert_eq!(econ.pv.capex, 927_000.0);
        assert_eq!(econ.battery.maintenance, 20_000.0);
        assert_eq!(econ.battery.capacity_max, 4.0 * 2.74);
        assert!((econ.eta_in * econ.eta_out - 0.9).abs() < 1e-15);
    }

    #[test]
    fn hourly_expansion_repeats_each_value() {
        let p = DailyProfile::new(
            "d",
            Resolution::Hour,
            Unit::EurPerMwh,
            (0..24).map(f64::from).collect(),
        );
        let q = p.to_quarter_hours();
        assert_eq!(q.values.len(), 96);
        for t in 0..96 {
            assert_eq!(q.values[t], (t / 4) as f64);
            assert_eq!(hour_of_quarter(t), t / 4);
        }
        assert_eq!(q.unit, Unit::EurPerMwh);
    }
}
