//! Deterministic equivalent of the three-stage design and scheduling problem.
//!
//! First stage: PV, wind and battery capacities. Second stage: hourly
//! day-ahead positions, one vector per cluster and therefore shared by all
//! member scenarios. Third stage: quarter-hourly intraday positions, battery
//! operation and process schedule per scenario.
//!
//! Process model: intake between `min_part_load * P` and `(1 + oversizing) * P`
//! without shutdown, ramping limited to `ramp_limit * P` per hour (also across
//! the day boundary), and a product storage in intake-energy units that gains
//! `(p - P) * dt` per quarter with capacity `storage_hours * P`. Storage and
//! battery levels are cyclic over the day.

mod extract;
mod index;
mod objective;

pub use extract::{extract, ExtractError};
pub use index::{DofCensus, VariableIndex};
pub use objective::{annualized_capex, annuity, gwi_objective, production_cost, tac_objective};

use crate::domain::{
    hour_of_quarter, ProcessSpec, ScenarioTree, TechEconSpec, Violation, DAYS_PER_YEAR, DT_HOURS,
    HOURS_PER_DAY, QUARTERS_PER_DAY,
};
use crate::lp::{
    solve_from, LpBuilder, LpError, LpProblem, LpSolution, RowSense, SolveOptions, VarId,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MarketMode {
    /// Intraday trading only; all day-ahead positions are fixed to zero.
    IdOnly,
    Simultaneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Objective {
    Tac,
    Gwi,
    /// Minimize TAC subject to `GWI <= bound` (kgCO2/a).
    EpsilonConstraint(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub market_mode: MarketMode,
    pub objective: Objective,
    pub days_per_year: f64,
}

impl ModelConfig {
    pub fn new(market_mode: MarketMode, objective: Objective) -> Self {
        Self {
            market_mode,
            objective,
            days_per_year: DAYS_PER_YEAR,
        }
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::new(MarketMode::Simultaneous, Objective::Tac)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid input: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("epsilon bound must be finite, got {0}")]
    EpsilonBound(f64),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Assembled LP with both objective vectors kept for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub problem: LpProblem,
    pub index: VariableIndex,
    pub tac: Vec<f64>,
    pub gwi: Vec<f64>,
    pub config: ModelConfig,
    /// Feasible point: no local system, process at nominal power, all
    /// electricity bought intraday.
    pub start: Vec<f64>,
}

impl Model {
    pub fn tac_of(&self, x: &[f64]) -> f64 {
        self.tac.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn gwi_of(&self, x: &[f64]) -> f64 {
        self.gwi.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Solves the LP from [`Model::start`].
    pub fn solve(&self, opts: &SolveOptions) -> LpSolution {
        solve_from(&self.problem, opts, &self.start).expect("start has one value per column")
    }
}

/// Builds the constraint system and attaches the objective selected in `cfg`.
pub fn build(
    tree: &ScenarioTree,
    process: &ProcessSpec,
    econ: &TechEconSpec,
    cfg: &ModelConfig,
) -> Result<Model, ModelError> {
    let mut violations = tree.violations();
    violations.extend(process.violations());
    violations.extend(econ.violations());
    if let Objective::EpsilonConstraint(b) = cfg.objective {
        if !b.is_finite() {
            return Err(ModelError::EpsilonBound(b));
        }
    }
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }

    let (mut b, index) = constraints(tree, process, econ, cfg);
    let (tac, _) = tac_objective(&index, tree, econ, cfg.days_per_year);
    let gwi = gwi_objective(&index, tree, econ, cfg.days_per_year);
    let cost = match cfg.objective {
        Objective::Gwi => &gwi,
        Objective::Tac | Objective::EpsilonConstraint(_) => &tac,
    };
    for (j, &c) in cost.iter().enumerate() {
        b.set_cost(VarId(j), c);
    }
    let mut problem = b.build()?;
    if let Objective::EpsilonConstraint(bound) = cfg.objective {
        problem = epsilon_constraint(problem, &gwi, bound)?;
    }
    let mut start = vec![0.0; index.n_vars];
    let nominal = process.nominal_power;
    for k in 0..index.id.len() {
        start[index.id[k].0] = nominal;
        start[index.power[k].0] = nominal;
        start[index.grid_fee[k].0] = (econ.grid_fee * DT_HOURS * nominal).max(0.0);
    }
    Ok(Model {
        problem,
        index,
        tac,
        gwi,
        config: *cfg,
        start,
    })
}

/// Appends the row `gwi' x <= bound`.
pub fn epsilon_constraint(
    mut problem: LpProblem,
    gwi: &[f64],
    bound: f64,
) -> Result<LpProblem, LpError> {
    if !bound.is_finite() {
        return Ok(problem);
    }
    let coeffs: Vec<(VarId, f64)> = gwi
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(j, &c)| (VarId(j), c))
        .collect();
    problem.push_row("gwi_bound", RowSense::Le, bound, &coeffs)?;
    Ok(problem)
}

fn constraints(
    tree: &ScenarioTree,
    process: &ProcessSpec,
    econ: &TechEconSpec,
    cfg: &ModelConfig,
) -> (LpBuilder, VariableIndex) {
    let n_s = tree.n_scenarios();
    let n_c = tree.n_clusters();
    let nq = n_s * QUARTERS_PER_DAY;
    let mut b = LpBuilder::with_capacity(3 + n_c * HOURS_PER_DAY + 7 * nq, 16 * nq);
    let inf = f64::INFINITY;
    let dt = DT_HOURS;

    let q_pv = b.add_var("Q_PV", 0.0, 0.0, econ.pv.capacity_max);
    let q_wind = b.add_var("Q_W", 0.0, 0.0, econ.wind.capacity_max);
    let q_batt = b.add_var("Q_B", 0.0, 0.0, econ.battery.capacity_max);

    let da_active = cfg.market_mode == MarketMode::Simultaneous;
    let da_bound = if da_active { inf } else { 0.0 };
    let mut da = Vec::with_capacity(n_c * HOURS_PER_DAY);
    for c in &tree.clusters {
        for h in 0..HOURS_PER_DAY {
            da.push(b.add_var(
                format!("q_DA[{},{h}]", c.cluster_id),
                0.0,
                -da_bound,
                da_bound,
            ));
        }
    }

    let cluster_of: Vec<usize> = tree
        .scenarios
        .iter()
        .map(|s| tree.cluster_index_of(s).expect("validated tree"))
        .collect();

    let (pmin, pmax) = (process.min_power(), process.max_power());
    let store_cap = process.storage_capacity();
    let mut id = Vec::with_capacity(nq);
    let mut charge = Vec::with_capacity(nq);
    let mut discharge = Vec::with_capacity(nq);
    let mut soc = Vec::with_capacity(nq);
    let mut power = Vec::with_capacity(nq);
    let mut storage = Vec::with_capacity(nq);
    let mut grid_fee = Vec::with_capacity(nq);
    let mut local_design = Vec::with_capacity(n_s);
    for s in &tree.scenarios {
        let sid = s.scenario_id;
        local_design.push([
            b.add_var(format!("Q_PV[{sid}]"), 0.0, 0.0, econ.pv.capacity_max),
            b.add_var(format!("Q_W[{sid}]"), 0.0, 0.0, econ.wind.capacity_max),
            b.add_var(format!("Q_B[{sid}]"), 0.0, 0.0, econ.battery.capacity_max),
        ]);
        for t in 0..QUARTERS_PER_DAY {
            id.push(b.add_var(format!("q_ID[{sid},{t}]"), 0.0, -inf, inf));
            charge.push(b.add_var(format!("q_in[{sid},{t}]"), 0.0, 0.0, inf));
            discharge.push(b.add_var(format!("q_out[{sid},{t}]"), 0.0, 0.0, inf));
            soc.push(b.add_var(format!("SOC[{sid},{t}]"), 0.0, 0.0, inf));
            power.push(b.add_var(format!("p[{sid},{t}]"), 0.0, pmin, pmax));
            storage.push(b.add_var(format!("m[{sid},{t}]"), 0.0, 0.0, store_cap));
            grid_fee.push(b.add_var(format!("fee[{sid},{t}]"), 0.0, 0.0, inf));
        }
    }
    let index = VariableIndex {
        q_pv,
        q_wind,
        q_batt,
        n_clusters: n_c,
        n_scenarios: n_s,
        cluster_of,
        da,
        id,
        charge,
        discharge,
        soc,
        power,
        storage,
        grid_fee,
        local_design,
        da_active,
        n_vars: b.n_vars(),
    };

    let inv_tau = 1.0 / econ.battery_rate_hours;
    let inv_dt = 1.0 / dt;
    let fee_dt = econ.grid_fee * dt;

    // Day-ahead purchase bound that does not depend on the scenario state.
    if da_active {
        for (c, cl) in tree.clusters.iter().enumerate() {
            let first = index
                .cluster_of
                .iter()
                .position(|&k| k == c)
                .expect("clusters have members");
            let batt = index.local_design[first][2];
            for h in 0..HOURS_PER_DAY {
                b.add_row(
                    format!("da_buy_rate[{},{h}]", cl.cluster_id),
                    RowSense::Le,
                    pmax,
                    [(index.da(c, h), 1.0), (batt, -inv_tau)],
                );
            }
        }
    }

    let ramp = process.ramp_limit * process.nominal_power * dt;
    let ramp_binding = ramp < pmax - pmin;
    for (si, s) in tree.scenarios.iter().enumerate() {
        let sid = s.scenario_id;
        let c = index.cluster_of[si];
        let [q_pv, q_wind, q_batt] = index.local_design[si];
        for (local, global, name) in [
            (q_pv, index.q_pv, "PV"),
            (q_wind, index.q_wind, "W"),
            (q_batt, index.q_batt, "B"),
        ] {
            b.add_row(
                format!("link_{name}[{sid}]"),
                RowSense::Eq,
                0.0,
                [(local, 1.0), (global, -1.0)],
            );
        }
        for t in 0..QUARTERS_PER_DAY {
            let h = hour_of_quarter(t);
            let tag = format!("[{sid},{t}]");
            let (pv, w) = (s.pv.values[t], s.wind.values[t]);
            let q_da = index.da(c, h);
            let q_id = index.id(si, t);
            let (qin, qout) = (index.charge(si, t), index.discharge(si, t));
            let soc_t = index.soc(si, t);
            let p = index.power(si, t);

            b.add_row(
                format!("balance{tag}"),
                RowSense::Eq,
                0.0,
                [
                    (p, 1.0),
                    (q_da, -1.0),
                    (q_id, -1.0),
                    (q_pv, -pv),
                    (q_wind, -w),
                    (qin, 1.0),
                    (qout, -1.0),
                ],
            );
            b.add_row(
                format!("charge_rate{tag}"),
                RowSense::Le,
                0.0,
                [(qin, 1.0), (q_batt, -inv_tau)],
            );
            b.add_row(
                format!("discharge_rate{tag}"),
                RowSense::Le,
                0.0,
                [(qout, 1.0), (q_batt, -inv_tau)],
            );
            b.add_row(
                format!("soc_cap{tag}"),
                RowSense::Le,
                0.0,
                [(soc_t, 1.0), (q_batt, -1.0)],
            );
            b.add_row(
                format!("soc_dyn{tag}"),
                RowSense::Eq,
                0.0,
                [
                    (index.soc(si, t + 1), 1.0),
                    (soc_t, -1.0),
                    (qin, -econ.eta_in * dt),
                    (qout, dt / econ.eta_out),
                ],
            );

            if da_active {
                b.add_row(
                    format!("da_sell_rate{tag}"),
                    RowSense::Ge,
                    0.0,
                    [(q_da, 1.0), (q_pv, pv), (q_wind, w), (q_batt, inv_tau)],
                );
                b.add_row(
                    format!("da_sell_soc{tag}"),
                    RowSense::Ge,
                    0.0,
                    [(q_da, 1.0), (q_pv, pv), (q_wind, w), (soc_t, inv_dt)],
                );
            }
            b.add_row(
                format!("id_sell_rate{tag}"),
                RowSense::Ge,
                0.0,
                [
                    (q_id, 1.0),
                    (q_da, 1.0),
                    (q_pv, pv),
                    (q_wind, w),
                    (q_batt, inv_tau),
                ],
            );
            b.add_row(
                format!("id_sell_soc{tag}"),
                RowSense::Ge,
                0.0,
                [
                    (q_id, 1.0),
                    (q_da, 1.0),
                    (q_pv, pv),
                    (q_wind, w),
                    (soc_t, inv_dt),
                ],
            );
            if da_active {
                b.add_row(
                    format!("da_buy_soc{tag}"),
                    RowSense::Le,
                    pmax,
                    [(q_da, 1.0), (soc_t, inv_dt), (q_batt, -inv_dt)],
                );
            }
            b.add_row(
                format!("id_buy_rate{tag}"),
                RowSense::Le,
                pmax,
                [(q_id, 1.0), (q_batt, -inv_tau)],
            );
            b.add_row(
                format!("id_buy_soc{tag}"),
                RowSense::Le,
                pmax,
                [(q_id, 1.0), (soc_t, inv_dt), (q_batt, -inv_dt)],
            );

            if ramp_binding {
                let next = index.power(si, (t + 1) % QUARTERS_PER_DAY);
                b.add_row(
                    format!("ramp_up{tag}"),
                    RowSense::Le,
                    ramp,
                    [(next, 1.0), (p, -1.0)],
                );
                b.add_row(
                    format!("ramp_down{tag}"),
                    RowSense::Ge,
                    -ramp,
                    [(next, 1.0), (p, -1.0)],
                );
            }
            b.add_row(
                format!("storage_dyn{tag}"),
                RowSense::Eq,
                -process.nominal_power * dt,
                [
                    (index.storage(si, t + 1), 1.0),
                    (index.storage(si, t), -1.0),
                    (p, -dt),
                ],
            );
            b.add_row(
                format!("grid_fee{tag}"),
                RowSense::Ge,
                0.0,
                [
                    (index.grid_fee(si, t), 1.0),
                    (q_da, -fee_dt),
                    (q_id, -fee_dt),
                ],
            );
        }
    }
    (b, index)
}

#[cfg(test)]
mod tests;
