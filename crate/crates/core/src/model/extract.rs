use super::{objective::annualized_capex, Model};
use crate::domain::{
    CostBreakdown, DesignResult, ScenarioSchedule, ScenarioTree, TechEconSpec, Technology,
    TradeTotals, DT_HOURS, HOURS_PER_DAY, QUARTERS_PER_DAY,
};
use crate::lp::{LpSolution, SolveStatus};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("solution status is {0:?}, not Optimal")]
    NotOptimal(SolveStatus),
    #[error("solution has {found} values, model has {expected} columns")]
    Dimension { expected: usize, found: usize },
}

/// Reads capacities, schedules, cost breakdown and trade totals off an
/// optimal solution.
///
/// Grid fees are recomputed from the trades as `max(0, fee * dt * net)`, so
/// the breakdown is meaningful whatever objective was optimized.
pub fn extract(
    sol: &LpSolution,
    model: &Model,
    tree: &ScenarioTree,
    econ: &TechEconSpec,
) -> Result<DesignResult, ExtractError> {
    if sol.status != SolveStatus::Optimal {
        return Err(ExtractError::NotOptimal(sol.status));
    }
    let ix = &model.index;
    if sol.x.len() != ix.n_vars {
        return Err(ExtractError::Dimension {
            expected: ix.n_vars,
            found: sol.x.len(),
        });
    }
    let x = &sol.x;
    let v = |id: crate::lp::VarId| x[id.0];
    let (q_pv, q_wind, q_batt) = (v(ix.q_pv), v(ix.q_wind), v(ix.q_batt));
    let rate = econ.interest_rate;
    let capex = annualized_capex(econ.tech(Technology::Pv), rate) * q_pv
        + annualized_capex(econ.tech(Technology::Wind), rate) * q_wind
        + annualized_capex(econ.tech(Technology::Battery), rate) * q_batt;

    let days = model.config.days_per_year;
    let mut opex_el = 0.0;
    let mut opex_grid = 0.0;
    let mut trades = TradeTotals::default();
    let mut schedules = Vec::with_capacity(tree.n_scenarios());
    for (si, s) in tree.scenarios.iter().enumerate() {
        let c = ix.cluster_of[si];
        let w = days * s.probability;
        let da_price = &tree.clusters[c].da_price.values;
        let da_trade: Vec<f64> = (0..HOURS_PER_DAY).map(|h| v(ix.da(c, h))).collect();
        for (h, &q) in da_trade.iter().enumerate() {
            let energy = q * 4.0 * DT_HOURS;
            opex_el += w * da_price[h] * energy;
            trades.da_purchases += w * energy.max(0.0);
            trades.da_sales += w * (-energy).max(0.0);
        }
        let mut id_trade = Vec::with_capacity(QUARTERS_PER_DAY);
        for t in 0..QUARTERS_PER_DAY {
            let q = v(ix.id(si, t));
            let energy = q * DT_HOURS;
            opex_el += w * s.id_price.values[t] * energy;
            trades.id_purchases += w * energy.max(0.0);
            trades.id_sales += w * (-energy).max(0.0);
            opex_grid += w * (econ.grid_fee * DT_HOURS * (da_trade[t / 4] + q)).max(0.0);
            id_trade.push(q);
        }
        let series = |f: &dyn Fn(usize) -> f64| (0..QUARTERS_PER_DAY).map(f).collect::<Vec<f64>>();
        let mut soc = series(&|t| v(ix.soc(si, t)));
        soc.push(soc[0]);
        let mut storage = series(&|t| v(ix.storage(si, t)));
        storage.push(storage[0]);
        schedules.push(ScenarioSchedule {
            scenario_id: s.scenario_id,
            cluster_id: s.cluster_id,
            probability: s.probability,
            process_power: series(&|t| v(ix.power(si, t))),
            da_trade,
            id_trade,
            charge: series(&|t| v(ix.charge(si, t))),
            discharge: series(&|t| v(ix.discharge(si, t))),
            state_of_charge: soc,
            product_storage: storage,
            pv_power: series(&|t| s.pv.values[t] * q_pv),
            wind_power: series(&|t| s.wind.values[t] * q_wind),
            grid_fee_aux: series(&|t| v(ix.grid_fee(si, t))),
        });
    }
    let breakdown = CostBreakdown {
        capex,
        opex_el,
        opex_grid,
    };
    Ok(DesignResult {
        q_pv,
        q_wind,
        q_batt,
        tac: breakdown.total(),
        gwi: model.gwi_of(x),
        breakdown,
        trades,
        schedules,
    })
}
