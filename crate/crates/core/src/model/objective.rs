use super::VariableIndex;
use crate::domain::{
    ScenarioTree, TechEconSpec, TechParams, Technology, DT_HOURS, HOURS_PER_DAY, QUARTERS_PER_DAY,
};

/// Capital recovery factor `(1+i)^n i / ((1+i)^n - 1)`.
pub fn annuity(rate: f64, years: f64) -> f64 {
    let f = (1.0 + rate).powf(years);
    f * rate / (f - 1.0)
}

/// Annual cost of one unit of installed capacity: annuitized investment plus maintenance.
pub fn annualized_capex(p: &TechParams, rate: f64) -> f64 {
    annuity(rate, p.lifetime) * p.capex + p.maintenance
}

/// Levelized production cost in EUR/MWh for a generator with the given
/// specific yield (MWh per kWp and year), from per-kW catalogue figures.
pub fn production_cost(
    capex_per_kw: f64,
    lifetime: f64,
    maintenance_per_kw: f64,
    rate: f64,
    yield_mwh_per_kw: f64,
) -> f64 {
    (annuity(rate, lifetime) * capex_per_kw + maintenance_per_kw) / yield_mwh_per_kw
}

/// TAC cost vector over all columns, plus its constant term.
pub fn tac_objective(
    index: &VariableIndex,
    tree: &ScenarioTree,
    econ: &TechEconSpec,
    days_per_year: f64,
) -> (Vec<f64>, f64) {
    let mut c = vec![0.0; index.n_vars];
    c[index.q_pv.0] = annualized_capex(econ.tech(Technology::Pv), econ.interest_rate);
    c[index.q_wind.0] = annualized_capex(econ.tech(Technology::Wind), econ.interest_rate);
    c[index.q_batt.0] = annualized_capex(econ.tech(Technology::Battery), econ.interest_rate);
    for (si, s) in tree.scenarios.iter().enumerate() {
        let w = days_per_year * s.probability;
        let cluster = &tree.clusters[index.cluster_of[si]];
        for h in 0..HOURS_PER_DAY {
            // Hourly quantities in MW held for 4 * dt = 1 h.
            c[index.da(index.cluster_of[si], h).0] +=
                w * 4.0 * DT_HOURS * cluster.da_price.values[h];
        }
        for t in 0..QUARTERS_PER_DAY {
            c[index.id(si, t).0] = w * DT_HOURS * s.id_price.values[t];
            c[index.grid_fee(si, t).0] = w;
        }
    }
    (c, 0.0)
}

/// GWI vector: grid emissions of traded energy (sales earn credits) plus
/// embodied emissions spread over each technology's lifetime.
pub fn gwi_objective(
    index: &VariableIndex,
    tree: &ScenarioTree,
    econ: &TechEconSpec,
    days_per_year: f64,
) -> Vec<f64> {
    let mut c = vec![0.0; index.n_vars];
    for (var, tech) in [
        (index.q_pv, Technology::Pv),
        (index.q_wind, Technology::Wind),
        (index.q_batt, Technology::Battery),
    ] {
        let p = econ.tech(tech);
        c[var.0] = p.gwi_embodied / p.lifetime;
    }
    for (si, s) in tree.scenarios.iter().enumerate() {
        let w = days_per_year * s.probability;
        for t in 0..QUARTERS_PER_DAY {
            let g = w * s.gwi.values[t] * DT_HOURS;
            c[index.id(si, t).0] = g;
            c[index.da(index.cluster_of[si], t / 4).0] += g;
        }
    }
    c
}
