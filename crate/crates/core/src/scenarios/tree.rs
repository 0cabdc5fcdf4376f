use super::{Clustering, DayRecord, ScenarioError};
use crate::domain::{
    ClusterNode, DailyProfile, Resolution, ScenarioNode, ScenarioTree, Unit, QUARTERS_PER_DAY,
};
use serde::{Deserialize, Serialize};

fn check_day(d: &DayRecord) -> Result<(), ScenarioError> {
    let expected = [
        (&d.da_price, Resolution::Hour, Unit::EurPerMwh),
        (&d.id_price, Resolution::QuarterHour, Unit::EurPerMwh),
        (&d.wind, Resolution::QuarterHour, Unit::Dimensionless),
        (&d.pv, Resolution::QuarterHour, Unit::Dimensionless),
        (&d.gwi, Resolution::QuarterHour, Unit::KgCo2PerMwh),
    ];
    let mut violations = Vec::new();
    for (p, res, unit) in expected {
        violations.extend(p.violations());
        if p.resolution != res || p.unit != unit {
            violations.push(crate::domain::Violation::new(
                format!("day {}", d.day_id),
                crate::domain::ViolationKind::UnitMismatch,
                format!(
                    "expected {res:?} {unit}, found {:?} {}",
                    p.resolution, p.unit
                ),
            ));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ScenarioError::InvalidProfile(violations))
    }
}

/// Turns a clustering of `days` into a scenario tree.
///
/// Each cluster's day-ahead price is the plain mean of its members' hourly
/// prices. Each day becomes one equiprobable scenario whose intraday price is
/// the cluster day-ahead price (each hour repeated over its four quarters)
/// plus the day's own deviation `ID - DA`.
pub fn build_tree(
    clustering: &Clustering,
    days: &[DayRecord],
) -> Result<ScenarioTree, ScenarioError> {
    if clustering.assignments.len() != days.len() {
        return Err(ScenarioError::MissingDay(format!(
            "clustering covers {} days, {} supplied",
            clustering.assignments.len(),
            days.len()
        )));
    }
    for d in days {
        check_day(d)?;
    }
    let probability = 1.0 / days.len() as f64;
    let mut clusters = Vec::with_capacity(clustering.k);
    let mut scenarios: Vec<Option<ScenarioNode>> = vec![None; days.len()];
    for c in 0..clustering.k {
        let members = clustering.members(c);
        if members.is_empty() {
            return Err(ScenarioError::Shape(format!("cluster {c} is empty")));
        }
        let mut da = vec![0.0; 24];
        for &m in &members {
            for (a, v) in da.iter_mut().zip(&days[m].da_price.values) {
                *a += v;
            }
        }
        let inv = 1.0 / members.len() as f64;
        da.iter_mut().for_each(|v| *v *= inv);
        let label = format!("cluster{c}");
        let da_profile = DailyProfile::new(label, Resolution::Hour, Unit::EurPerMwh, da);
        let da_q = da_profile.to_quarter_hours();
        for &m in &members {
            let d = &days[m];
            let own_da = d.da_price.to_quarter_hours();
            let id: Vec<f64> = (0..QUARTERS_PER_DAY)
                .map(|t| da_q.values[t] + (d.id_price.values[t] - own_da.values[t]))
                .collect();
            scenarios[m] = Some(ScenarioNode {
                scenario_id: m,
                cluster_id: c,
                probability,
                id_price: DailyProfile::new(
                    d.day_id.clone(),
                    Resolution::QuarterHour,
                    Unit::EurPerMwh,
                    id,
                ),
                pv: d.pv.clone(),
                wind: d.wind.clone(),
                gwi: d.gwi.clone(),
            });
        }
        clusters.push(ClusterNode {
            cluster_id: c,
            da_price: da_profile,
            members,
        });
    }
    let tree = ScenarioTree {
        clusters,
        scenarios: scenarios
            .into_iter()
            .map(|s| s.expect("assigned"))
            .collect(),
    };
    let v = tree.violations();
    if v.is_empty() {
        Ok(tree)
    } else {
        Err(ScenarioError::InvalidProfile(v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    /// Mean over the day of the per-quarter standard deviation across members.
    pub per_cluster: Vec<f64>,
    /// Plain mean of `per_cluster`.
    pub average: f64,
}

/// Spread of the market deviation `ID - DA` within each cluster (population
/// standard deviation across members, averaged over the day).
pub fn deviation_std_report(tree: &ScenarioTree) -> DeviationReport {
    let per_cluster: Vec<f64> = tree
        .clusters
        .iter()
        .map(|c| {
            let da = c.da_price.to_quarter_hours();
            let devs: Vec<Vec<f64>> = tree
                .scenarios
                .iter()
                .filter(|s| s.cluster_id == c.cluster_id)
                .map(|s| {
                    s.id_price
                        .values
                        .iter()
                        .zip(&da.values)
                        .map(|(i, d)| i - d)
                        .collect()
                })
                .collect();
            let n = devs.len() as f64;
            let mut acc = 0.0;
            for t in 0..QUARTERS_PER_DAY {
                let mean = devs.iter().map(|d| d[t]).sum::<f64>() / n;
                let var = devs.iter().map(|d| (d[t] - mean).powi(2)).sum::<f64>() / n;
                acc += var.sqrt();
            }
            acc / QUARTERS_PER_DAY as f64
        })
        .collect();
    let average = if per_cluster.is_empty() {
        0.0
    } else {
        per_cluster.iter().sum::<f64>() / per_cluster.len() as f64
    };
    DeviationReport {
        per_cluster,
        average,
    }
}
