use super::*;
use crate::domain::{DailyProfile, Resolution, Unit};
use crate::lp::{solve, SolveOptions};
use crate::scenarios::scenario_tree;
use crate::synthetic::{synthetic_days, SyntheticSpec};

fn flat_tree(price: f64) -> ScenarioTree {
    let q = |unit, v| DailyProfile::constant("d", Resolution::QuarterHour, unit, v);
    ScenarioTree::single_day(
        q(Unit::EurPerMwh, price),
        q(Unit::Dimensionless, 0.0),
        q(Unit::Dimensionless, 0.0),
        q(Unit::KgCo2PerMwh, 400.0),
    )
}

#[test]
fn steady_state_closed_form() {
    let tree = flat_tree(50.0);
    let process = ProcessSpec::inflexible(1.0);
    let econ = TechEconSpec::reference(1.0).without_system();
    let model = build(&tree, &process, &econ, &ModelConfig::default()).unwrap();
    let sol = solve(&model.problem, &SolveOptions::default());
    assert!(sol.is_optimal());
    let r = extract(&sol, &model, &tree, &econ).unwrap();
    let expected = 365.0 * 24.0 * 1.0 * (50.0 + 29.6);
    assert!(
        (r.tac - expected).abs() <= 1e-8 * expected,
        "{} vs {expected}",
        r.tac
    );
    assert!((sol.objective - expected).abs() <= 1e-8 * expected);
}

#[test]
fn census_small() {
    let days = synthetic_days(&SyntheticSpec::new(6, 1));
    let (tree, _) = scenario_tree(&days, 2, 0).unwrap();
    let p = ProcessSpec::reference();
    let e = TechEconSpec::reference(p.nominal_power);
    let m = build(&tree, &p, &e, &ModelConfig::default()).unwrap();
    assert_eq!(
        m.index.census(),
        DofCensus {
            design: 3,
            day_ahead: 48,
            intraday: 576,
            battery: 1152
        }
    );
    let m = build(
        &tree,
        &p,
        &e,
        &ModelConfig::new(MarketMode::IdOnly, Objective::Tac),
    )
    .unwrap();
    assert_eq!(m.index.census().day_ahead, 0);
    assert!(m
        .index
        .da
        .iter()
        .all(|v| m.problem.lower()[v.0] == 0.0 && m.problem.upper()[v.0] == 0.0));
}
