use super::*;
use crate::domain::{DailyProfile, Resolution, Unit};
use crate::scenarios::scenario_tree;
use crate::synthetic::{synthetic_days, SyntheticSpec};

const REL: f64 = 1e-6;

fn inputs(days: usize, k: usize, seed: u64) -> StudyInputs {
    let d = synthetic_days(&SyntheticSpec::new(days, seed));
    let (tree, _) = scenario_tree(&d, k, seed).unwrap();
    let process = ProcessSpec::reference();
    StudyInputs::new(
        tree,
        process,
        TechEconSpec::reference(process.nominal_power),
    )
}

fn le(a: f64, b: f64) -> bool {
    a <= b + REL * b.abs().max(1.0)
}

#[test]
fn pareto_front_is_monotone_and_equispaced() {
    let inp = inputs(3, 2, 4);
    let front = pareto_front(&inp, 5).unwrap();
    assert_eq!(front.len(), 5);
    for w in front.windows(2) {
        assert!(
            le(w[0].design.result.tac, w[1].design.result.tac),
            "TAC decreased along the front"
        );
        assert!(
            le(w[1].design.result.gwi, w[0].design.result.gwi),
            "GWI increased along the front"
        );
    }
    let g_hi = front[0].design.result.gwi;
    let g_lo = front[4].design.result.gwi;
    for (k, p) in front.iter().enumerate().skip(1).take(3) {
        let expected = g_hi + (g_lo - g_hi) * k as f64 / 4.0;
        assert!((p.gwi_bound - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
        assert!(le(p.design.result.gwi, p.gwi_bound));
    }
    assert!(front.iter().all(|p| p.design.check_passed()));
    assert!(pareto_front(&inp, 1).is_err());
}

#[test]
fn pareto_front_collapses_without_freedom() {
    let mut inp = inputs(2, 1, 2);
    inp.process = ProcessSpec::inflexible(inp.process.nominal_power);
    inp.econ = inp.econ.without_system();
    inp.market_mode = MarketMode::IdOnly;
    let front = pareto_front(&inp, 3).unwrap();
    let t0 = front[0].design.result.tac;
    for p in &front {
        assert!((p.design.result.tac - t0).abs() <= REL * t0.abs());
        assert!((p.design.result.gwi - front[0].design.result.gwi).abs() <= REL * (1.0 + t0.abs()));
    }
}

fn sweep(inp: &StudyInputs, parameter: SweepParameter, values: Vec<f64>) -> Vec<SweepRow> {
    flexibility_sweep(&SweepSpec {
        parameter,
        values,
        tree: inp.tree.clone(),
        process: inp.process,
        econ: inp.econ,
        market_mode: inp.market_mode,
        objective: Objective::Tac,
        solve: inp.solve.clone(),
    })
    .unwrap()
}

#[test]
fn sweeps_are_monotone_in_flexibility() {
    let inp = inputs(2, 1, 8);
    for parameter in SweepParameter::ALL {
        let values = parameter.default_values(&inp.process, 3);
        let rows = sweep(&inp, parameter, values);
        for r in &rows {
            assert!(
                r.savings >= -REL,
                "{parameter:?}: negative savings {}",
                r.savings
            );
            assert!(r.with_system.check_passed && r.without_system.check_passed);
        }
        for w in rows.windows(2) {
            // `a` is the more flexible of the pair.
            let larger_first = w[0].value > w[1].value;
            let (a, b) = if larger_first == parameter.larger_is_more_flexible() {
                (&w[0], &w[1])
            } else {
                (&w[1], &w[0])
            };
            assert!(
                le(a.with_system.tac, b.with_system.tac),
                "{parameter:?}: TAC rose with flexibility"
            );
            assert!(
                le(a.without_system.tac, b.without_system.tac),
                "{parameter:?}: TAC rose with flexibility"
            );
        }
    }
}

#[test]
fn inflexible_sweep_point_matches_closed_form() {
    let q = |unit, v| DailyProfile::constant("d", Resolution::QuarterHour, unit, v);
    let tree = ScenarioTree::single_day(
        q(Unit::EurPerMwh, 80.0),
        q(Unit::Dimensionless, 0.2),
        q(Unit::Dimensionless, 0.3),
        q(Unit::KgCo2PerMwh, 400.0),
    );
    let process = ProcessSpec::inflexible(2.0);
    let inp = StudyInputs::new(tree, process, TechEconSpec::reference(2.0));
    let rows = sweep(&inp, SweepParameter::Oversizing, vec![0.0]);
    let expected = 365.0 * 24.0 * 2.0 * (80.0 + 29.6);
    let tac = rows[0].without_system.tac;
    assert!(
        (tac - expected).abs() <= 1e-8 * expected,
        "{tac} vs {expected}"
    );
}

#[test]
fn sweep_rejects_bad_values() {
    let inp = inputs(2, 1, 1);
    let spec = |parameter, values| SweepSpec {
        parameter,
        values,
        tree: inp.tree.clone(),
        process: inp.process,
        econ: inp.econ,
        market_mode: inp.market_mode,
        objective: Objective::Tac,
        solve: inp.solve.clone(),
    };
    assert!(flexibility_sweep(&spec(SweepParameter::MinPartLoad, vec![1.5])).is_err());
    assert!(flexibility_sweep(&spec(SweepParameter::Oversizing, vec![])).is_err());
    assert!(flexibility_sweep(&spec(SweepParameter::RampLimit, vec![-0.1])).is_err());
}

#[test]
fn default_grids_span_inflexible_to_double() {
    let p = ProcessSpec::reference();
    assert_eq!(
        SweepParameter::Oversizing.default_values(&p, 5),
        vec![0.0, 0.1, 0.2, 0.30000000000000004, 0.4]
    );
    let mpl = SweepParameter::MinPartLoad.default_values(&p, 3);
    assert_eq!(mpl, vec![1.0, 0.5, 0.0]);
    assert_eq!(
        SweepParameter::CapacityScale.default_values(&p, 3),
        vec![0.0, 1.0, 2.0]
    );
    assert_eq!(default_heatmap_scales().len(), 9);
}

#[test]
fn heatmap_is_monotone_and_consistent() {
    let inp = inputs(2, 1, 3);
    let over = [0.0, 0.2, 0.4];
    let scale = [0.0, 0.5, 1.0];
    let h = capacity_heatmap(&inp, &over, &scale).unwrap();
    for r in 0..3 {
        for c in 0..3 {
            let cell = h.cell(r, c);
            assert!(cell.check_passed);
            if r > 0 {
                assert!(le(cell.tac, h.cell(r - 1, c).tac));
            }
            if c > 0 {
                assert!(le(cell.tac, h.cell(r, c - 1).tac));
            }
        }
        assert_eq!(
            h.cell(r, 0).q_pv + h.cell(r, 0).q_wind + h.cell(r, 0).q_batt,
            0.0
        );
    }
    let rows = sweep(&inp, SweepParameter::Oversizing, over.to_vec());
    for (r, row) in rows.iter().enumerate() {
        let a = h.cell(r, 0).tac;
        assert!((a - row.without_system.tac).abs() <= REL * a.abs());
    }
    let add = h.additivity();
    assert_eq!(add.len(), 9);
    assert!(add
        .iter()
        .filter(|t| t.0 == 0 || t.1 == 0)
        .all(|t| t.2 < 1e-12));
    assert!(h.max_additivity_error().is_finite());
    assert_eq!(h.long(|c| c.tac)[4], (1, 1, h.cell(1, 1).tac));
    assert!(capacity_heatmap(&inp, &[], &scale).is_err());
}

#[test]
fn decomposition_respects_inclusion() {
    let inp = inputs(2, 1, 5);
    let d = savings_decomposition(&inp).unwrap();
    assert_eq!(d.rows.len(), 5);
    let full = d.row(Variant::FlexibleFullSystem).summary.tac;
    for r in &d.rows {
        assert!(r.savings >= -REL * d.rows[0].summary.tac, "{:?}", r.variant);
        assert!(le(full, r.summary.tac));
        assert!(r.summary.check_passed);
    }
    assert!(d.additivity_gap.is_finite());
}

#[test]
fn simultaneous_trading_never_costs_more() {
    let inp = inputs(3, 2, 6);
    let c = market_mode_comparison(&inp).unwrap();
    assert!(c.savings >= -REL * c.id_only.tac);
    assert!(c.id_only.trades.da_purchases == 0.0 && c.id_only.trades.da_sales == 0.0);
}

#[test]
fn studies_are_deterministic() {
    let inp = inputs(2, 1, 9);
    assert_eq!(
        savings_decomposition(&inp).unwrap(),
        savings_decomposition(&inp).unwrap()
    );
}
