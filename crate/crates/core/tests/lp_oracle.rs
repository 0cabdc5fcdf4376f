mod common;

use common::{random_lp, vertex_enumeration, DenseLp};
use flexplan_core::lp::{
    check_solution, solve, solve_from, LpBuilder, RowSense, SolveOptions, SolveStatus,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agrees_with_vertices(lp: &DenseLp) -> Result<(), String> {
    let p = lp.to_problem();
    let sol = solve(&p, &SolveOptions::default());
    match vertex_enumeration(lp) {
        None => {
            if sol.status != SolveStatus::Infeasible {
                return Err(format!(
                    "oracle: empty polytope, solver: {:?} {}",
                    sol.status, sol.objective
                ));
            }
        }
        Some(best) => {
            if sol.status != SolveStatus::Optimal {
                return Err(format!(
                    "oracle optimum {best}, solver status {:?}",
                    sol.status
                ));
            }
            if (sol.objective - best).abs() > 1e-6 * best.abs().max(1.0) {
                return Err(format!(
                    "objective {} vs vertex optimum {best}",
                    sol.objective
                ));
            }
            let rep = check_solution(&p, &sol);
            if rep.duality_gap > 1e-6 * (1.0 + sol.objective.abs()) || !rep.passes(1e-6) {
                return Err(format!("residual check failed: {rep:?}"));
            }
        }
    }
    Ok(())
}

#[test]
fn two_hundred_seeded_lps_match_vertex_enumeration() {
    let mut infeasible = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng, 8, 8);
        if vertex_enumeration(&lp).is_none() {
            infeasible += 1;
        }
        agrees_with_vertices(&lp).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{lp:?}"));
    }
    // Both outcomes must be exercised.
    assert!(
        infeasible > 0 && infeasible < 200,
        "{infeasible} infeasible draws"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_lps_match_vertex_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng, 5, 5);
        prop_assert!(agrees_with_vertices(&lp).is_ok(), "{:?}", agrees_with_vertices(&lp));
    }

    #[test]
    fn unscaled_solve_agrees(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng, 6, 6);
        let p = lp.to_problem();
        let a = solve(&p, &SolveOptions::default());
        let b = solve(&p, &SolveOptions { scaling: false, ..SolveOptions::default() });
        prop_assert_eq!(a.status, b.status);
        if a.is_optimal() {
            prop_assert!((a.objective - b.objective).abs() <= 1e-6 * a.objective.abs().max(1.0));
        }
    }

    #[test]
    fn any_start_reaches_the_optimum(seed in any::<u64>(), t in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng, 6, 6);
        let p = lp.to_problem();
        let start: Vec<f64> = lp.lower.iter().zip(&lp.upper).map(|(l, u)| l + t * (u - l)).collect();
        let a = solve(&p, &SolveOptions::default());
        let b = solve_from(&p, &SolveOptions::default(), &start).unwrap();
        prop_assert_eq!(a.status, b.status);
        if a.is_optimal() {
            prop_assert!((a.objective - b.objective).abs() <= 1e-6 * a.objective.abs().max(1.0));
            prop_assert!(check_solution(&p, &b).passes(1e-6));
        }
    }
}

#[test]
fn degenerate_cycling_example_terminates() {
    // Beale's example cycles under the textbook largest-coefficient rule.
    let mut b = LpBuilder::new();
    let x: Vec<_> = [-0.75, 150.0, -0.02, 6.0]
        .iter()
        .enumerate()
        .map(|(j, &c)| b.add_var(format!("x{j}"), c, 0.0, f64::INFINITY))
        .collect();
    b.add_row(
        "r0",
        RowSense::Le,
        0.0,
        [(x[0], 0.25), (x[1], -60.0), (x[2], -0.04), (x[3], 9.0)],
    );
    b.add_row(
        "r1",
        RowSense::Le,
        0.0,
        [(x[0], 0.5), (x[1], -90.0), (x[2], -0.02), (x[3], 3.0)],
    );
    b.add_row("r2", RowSense::Le, 1.0, [(x[2], 1.0)]);
    let p = b.build().unwrap();
    let s = solve(&p, &SolveOptions::default());
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective + 0.05).abs() < 1e-9, "{}", s.objective);
    assert!(check_solution(&p, &s).passes(1e-9));
}
