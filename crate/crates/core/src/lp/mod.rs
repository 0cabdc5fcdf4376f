//! Sparse linear programming: problem assembly, a bounded revised simplex,
//! solution checks and an LP-format writer for cross-checking with other
//! solvers.

mod check;
mod lp_format;
mod lu;
mod problem;
mod simplex;

pub use check::{check_solution, verify_farkas, verify_unbounded_ray, SolutionReport};
pub use lp_format::write_lp;
pub use problem::{LpBuilder, LpProblem, RowId, RowSense, VarId};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inconsistent bounds: {0}")]
    Bounds(String),
    #[error("non-finite data: {0}")]
    NonFinite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Primal feasibility tolerance on the scaled problem.
    pub feas_tol: f64,
    /// Reduced-cost tolerance on the scaled problem.
    pub opt_tol: f64,
    pub max_iterations: usize,
    /// Basis updates between refactorizations.
    pub refactor_interval: usize,
    /// Consecutive degenerate pivots before Bland's rule takes over.
    pub bland_after_stall: usize,
    pub scaling: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-7,
            opt_tol: 1e-7,
            max_iterations: 50_000_000,
            refactor_interval: 100,
            bland_after_stall: 200,
            scaling: true,
        }
    }
}

/// Result of [`solve`].
///
/// Duals follow the convention `c - A'y - d = 0`: for a minimization, rows of
/// sense `<=` carry `y <= 0`, rows of sense `>=` carry `y >= 0`, and reduced
/// costs `d` are non-negative at lower bounds and non-positive at upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub row_activity: Vec<f64>,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Row multipliers proving infeasibility, or a primal direction of
    /// unbounded descent.
    pub ray: Option<Vec<f64>>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

pub fn solve(problem: &LpProblem, opts: &SolveOptions) -> LpSolution {
    simplex::solve(problem, opts, None)
}

/// Like [`solve`], starting from the point `start` (clamped to the bounds)
/// instead of each variable's finite bound nearest to zero. Variables whose
/// starting value lies strictly inside their bounds begin nonbasic at that
/// value. A feasible start skips phase 1 entirely.
pub fn solve_from(
    problem: &LpProblem,
    opts: &SolveOptions,
    start: &[f64],
) -> Result<LpSolution, LpError> {
    if start.len() != problem.n_vars() {
        return Err(LpError::Dimension(format!(
            "start has {} values, problem has {} variables",
            start.len(),
            problem.n_vars()
        )));
    }
    Ok(simplex::solve(problem, opts, Some(start)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn single_active_bound() {
        let mut b = LpBuilder::new();
        let x = b.add_var("x", 1.0, f64::NEG_INFINITY, f64::INFINITY);
        b.add_row("c", RowSense::Ge, 1.0, [(x, 1.0)]);
        let p = b.build().unwrap();
        let s = solve(&p, &opts());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-12);
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tie_broken_towards_lowest_index() {
        let mut b = LpBuilder::new();
        let x = b.add_var("x", -1.0, 0.0, f64::INFINITY);
        let y = b.add_var("y", -1.0, 0.0, f64::INFINITY);
        b.add_row("c", RowSense::Le, 1.0, [(x, 1.0), (y, 1.0)]);
        let p = b.build().unwrap();
        let s = solve(&p, &opts());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective + 1.0).abs() < 1e-12);
        assert_eq!(s.x, vec![1.0, 0.0]);
    }

    #[test]
    fn contradictory_row_and_bound_is_infeasible_with_certificate() {
        let mut b = LpBuilder::new();
        let x = b.add_var("x", 0.0, 0.0, f64::INFINITY);
        b.add_row("c", RowSense::Le, -1.0, [(x, 1.0)]);
        let p = b.build().unwrap();
        let s = solve(&p, &opts());
        assert_eq!(s.status, SolveStatus::Infeasible);
        assert!(verify_farkas(&p, s.ray.as_ref().unwrap()));
    }

    #[test]
    fn unbounded_with_ray() {
        let mut b = LpBuilder::new();
        let x = b.add_var("x", -1.0, 0.0, f64::INFINITY);
        let y = b.add_var("y", 0.0, 0.0, f64::INFINITY);
        b.add_row("c", RowSense::Ge, 1.0, [(x, 1.0), (y, -1.0)]);
        let p = b.build().unwrap();
        let s = solve(&p, &opts());
        assert_eq!(s.status, SolveStatus::Unbounded);
        assert!(verify_unbounded_ray(&p, s.ray.as_ref().unwrap()));
    }

    #[test]
    fn equality_system_with_free_variables() {
        // min x + 2y  s.t. x + y = 3, x - y = 1
        let mut b = LpBuilder::new();
        let x = b.add_var("x", 1.0, f64::NEG_INFINITY, f64::INFINITY);
        let y = b.add_var("y", 2.0, f64::NEG_INFINITY, f64::INFINITY);
        b.add_row("a", RowSense::Eq, 3.0, [(x, 1.0), (y, 1.0)]);
        b.add_row("b", RowSense::Eq, 1.0, [(x, 1.0), (y, -1.0)]);
        let p = b.build().unwrap();
        let s = solve(&p, &opts());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
        let r = check_solution(&p, &s);
        assert!(r.passes(1e-9), "{r:?}");
    }

    #[test]
    fn no_rows_only_bounds() {
        let mut b = LpBuilder::new();
        b.add_var("x", 2.0, -1.0, 4.0);
        b.add_var("y", -3.0, -1.0, 4.0);
        let p = b.build().unwrap();
        let s = solve(&p, &opts());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.x, vec![-1.0, 4.0]);
        assert_eq!(s.objective, -14.0);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut b = LpBuilder::new();
        let v: Vec<_> = (0..5)
            .map(|j| b.add_var(format!("x{j}"), -1.0 - j as f64, 0.0, f64::INFINITY))
            .collect();
        for i in 0..5 {
            b.add_row(
                format!("r{i}"),
                RowSense::Le,
                1.0 + i as f64,
                v.iter().map(|&x| (x, 1.0 + (i * x.0) as f64)),
            );
        }
        let p = b.build().unwrap();
        let s = solve(
            &p,
            &SolveOptions {
                max_iterations: 0,
                ..opts()
            },
        );
        assert_eq!(s.status, SolveStatus::IterLimit);
    }

    #[test]
    fn interior_start_reaches_same_optimum() {
        // min -x - 2y  s.t. x + y <= 4, x - y >= -2, 0 <= x, y <= 3
        let mut b = LpBuilder::new();
        let x = b.add_var("x", -1.0, 0.0, 3.0);
        let y = b.add_var("y", -2.0, 0.0, 3.0);
        b.add_row("a", RowSense::Le, 4.0, [(x, 1.0), (y, 1.0)]);
        b.add_row("b", RowSense::Ge, -2.0, [(x, 1.0), (y, -1.0)]);
        let p = b.build().unwrap();
        let cold = solve(&p, &opts());
        let warm = solve_from(&p, &opts(), &[0.5, 0.5]).unwrap();
        assert_eq!(warm.status, SolveStatus::Optimal);
        assert!((warm.objective - cold.objective).abs() < 1e-12);
        assert!((warm.objective + 7.0).abs() < 1e-12);
        assert!(check_solution(&p, &warm).passes(1e-9));
        assert!(solve_from(&p, &opts(), &[0.0]).is_err());
    }
}
