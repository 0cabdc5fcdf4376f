use super::{LpProblem, LpSolution, RowSense};
use serde::{Deserialize, Serialize};

/// Residuals of a claimed optimal solution, measured on the unscaled problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    /// Largest row or bound violation (absolute).
    pub primal_residual: f64,
    /// Largest stationarity or dual-sign violation, relative to `1 + max|c|`.
    pub dual_residual: f64,
    /// Largest complementary-slackness product, relative to `1 + |objective|`.
    pub complementarity: f64,
    pub primal_objective: f64,
    /// `b'y` plus bound terms of the reduced costs, plus the objective offset.
    pub dual_objective: f64,
    pub duality_gap: f64,
}

impl SolutionReport {
    /// Primal and dual residuals within `tol`, duality gap within `tol * (1 + |obj|)`.
    pub fn passes(&self, tol: f64) -> bool {
        self.primal_residual <= tol
            && self.dual_residual <= tol
            && self.complementarity <= tol
            && self.duality_gap <= tol * (1.0 + self.primal_objective.abs())
    }
}

pub fn check_solution(problem: &LpProblem, sol: &LpSolution) -> SolutionReport {
    let n = problem.n_vars();
    let m = problem.n_rows();
    let x = &sol.x;
    let y = &sol.duals;
    let activity = problem.row_activity(x);
    let obj = problem.objective_value(x);

    let mut primal: f64 = 0.0;
    for i in 0..m {
        let (lo, hi) = problem.sense[i].activity_bounds(problem.rhs[i]);
        primal = primal.max(lo - activity[i]).max(activity[i] - hi);
    }
    for j in 0..n {
        primal = primal
            .max(problem.lower[j] - x[j])
            .max(x[j] - problem.upper[j]);
    }

    let cscale = 1.0 + problem.cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let aty = problem.transpose_product(y);
    let mut dual: f64 = 0.0;
    let mut compl: f64 = 0.0;
    let mut dual_obj = problem.offset;
    for j in 0..n {
        let d = problem.cost[j] - aty[j];
        dual = dual.max((d - sol.reduced_costs[j]).abs());
        let (lo, hi) = (problem.lower[j], problem.upper[j]);
        let bound = if d > 0.0 {
            if lo.is_finite() {
                lo
            } else {
                dual = dual.max(d);
                x[j]
            }
        } else if d < 0.0 {
            if hi.is_finite() {
                hi
            } else {
                dual = dual.max(-d);
                x[j]
            }
        } else {
            x[j]
        };
        dual_obj += d * bound;
        compl = compl.max((d * (x[j] - bound)).abs());
    }
    for i in 0..m {
        let yi = y[i];
        match problem.sense[i] {
            RowSense::Le => dual = dual.max(yi),
            RowSense::Ge => dual = dual.max(-yi),
            RowSense::Eq => {}
        }
        dual_obj += yi * problem.rhs[i];
        compl = compl.max((yi * (activity[i] - problem.rhs[i])).abs());
    }
    SolutionReport {
        primal_residual: primal.max(0.0),
        dual_residual: dual / cscale,
        complementarity: compl / (1.0 + obj.abs()),
        primal_objective: obj,
        dual_objective: dual_obj,
        duality_gap: (obj - dual_obj).abs(),
    }
}

fn box_range(coef: f64, lo: f64, hi: f64) -> (f64, f64) {
    if coef == 0.0 {
        return (0.0, 0.0);
    }
    let (a, b) = (coef * lo, coef * hi);
    let (mut mn, mut mx) = if coef > 0.0 { (a, b) } else { (b, a) };
    if mn.is_nan() {
        mn = f64::NEG_INFINITY;
    }
    if mx.is_nan() {
        mx = f64::INFINITY;
    }
    (mn, mx)
}

/// Checks that row multipliers `ray` prove the problem infeasible.
///
/// Any feasible point satisfies `(A'y)'x = y'(Ax)`. The certificate holds when
/// the range of the left side over the variable box and the range of the
/// right side over the admissible row activities do not intersect.
pub fn verify_farkas(problem: &LpProblem, ray: &[f64]) -> bool {
    if ray.len() != problem.n_rows() {
        return false;
    }
    let ynorm = ray.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if ynorm == 0.0 {
        return false;
    }
    let y: Vec<f64> = ray.iter().map(|v| v / ynorm).collect();
    let z = problem.transpose_product(&y);
    let tiny = 1e-9;
    let (mut zmin, mut zmax) = (0.0, 0.0);
    for (j, &zj) in z.iter().enumerate() {
        let zj = if zj.abs() < tiny { 0.0 } else { zj };
        let (a, b) = box_range(zj, problem.lower[j], problem.upper[j]);
        zmin += a;
        zmax += b;
    }
    let (mut rmin, mut rmax) = (0.0, 0.0);
    for (i, &yi) in y.iter().enumerate() {
        let yi = if yi.abs() < tiny { 0.0 } else { yi };
        let (lo, hi) = problem.sense[i].activity_bounds(problem.rhs[i]);
        let (a, b) = box_range(yi, lo, hi);
        rmin += a;
        rmax += b;
    }
    let margin = 1e-7;
    zmax < rmin - margin || zmin > rmax + margin
}

/// Checks that `ray` is a feasible direction of strict objective descent.
pub fn verify_unbounded_ray(problem: &LpProblem, ray: &[f64]) -> bool {
    if ray.len() != problem.n_vars() {
        return false;
    }
    let norm = ray.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if norm == 0.0 {
        return false;
    }
    let r: Vec<f64> = ray.iter().map(|v| v / norm).collect();
    let tol = 1e-9;
    let descent: f64 = problem.cost.iter().zip(&r).map(|(c, v)| c * v).sum();
    if descent >= -tol {
        return false;
    }
    for (j, &v) in r.iter().enumerate() {
        if v > tol && problem.upper[j].is_finite() || v < -tol && problem.lower[j].is_finite() {
            return false;
        }
    }
    let ar = problem.row_activity(&r);
    problem.sense.iter().zip(&ar).all(|(s, &v)| match s {
        RowSense::Le => v <= tol,
        RowSense::Ge => v >= -tol,
        RowSense::Eq => v.abs() <= tol,
    })
}
