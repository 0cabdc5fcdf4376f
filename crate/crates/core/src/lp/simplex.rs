//! Bounded-variable primal revised simplex.
//!
//! Every row gets a logical variable holding its activity, so the working
//! system is `A x - r = 0` with bounds on both `x` and `r`. Phase 1 minimizes
//! the sum of bound violations of the basic variables (costs of -1/+1 on
//! basics below/above their bounds), phase 2 the scaled objective. The ratio
//! test is Harris' two-pass variant; after a run of degenerate pivots the
//! pricing and ratio test fall back to Bland's rule until progress resumes.

use super::lu::{BasisColumns, LuFactors, Singular};
use super::problem::{CscMatrix, LpProblem};
use super::{LpSolution, SolveOptions, SolveStatus};

const PIVOT_TOL: f64 = 1e-9;
const POLISH_FACTOR: f64 = 1e-3;
const UNSET: usize = usize::MAX;
const DEVEX_RESET: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    Lower,
    Upper,
    /// Nonbasic away from its bounds: a free variable, or a starting value
    /// strictly inside the bounds.
    Between,
}

struct BasisRef<'a> {
    a: &'a CscMatrix,
    n: usize,
    basis: &'a [usize],
}

impl BasisColumns for BasisRef<'_> {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn column(&self, pos: usize, out: &mut Vec<(usize, f64)>) {
        let j = self.basis[pos];
        if j < self.n {
            let (rows, vals) = self.a.col(j);
            out.extend(rows.iter().copied().zip(vals.iter().copied()));
        } else {
            out.push((j - self.n, -1.0));
        }
    }
}

enum Exit {
    Optimal,
    Infeasible(Vec<f64>),
    Unbounded(Vec<f64>),
    IterLimit,
}

struct Simplex<'o> {
    opts: &'o SolveOptions,
    n: usize,
    m: usize,
    a: CscMatrix,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    pos_of: Vec<usize>,
    lu: LuFactors,
    iterations: usize,
    since_refactor: usize,
    stalled: usize,
    bland: bool,
    y: Vec<f64>,
    alpha: Vec<f64>,
    /// Row-wise copy of the scaled matrix, for pivot rows.
    row_start: Vec<usize>,
    row_col: Vec<usize>,
    row_val: Vec<f64>,
    /// Reduced costs of all columns; kept up to date across phase-2 pivots.
    d: Vec<f64>,
    d_valid: bool,
    rho: Vec<f64>,
    pivot_row: Vec<f64>,
    touched: Vec<usize>,
    /// Devex reference weights, one per column including logicals.
    weight: Vec<f64>,
}

/// Power-of-two geometric-mean row and column scale factors.
fn scale_factors(a: &CscMatrix, m: usize, n: usize, passes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut r = vec![1.0f64; m];
    let mut c = vec![1.0f64; n];
    for _ in 0..passes {
        let mut rmin = vec![f64::INFINITY; m];
        let mut rmax = vec![0.0f64; m];
        for j in 0..n {
            let (rows, vals) = a.col(j);
            for (&i, &v) in rows.iter().zip(vals) {
                let s = v.abs() * r[i] * c[j];
                rmin[i] = rmin[i].min(s);
                rmax[i] = rmax[i].max(s);
            }
        }
        for i in 0..m {
            if rmax[i] > 0.0 {
                r[i] /= (rmin[i] * rmax[i]).sqrt();
            }
        }
        for j in 0..n {
            let (rows, vals) = a.col(j);
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for (&i, &v) in rows.iter().zip(vals) {
                let s = v.abs() * r[i] * c[j];
                lo = lo.min(s);
                hi = hi.max(s);
            }
            if hi > 0.0 {
                c[j] /= (lo * hi).sqrt();
            }
        }
    }
    let pow2 = |v: f64| 2f64.powi(v.log2().round() as i32);
    (
        r.into_iter().map(pow2).collect(),
        c.into_iter().map(pow2).collect(),
    )
}

pub(crate) fn solve(problem: &LpProblem, opts: &SolveOptions, start: Option<&[f64]>) -> LpSolution {
    let n = problem.n_vars();
    let m = problem.n_rows();
    let mut a = problem.to_csc();
    let (row_scale, col_scale) = if opts.scaling && m > 0 && n > 0 {
        scale_factors(&a, m, n, 6)
    } else {
        (vec![1.0; m], vec![1.0; n])
    };
    for j in 0..n {
        for p in a.col_start[j]..a.col_start[j + 1] {
            a.values[p] *= row_scale[a.row_index[p]] * col_scale[j];
        }
    }
    let mut cost = vec![0.0; n + m];
    let mut lower = vec![0.0; n + m];
    let mut upper = vec![0.0; n + m];
    let mut cmax = 0.0f64;
    for j in 0..n {
        cost[j] = problem.cost[j] * col_scale[j];
        cmax = cmax.max(cost[j].abs());
        lower[j] = problem.lower[j] / col_scale[j];
        upper[j] = problem.upper[j] / col_scale[j];
    }
    let obj_scale = if cmax > 0.0 { 1.0 / cmax } else { 1.0 };
    for c in cost.iter_mut().take(n) {
        *c *= obj_scale;
    }
    for i in 0..m {
        let (lo, hi) = problem.sense[i].activity_bounds(problem.rhs[i]);
        lower[n + i] = lo * row_scale[i];
        upper[n + i] = hi * row_scale[i];
    }

    let mut x = vec![0.0; n + m];
    let mut state = vec![VarState::Basic; n + m];
    for j in 0..n {
        let hint = start.map(|s| s[j] / col_scale[j]).filter(|v| v.is_finite());
        let (s, v) = match hint {
            Some(v) if v <= lower[j] => (VarState::Lower, lower[j]),
            Some(v) if v >= upper[j] => (VarState::Upper, upper[j]),
            Some(v) => (VarState::Between, v),
            None if lower[j].is_finite() => (VarState::Lower, lower[j]),
            None if upper[j].is_finite() => (VarState::Upper, upper[j]),
            None => (VarState::Between, 0.0),
        };
        state[j] = s;
        x[j] = v;
    }
    let basis: Vec<usize> = (n..n + m).collect();
    let mut pos_of = vec![UNSET; n + m];
    for (pos, &j) in basis.iter().enumerate() {
        pos_of[j] = pos;
    }
    let lu = LuFactors::factorize(&BasisRef {
        a: &a,
        n,
        basis: &basis,
    })
    .expect("logical basis is nonsingular");
    let (row_start, row_col, row_val) = a.to_rows(m);
    let mut s = Simplex {
        opts,
        n,
        m,
        a,
        cost,
        lower,
        upper,
        x,
        state,
        basis,
        pos_of,
        lu,
        iterations: 0,
        since_refactor: 0,
        stalled: 0,
        bland: false,
        y: vec![0.0; m],
        alpha: vec![0.0; m],
        row_start,
        row_col,
        row_val,
        d: vec![0.0; n + m],
        d_valid: false,
        rho: vec![0.0; m],
        pivot_row: vec![0.0; n],
        touched: Vec::new(),
        weight: vec![1.0; n + m],
    };
    s.recompute_basics();
    let exit = s.run();

    // Unscale.
    let xs: Vec<f64> = (0..n).map(|j| s.x[j] * col_scale[j]).collect();
    let row_activity = problem.row_activity(&xs);
    let mut sol = LpSolution {
        status: SolveStatus::Optimal,
        objective: problem.objective_value(&xs),
        row_activity,
        x: xs,
        duals: vec![0.0; m],
        reduced_costs: vec![0.0; n],
        iterations: s.iterations,
        ray: None,
    };
    match exit {
        Exit::Optimal => {
            let duals: Vec<f64> = (0..m).map(|i| s.y[i] * row_scale[i] / obj_scale).collect();
            let aty = problem.transpose_product(&duals);
            sol.reduced_costs = (0..n).map(|j| problem.cost[j] - aty[j]).collect();
            sol.duals = duals;
        }
        Exit::Infeasible(y) => {
            sol.status = SolveStatus::Infeasible;
            sol.ray = Some((0..m).map(|i| y[i] * row_scale[i]).collect());
        }
        Exit::Unbounded(dir) => {
            sol.status = SolveStatus::Unbounded;
            sol.ray = Some((0..n).map(|j| dir[j] * col_scale[j]).collect());
        }
        Exit::IterLimit => sol.status = SolveStatus::IterLimit,
    }
    sol
}

impl Simplex<'_> {
    fn column_into(&self, j: usize, dense: &mut [f64]) {
        if j < self.n {
            let (rows, vals) = self.a.col(j);
            for (&i, &v) in rows.iter().zip(vals) {
                dense[i] = v;
            }
        } else {
            dense[j - self.n] = -1.0;
        }
    }

    fn recompute_basics(&mut self) {
        let mut rhs = vec![0.0; self.m];
        for j in 0..self.n + self.m {
            if self.state[j] == VarState::Basic || self.x[j] == 0.0 {
                continue;
            }
            let v = self.x[j];
            if j < self.n {
                let (rows, vals) = self.a.col(j);
                for (&i, &a) in rows.iter().zip(vals) {
                    rhs[i] -= a * v;
                }
            } else {
                rhs[j - self.n] += v;
            }
        }
        self.lu.ftran(&mut rhs);
        for pos in 0..self.m {
            self.x[self.basis[pos]] = rhs[pos];
        }
    }

    fn nonbasic_at_nearest_bound(&mut self, j: usize) {
        let (lo, hi, v) = (self.lower[j], self.upper[j], self.x[j]);
        let (s, val) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                if (v - lo).abs() <= (hi - v).abs() {
                    (VarState::Lower, lo)
                } else {
                    (VarState::Upper, hi)
                }
            }
            (true, false) => (VarState::Lower, lo),
            (false, true) => (VarState::Upper, hi),
            (false, false) => (VarState::Between, 0.0),
        };
        self.state[j] = s;
        self.x[j] = val;
    }

    fn refactor(&mut self) {
        loop {
            let res = LuFactors::factorize(&BasisRef {
                a: &self.a,
                n: self.n,
                basis: &self.basis,
            });
            match res {
                Ok(lu) => {
                    self.lu = lu;
                    break;
                }
                Err(Singular { positions, rows }) => {
                    log::debug!(
                        "singular basis: replacing {} columns by logicals",
                        positions.len()
                    );
                    for (&pos, &row) in positions.iter().zip(&rows) {
                        let j = self.basis[pos];
                        self.pos_of[j] = UNSET;
                        self.nonbasic_at_nearest_bound(j);
                        let logical = self.n + row;
                        self.basis[pos] = logical;
                        self.pos_of[logical] = pos;
                        self.state[logical] = VarState::Basic;
                    }
                }
            }
        }
        self.since_refactor = 0;
        self.d_valid = false;
        self.recompute_basics();
    }

    /// Number of basic variables outside their bounds; when positive, `y`
    /// is loaded with the phase-1 costs of the basic positions.
    fn phase1_costs(&mut self) -> usize {
        let tol = self.opts.feas_tol;
        let mut infeasible = 0;
        for pos in 0..self.m {
            let j = self.basis[pos];
            let v = self.x[j];
            let c = if v < self.lower[j] - tol {
                -1.0
            } else if v > self.upper[j] + tol {
                1.0
            } else {
                0.0
            };
            if c != 0.0 {
                if infeasible == 0 {
                    self.y[..pos].iter_mut().for_each(|y| *y = 0.0);
                }
                infeasible += 1;
            }
            if infeasible > 0 {
                self.y[pos] = c;
            }
        }
        infeasible
    }

    /// Phase-1 duals and reduced costs, exploiting the sparsity of `y`.
    fn phase1_prices(&mut self) {
        let mut y = std::mem::take(&mut self.y);
        self.lu.btran(&mut y);
        self.y = y;
        self.d.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.m {
            let yi = self.y[i];
            if yi == 0.0 {
                continue;
            }
            for p in self.row_start[i]..self.row_start[i + 1] {
                self.d[self.row_col[p]] -= self.row_val[p] * yi;
            }
            self.d[self.n + i] = yi;
        }
        self.d_valid = false;
    }

    /// Phase-2 duals and reduced costs from scratch.
    fn phase2_prices(&mut self) {
        for pos in 0..self.m {
            self.y[pos] = self.cost[self.basis[pos]];
        }
        let mut y = std::mem::take(&mut self.y);
        self.lu.btran(&mut y);
        self.y = y;
        for j in 0..self.n {
            let (rows, vals) = self.a.col(j);
            let mut d = self.cost[j];
            for (&i, &a) in rows.iter().zip(vals) {
                d -= a * self.y[i];
            }
            self.d[j] = d;
        }
        for i in 0..self.m {
            self.d[self.n + i] = self.y[i];
        }
        self.d_valid = true;
    }

    /// Updates phase-2 duals and reduced costs for the pivot that brings
    /// `q` into basis position `pos`. Must run before the eta is pushed.
    fn update_prices(&mut self, q: usize, pos: usize) {
        let leaving = self.basis[pos];
        self.rho.iter_mut().for_each(|v| *v = 0.0);
        self.rho[pos] = 1.0;
        let mut rho = std::mem::take(&mut self.rho);
        self.lu.btran(&mut rho);
        self.rho = rho;
        let theta = self.d[q] / self.alpha[pos];
        for i in 0..self.m {
            let r = self.rho[i];
            if r == 0.0 {
                continue;
            }
            for p in self.row_start[i]..self.row_start[i + 1] {
                let j = self.row_col[p];
                if self.pivot_row[j] == 0.0 {
                    self.touched.push(j);
                }
                self.pivot_row[j] += self.row_val[p] * r;
            }
            self.y[i] += theta * r;
            self.d[self.n + i] += theta * r;
        }
        let ap = self.alpha[pos];
        let wq = self.weight[q] / (ap * ap);
        let mut reset = false;
        for k in 0..self.touched.len() {
            let j = self.touched[k];
            let a = self.pivot_row[j];
            self.d[j] -= theta * a;
            self.pivot_row[j] = 0.0;
            if self.state[j] != VarState::Basic {
                let w = wq * a * a;
                if w > self.weight[j] {
                    self.weight[j] = w;
                    reset |= w > DEVEX_RESET;
                }
            }
        }
        for i in 0..self.m {
            let r = self.rho[i];
            if r != 0.0 && self.state[self.n + i] != VarState::Basic {
                let w = wq * r * r;
                if w > self.weight[self.n + i] {
                    self.weight[self.n + i] = w;
                    reset |= w > DEVEX_RESET;
                }
            }
        }
        self.touched.clear();
        self.d[q] = 0.0;
        self.d[leaving] = -theta;
        self.weight[leaving] = wq.max(1.0);
        if reset {
            self.weight.iter_mut().for_each(|w| *w = 1.0);
        }
    }

    /// Entering variable and its reduced cost.
    fn price(&self, tol: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.n + self.m {
            let st = self.state[j];
            if st == VarState::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let d = self.d[j];
            let eligible = match st {
                VarState::Lower => d < -tol,
                VarState::Upper => d > tol,
                VarState::Between => d.abs() > tol,
                VarState::Basic => false,
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some((j, d));
            }
            let score = d * d / self.weight[j];
            if score > best_score {
                best_score = score;
                best = Some((j, d));
            }
        }
        best
    }

    fn run(&mut self) -> Exit {
        let mut numeric_retries = 0usize;
        let mut polishing = false;
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Exit::IterLimit;
            }
            if self.since_refactor >= self.opts.refactor_interval
                || self.lu.eta_nnz() > 4 * self.lu.factor_nnz() + 8 * self.m
            {
                self.refactor();
            }
            let phase1 = self.phase1_costs() > 0;
            if phase1 {
                self.phase1_prices();
            } else if !self.d_valid {
                self.phase2_prices();
            }

            // Phase 2 ends with a polishing pass at a tighter reduced-cost
            // tolerance: the scaled tolerance is loose for columns whose
            // unscaled costs are small next to the largest cost.
            let tol = if phase1 || !polishing {
                self.opts.opt_tol
            } else {
                self.opts.opt_tol * POLISH_FACTOR
            };
            let Some((q, dq)) = self.price(tol) else {
                if self.since_refactor > 0 {
                    // Confirm with a fresh factorization.
                    self.refactor();
                    continue;
                }
                if phase1 {
                    return Exit::Infeasible(self.y.clone());
                }
                if !polishing {
                    polishing = true;
                    continue;
                }
                return Exit::Optimal;
            };
            let dir = if dq < 0.0 { 1.0 } else { -1.0 };

            let mut alpha = std::mem::take(&mut self.alpha);
            alpha.iter_mut().for_each(|v| *v = 0.0);
            self.column_into(q, &mut alpha);
            self.lu.ftran(&mut alpha);
            self.alpha = alpha;
            let step = self.ratio_test(q, dir);
            match step {
                Step::Unbounded => {
                    if phase1 {
                        numeric_retries += 1;
                        if numeric_retries > 5 {
                            log::warn!(
                                "phase 1 found an unbounded direction repeatedly; giving up"
                            );
                            return Exit::IterLimit;
                        }
                        self.refactor();
                        continue;
                    }
                    let mut ray = vec![0.0; self.n];
                    if q < self.n {
                        ray[q] = dir;
                    }
                    for pos in 0..self.m {
                        let j = self.basis[pos];
                        if j < self.n {
                            ray[j] = -dir * self.alpha[pos];
                        }
                    }
                    return Exit::Unbounded(ray);
                }
                Step::Flip(t) => {
                    self.apply_step(q, dir * t);
                    self.x[q] = if dir > 0.0 {
                        self.upper[q]
                    } else {
                        self.lower[q]
                    };
                    self.state[q] = if dir > 0.0 {
                        VarState::Upper
                    } else {
                        VarState::Lower
                    };
                    self.track_progress(t);
                }
                Step::Pivot { pos, t, target } => {
                    self.apply_step(q, dir * t);
                    let leaving = self.basis[pos];
                    self.x[leaving] = target;
                    self.state[leaving] = if target == self.lower[leaving] {
                        VarState::Lower
                    } else {
                        VarState::Upper
                    };
                    if !phase1 {
                        self.update_prices(q, pos);
                    }
                    self.pos_of[leaving] = UNSET;
                    self.basis[pos] = q;
                    self.pos_of[q] = pos;
                    self.state[q] = VarState::Basic;
                    self.lu.push_eta(pos, &self.alpha);
                    self.since_refactor += 1;
                    self.track_progress(t);
                }
            }
            self.iterations += 1;
        }
    }

    fn apply_step(&mut self, q: usize, delta: f64) {
        if delta == 0.0 {
            return;
        }
        self.x[q] += delta;
        for pos in 0..self.m {
            let a = self.alpha[pos];
            if a != 0.0 {
                self.x[self.basis[pos]] -= delta * a;
            }
        }
    }

    fn track_progress(&mut self, t: f64) {
        if t <= 1e-12 {
            self.stalled += 1;
            if !self.bland && self.stalled > self.opts.bland_after_stall {
                log::debug!(
                    "{} degenerate pivots; switching to Bland's rule",
                    self.stalled
                );
                self.bland = true;
            }
        } else {
            self.stalled = 0;
            self.bland = false;
        }
    }

    fn ratio_test(&self, q: usize, dir: f64) -> Step {
        let tol = self.opts.feas_tol;
        let flip = if dir > 0.0 {
            self.upper[q] - self.x[q]
        } else {
            self.x[q] - self.lower[q]
        };
        // Candidates: (pos, exact ratio, relaxed ratio, target bound).
        let mut cands: Vec<(usize, f64, f64, f64)> = Vec::new();
        for pos in 0..self.m {
            let a = self.alpha[pos];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[pos];
            let v = self.x[j];
            let delta = -dir * a;
            let (lo, hi) = (self.lower[j], self.upper[j]);
            let (target, relaxed) = if delta < 0.0 {
                if v > hi + tol {
                    (hi, hi)
                } else if v < lo - tol || lo == f64::NEG_INFINITY {
                    continue;
                } else {
                    (lo, lo - tol)
                }
            } else if v < lo - tol {
                (lo, lo)
            } else if v > hi + tol || hi == f64::INFINITY {
                continue;
            } else {
                (hi, hi + tol)
            };
            let exact = ((target - v) / delta).max(0.0);
            let relaxed = ((relaxed - v) / delta).max(0.0);
            cands.push((pos, exact, relaxed, target));
        }
        if self.bland {
            let mut best: Option<(usize, f64, f64)> = None;
            for &(pos, exact, _, target) in &cands {
                best = match best {
                    None => Some((pos, exact, target)),
                    Some((bp, be, bt)) => {
                        let tie = (exact - be).abs() <= 1e-12 * (1.0 + be.abs());
                        if exact < be && !tie || tie && self.basis[pos] < self.basis[bp] {
                            Some((pos, exact, target))
                        } else {
                            Some((bp, be, bt))
                        }
                    }
                };
            }
            return match best {
                Some((_, t, _)) if flip <= t => Step::Flip(flip),
                Some((pos, t, target)) => Step::Pivot { pos, t, target },
                None if flip.is_finite() => Step::Flip(flip),
                None => Step::Unbounded,
            };
        }
        let tmax = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
        if flip.is_finite() && flip <= tmax {
            return Step::Flip(flip);
        }
        if cands.is_empty() {
            return Step::Unbounded;
        }
        let mut best: Option<(usize, f64, f64)> = None;
        let mut best_mag = 0.0;
        for &(pos, exact, _, target) in &cands {
            if exact > tmax {
                continue;
            }
            let mag = self.alpha[pos].abs();
            let better = match best {
                None => true,
                Some((bp, _, _)) => {
                    mag > best_mag || mag == best_mag && self.basis[pos] < self.basis[bp]
                }
            };
            if better {
                best = Some((pos, exact, target));
                best_mag = mag;
            }
        }
        let (pos, t, target) = best.expect("tmax is attained by some candidate");
        Step::Pivot { pos, t, target }
    }
}

enum Step {
    Flip(f64),
    Pivot { pos: usize, t: f64, target: f64 },
    Unbounded,
}
