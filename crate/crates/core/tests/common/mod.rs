//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use flexplan_core::lp::{LpBuilder, LpProblem, RowSense};
use flexplan_core::scenarios::{scenario_tree, DayRecord};
use flexplan_core::synthetic::{synthetic_days, SyntheticSpec};
use flexplan_core::{ProcessSpec, ScenarioTree, TechEconSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Small dense LP with finite bounds on every variable.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub sense: Vec<RowSense>,
    pub rhs: Vec<f64>,
}

impl DenseLp {
    pub fn to_problem(&self) -> LpProblem {
        let mut b = LpBuilder::new();
        let vars: Vec<_> = (0..self.cost.len())
            .map(|j| b.add_var(format!("x{j}"), self.cost[j], self.lower[j], self.upper[j]))
            .collect();
        for (i, row) in self.rows.iter().enumerate() {
            b.add_row(
                format!("r{i}"),
                self.sense[i],
                self.rhs[i],
                row.iter().enumerate().map(|(j, &a)| (vars[j], a)),
            );
        }
        b.build().expect("finite data")
    }

    fn feasible(&self, x: &[f64], tol: f64) -> bool {
        for j in 0..x.len() {
            if x[j] < self.lower[j] - tol || x[j] > self.upper[j] + tol {
                return false;
            }
        }
        self.rows
            .iter()
            .zip(&self.sense)
            .zip(&self.rhs)
            .all(|((row, s), &b)| {
                let act: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
                let scale = tol * (1.0 + b.abs());
                match s {
                    RowSense::Le => act <= b + scale,
                    RowSense::Ge => act >= b - scale,
                    RowSense::Eq => (act - b).abs() <= scale,
                }
            })
    }
}

/// Draws an LP with at most `max_vars` variables and `max_rows` rows. Small
/// integer data makes degenerate vertices common.
pub fn random_lp(rng: &mut ChaCha8Rng, max_vars: usize, max_rows: usize) -> DenseLp {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(1..=max_rows);
    let lower: Vec<f64> = (0..n).map(|_| rng.random_range(-4..=0) as f64).collect();
    let upper: Vec<f64> = lower
        .iter()
        .map(|l| l + rng.random_range(0..=6) as f64)
        .collect();
    let cost: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=5) as f64).collect();
    let anchor: Vec<f64> = (0..n)
        .map(|j| rng.random_range(lower[j]..=upper[j]))
        .collect();
    let mut rows = Vec::with_capacity(m);
    let mut sense = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for _ in 0..m {
        let row: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.3) {
                    0.0
                } else {
                    rng.random_range(-5..=5) as f64
                }
            })
            .collect();
        let act: f64 = row.iter().zip(&anchor).map(|(a, v)| a * v).sum();
        // Mostly feasible around the anchor, sometimes cut off.
        let shift = if rng.random_bool(0.15) {
            -3.0
        } else {
            rng.random_range(0..=3) as f64
        };
        let s = match rng.random_range(0..6) {
            0 => RowSense::Eq,
            1 | 2 => RowSense::Ge,
            _ => RowSense::Le,
        };
        let b = match s {
            RowSense::Le => (act + shift).round(),
            RowSense::Ge => (act - shift).round(),
            RowSense::Eq => act,
        };
        rows.push(row);
        sense.push(s);
        rhs.push(b);
    }
    DenseLp {
        cost,
        lower,
        upper,
        rows,
        sense,
        rhs,
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting; `None`
/// when the matrix is numerically singular.
fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for cc in c..k {
                    a[r][cc] -= f * a[c][cc];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; k];
    for c in (0..k).rev() {
        let s: f64 = (c + 1..k).map(|cc| a[c][cc] * x[cc]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimum objective over all vertices of the feasible polytope, or `None`
/// when it is empty.
///
/// A vertex fixes every variable outside a set `F` at one of its bounds and
/// makes `|F|` rows active, with the `F` columns of those rows nonsingular.
pub fn vertex_enumeration(lp: &DenseLp) -> Option<f64> {
    let n = lp.cost.len();
    let m = lp.rows.len();
    let mut best: Option<f64> = None;
    for k in 0..=n.min(m) {
        for free in subsets(n, k) {
            let fixed: Vec<usize> = (0..n).filter(|j| !free.contains(j)).collect();
            for active in subsets(m, k) {
                for mask in 0..(1u32 << fixed.len()) {
                    let mut x = vec![0.0; n];
                    for (b, &j) in fixed.iter().enumerate() {
                        x[j] = if mask >> b & 1 == 1 {
                            lp.upper[j]
                        } else {
                            lp.lower[j]
                        };
                    }
                    if k > 0 {
                        let a: Vec<Vec<f64>> = active
                            .iter()
                            .map(|&i| free.iter().map(|&j| lp.rows[i][j]).collect())
                            .collect();
                        let rhs: Vec<f64> = active
                            .iter()
                            .map(|&i| {
                                lp.rhs[i] - fixed.iter().map(|&j| lp.rows[i][j] * x[j]).sum::<f64>()
                            })
                            .collect();
                        let Some(sol) = gauss(a, rhs) else { continue };
                        for (v, &j) in sol.iter().zip(&free) {
                            x[j] = *v;
                        }
                    }
                    if lp.feasible(&x, 1e-9) {
                        let obj: f64 = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                        best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                    }
                }
            }
        }
    }
    best
}

/// Minimum within-cluster sum of squares over every assignment of the rows
/// to `k` non-empty clusters.
pub fn brute_force_wcss(rows: &[Vec<f64>], k: usize) -> f64 {
    let n = rows.len();
    let mut best = f64::INFINITY;
    let mut assign = vec![0usize; n];
    loop {
        let mut sizes = vec![0usize; k];
        for &a in &assign {
            sizes[a] += 1;
        }
        if sizes.iter().all(|&s| s > 0) {
            let mut total = 0.0;
            for c in 0..k {
                let members: Vec<&Vec<f64>> = rows
                    .iter()
                    .zip(&assign)
                    .filter(|(_, &a)| a == c)
                    .map(|(r, _)| r)
                    .collect();
                let dim = members[0].len();
                for d in 0..dim {
                    let mean = members.iter().map(|r| r[d]).sum::<f64>() / members.len() as f64;
                    total += members.iter().map(|r| (r[d] - mean).powi(2)).sum::<f64>();
                }
            }
            best = best.min(total);
        }
        // Next assignment in base k.
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

pub fn synthetic(days: usize, seed: u64) -> Vec<DayRecord> {
    synthetic_days(&SyntheticSpec::new(days, seed))
}

pub fn reference_inputs(
    days: usize,
    k: usize,
    seed: u64,
) -> (ScenarioTree, ProcessSpec, TechEconSpec) {
    let (tree, _) = scenario_tree(&synthetic(days, seed), k, seed).expect("valid fixture");
    let process = ProcessSpec::reference();
    let econ = TechEconSpec::reference(process.nominal_power);
    (tree, process, econ)
}

/// Largest violations of the structural properties of an optimal design.
#[derive(Debug, Clone, Copy, Default)]
pub struct Invariants {
    /// Energy balance residual in MW.
    pub balance: f64,
    /// Battery and product storage dynamics residual, wrap-around included, in MWh.
    pub dynamics: f64,
    /// Whether the closing states equal the opening states bit for bit.
    pub closure_exact: bool,
    /// Whether day-ahead schedules are bit-identical within each cluster.
    pub da_shared: bool,
    /// Largest gap between a grid-fee auxiliary and `max(0, fee * dt * net)`, in EUR.
    pub fee_gap: f64,
}

pub fn invariants(
    r: &flexplan_core::DesignResult,
    process: &ProcessSpec,
    econ: &TechEconSpec,
) -> Invariants {
    use flexplan_core::{DT_HOURS, QUARTERS_PER_DAY};
    let mut out = Invariants {
        closure_exact: true,
        da_shared: true,
        ..Default::default()
    };
    let dt = DT_HOURS;
    for s in &r.schedules {
        for t in 0..QUARTERS_PER_DAY {
            let da = s.da_trade[t / 4];
            let supply =
                da + s.id_trade[t] + s.pv_power[t] + s.wind_power[t] - s.charge[t] + s.discharge[t];
            out.balance = out.balance.max((s.process_power[t] - supply).abs());
            let soc = s.state_of_charge[t + 1]
                - s.state_of_charge[t]
                - (econ.eta_in * s.charge[t] - s.discharge[t] / econ.eta_out) * dt;
            let store = s.product_storage[t + 1]
                - s.product_storage[t]
                - (s.process_power[t] - process.nominal_power) * dt;
            out.dynamics = out.dynamics.max(soc.abs()).max(store.abs());
            let fee = (econ.grid_fee * dt * (da + s.id_trade[t])).max(0.0);
            out.fee_gap = out.fee_gap.max((s.grid_fee_aux[t] - fee).abs());
        }
        out.closure_exact &= s.state_of_charge[QUARTERS_PER_DAY] == s.state_of_charge[0]
            && s.product_storage[QUARTERS_PER_DAY] == s.product_storage[0];
        for o in &r.schedules {
            if o.cluster_id == s.cluster_id {
                out.da_shared &= o
                    .da_trade
                    .iter()
                    .zip(&s.da_trade)
                    .all(|(a, b)| a.to_bits() == b.to_bits());
            }
        }
    }
    out
}
