//! Study drivers: Pareto fronts, flexibility sweeps, capacity heatmaps,
//! savings decompositions and market-mode comparisons.
//!
//! Every driver solves independent LPs, in parallel where there are several,
//! and assembles its table in the input order, so results depend only on
//! the inputs.

mod sweep;

pub use sweep::{flexibility_sweep, SweepParameter, SweepRow, SweepSpec};

use crate::domain::{
    CostBreakdown, DesignResult, ProcessSpec, ScenarioTree, TechEconSpec, TradeTotals,
};
use crate::lp::{
    check_solution, LpSolution, RowSense, SolutionReport, SolveOptions, SolveStatus, VarId,
};
use crate::model::{
    build, extract, ExtractError, MarketMode, Model, ModelConfig, ModelError, Objective,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance at which a study solve is reported as passing the residual checks.
pub const CHECK_TOL: f64 = 1e-6;

/// Relative slack on objective bounds used to pin a lexicographic second stage.
const LEX_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StudyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{label}: solver finished with status {status:?}")]
    NotOptimal { label: String, status: SolveStatus },
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("invalid study input: {0}")]
    Invalid(String),
}

/// Shared inputs of every study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyInputs {
    pub tree: ScenarioTree,
    pub process: ProcessSpec,
    pub econ: TechEconSpec,
    pub market_mode: MarketMode,
    pub solve: SolveOptions,
}

impl StudyInputs {
    pub fn new(tree: ScenarioTree, process: ProcessSpec, econ: TechEconSpec) -> Self {
        Self {
            tree,
            process,
            econ,
            market_mode: MarketMode::Simultaneous,
            solve: SolveOptions::default(),
        }
    }

    fn with(&self, process: ProcessSpec, econ: TechEconSpec) -> Self {
        Self {
            process,
            econ,
            ..self.clone()
        }
    }
}

/// An optimal design with the residual report of the solve behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvedDesign {
    pub result: DesignResult,
    pub report: SolutionReport,
    pub iterations: usize,
}

impl SolvedDesign {
    pub fn check_passed(&self) -> bool {
        self.report.passes(CHECK_TOL)
    }

    pub fn summary(&self) -> DesignSummary {
        let r = &self.result;
        DesignSummary {
            tac: r.tac,
            gwi: r.gwi,
            q_pv: r.q_pv,
            q_wind: r.q_wind,
            q_batt: r.q_batt,
            breakdown: r.breakdown,
            trades: r.trades,
            check_passed: self.check_passed(),
        }
    }
}

/// Scalar outcome of one solve, without schedules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub tac: f64,
    pub gwi: f64,
    pub q_pv: f64,
    pub q_wind: f64,
    pub q_batt: f64,
    pub breakdown: CostBreakdown,
    pub trades: TradeTotals,
    pub check_passed: bool,
}

/// Builds, solves and extracts one design.
pub fn solve_design(
    inputs: &StudyInputs,
    objective: Objective,
) -> Result<SolvedDesign, StudyError> {
    let model = build(
        &inputs.tree,
        &inputs.process,
        &inputs.econ,
        &ModelConfig::new(inputs.market_mode, objective),
    )?;
    solve_model(&model, inputs, &format!("{objective:?}"))
}

fn solve_model(
    model: &Model,
    inputs: &StudyInputs,
    label: &str,
) -> Result<SolvedDesign, StudyError> {
    let sol = model.solve(&inputs.solve);
    finish(model, &sol, inputs, label)
}

fn finish(
    model: &Model,
    sol: &LpSolution,
    inputs: &StudyInputs,
    label: &str,
) -> Result<SolvedDesign, StudyError> {
    if !sol.is_optimal() {
        return Err(StudyError::NotOptimal {
            label: label.to_string(),
            status: sol.status,
        });
    }
    Ok(SolvedDesign {
        result: extract(sol, model, &inputs.tree, &inputs.econ)?,
        report: check_solution(&model.problem, sol),
        iterations: sol.iterations,
    })
}

fn bound_with_slack(v: f64) -> f64 {
    v + LEX_SLACK * (1.0 + v.abs())
}

fn coefficients(c: &[f64]) -> Vec<(VarId, f64)> {
    c.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(j, &v)| (VarId(j), v))
        .collect()
}

/// Minimizes `secondary` among the optima of `primary`, whose optimal value
/// is `primary_opt`.
fn lexicographic(
    model: &Model,
    inputs: &StudyInputs,
    primary: &[f64],
    primary_opt: f64,
    secondary: &[f64],
    label: &str,
) -> Result<SolvedDesign, StudyError> {
    let mut m = model.clone();
    m.problem
        .push_row(
            "lex_bound",
            RowSense::Le,
            bound_with_slack(primary_opt),
            &coefficients(primary),
        )
        .map_err(ModelError::from)?;
    m.problem
        .set_objective(secondary.to_vec(), 0.0)
        .map_err(ModelError::from)?;
    solve_model(&m, inputs, label)
}

/// One point of a TAC/GWI front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    /// GWI bound imposed on the TAC minimization; the first point is unbounded.
    pub gwi_bound: f64,
    pub design: SolvedDesign,
}

/// TAC/GWI front with `n_points` points, from the TAC optimum to the GWI
/// optimum, with intermediate bounds equi-spaced in GWI.
///
/// Both endpoints are lexicographic: the TAC optimum with the lowest GWI and
/// the GWI optimum with the lowest TAC.
pub fn pareto_front(inputs: &StudyInputs, n_points: usize) -> Result<Vec<ParetoPoint>, StudyError> {
    if n_points < 2 {
        return Err(StudyError::Invalid(format!(
            "a front needs at least 2 points, got {n_points}"
        )));
    }
    let cfg = ModelConfig::new(inputs.market_mode, Objective::Tac);
    let model = build(&inputs.tree, &inputs.process, &inputs.econ, &cfg)?;
    let gwi_model = {
        let mut m = model.clone();
        m.problem
            .set_objective(m.gwi.clone(), 0.0)
            .map_err(ModelError::from)?;
        m
    };
    let (tac_first, gwi_first) = rayon::join(
        || solve_model(&model, inputs, "TAC optimum"),
        || solve_model(&gwi_model, inputs, "GWI optimum"),
    );
    let (tac_first, gwi_first) = (tac_first?, gwi_first?);
    let (tac_end, gwi_end) = rayon::join(
        || {
            lexicographic(
                &model,
                inputs,
                &model.tac,
                tac_first.result.tac,
                &model.gwi,
                "TAC endpoint",
            )
        },
        || {
            lexicographic(
                &model,
                inputs,
                &model.gwi,
                gwi_first.result.gwi,
                &model.tac,
                "GWI endpoint",
            )
        },
    );
    let (tac_end, gwi_end) = (tac_end?, gwi_end?);

    let (g_hi, g_lo) = (tac_end.result.gwi, gwi_end.result.gwi);
    let steps = (n_points - 1) as f64;
    let bounds: Vec<f64> = (1..n_points - 1)
        .map(|k| g_hi + (g_lo - g_hi) * k as f64 / steps)
        .collect();
    let inner: Vec<ParetoPoint> = bounds
        .par_iter()
        .map(|&bound| {
            let mut m = model.clone();
            m.problem
                .push_row("gwi_bound", RowSense::Le, bound, &coefficients(&model.gwi))
                .map_err(ModelError::from)?;
            let design = solve_model(&m, inputs, &format!("GWI <= {bound}"))?;
            Ok(ParetoPoint {
                gwi_bound: bound,
                design,
            })
        })
        .collect::<Result<_, StudyError>>()?;

    let mut front = Vec::with_capacity(n_points);
    front.push(ParetoPoint {
        gwi_bound: f64::INFINITY,
        design: tac_end,
    });
    front.extend(inner);
    front.push(ParetoPoint {
        gwi_bound: g_lo,
        design: gwi_end,
    });
    Ok(front)
}

/// Optimal TAC and capacities over a grid of process oversizing (rows) and
/// joint capacity scale factors (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub oversizing: Vec<f64>,
    pub scale: Vec<f64>,
    /// Row-major cells, `cells[row * scale.len() + col]`.
    pub cells: Vec<DesignSummary>,
}

impl Heatmap {
    pub fn cell(&self, row: usize, col: usize) -> &DesignSummary {
        &self.cells[row * self.scale.len() + col]
    }

    /// `(row, col, value)` triples in row-major order.
    pub fn long(&self, f: impl Fn(&DesignSummary) -> f64) -> Vec<(usize, usize, f64)> {
        let cols = self.scale.len();
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| (k / cols, k % cols, f(c)))
            .collect()
    }

    /// Relative error `|TAC - TAC_est| / TAC` of the additive estimate
    /// `TAC_est = TAC(0,0) - (TAC(0,0) - TAC(r,0)) - (TAC(0,0) - TAC(0,c))`,
    /// which adds the standalone savings of process flexibility (first column
    /// as reference) and of the energy system (first row as reference).
    pub fn additivity(&self) -> Vec<(usize, usize, f64)> {
        let base = self.cell(0, 0).tac;
        self.long(|_| 0.0)
            .into_iter()
            .map(|(r, c, _)| {
                let tac = self.cell(r, c).tac;
                let est = self.cell(r, 0).tac + self.cell(0, c).tac - base;
                (r, c, (tac - est).abs() / tac.abs())
            })
            .collect()
    }

    pub fn max_additivity_error(&self) -> f64 {
        self.additivity().iter().fold(0.0, |a, t| a.max(t.2))
    }
}

pub fn default_heatmap_scales() -> Vec<f64> {
    (0..=8).map(|k| k as f64 * 0.25).collect()
}

/// Solves the TAC problem in every (oversizing, scale) cell.
pub fn capacity_heatmap(
    inputs: &StudyInputs,
    oversizing: &[f64],
    scale: &[f64],
) -> Result<Heatmap, StudyError> {
    if oversizing.is_empty() || scale.is_empty() {
        return Err(StudyError::Invalid(
            "heatmap grids must be non-empty".into(),
        ));
    }
    let grid: Vec<(f64, f64)> = oversizing
        .iter()
        .flat_map(|&o| scale.iter().map(move |&s| (o, s)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(o, s)| {
            let process = ProcessSpec {
                oversizing: o,
                ..inputs.process
            };
            let cell = inputs.with(process, inputs.econ.with_capacity_scale(s));
            Ok(solve_design(&cell, Objective::Tac)?.summary())
        })
        .collect::<Result<_, StudyError>>()?;
    Ok(Heatmap {
        oversizing: oversizing.to_vec(),
        scale: scale.to_vec(),
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    InflexibleNoSystem,
    InflexibleBattery,
    InflexibleRenewables,
    FlexibleNoSystem,
    FlexibleFullSystem,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::InflexibleNoSystem,
        Variant::InflexibleBattery,
        Variant::InflexibleRenewables,
        Variant::FlexibleNoSystem,
        Variant::FlexibleFullSystem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::InflexibleNoSystem => "inflexible_no_system",
            Variant::InflexibleBattery => "inflexible_battery",
            Variant::InflexibleRenewables => "inflexible_wind_pv",
            Variant::FlexibleNoSystem => "flexible_no_system",
            Variant::FlexibleFullSystem => "flexible_full_system",
        }
    }

    fn specs(self, process: &ProcessSpec, econ: &TechEconSpec) -> (ProcessSpec, TechEconSpec) {
        let inflexible = ProcessSpec::inflexible(process.nominal_power);
        let mut battery_only = *econ;
        battery_only.pv.capacity_max = 0.0;
        battery_only.wind.capacity_max = 0.0;
        let mut renewables_only = *econ;
        renewables_only.battery.capacity_max = 0.0;
        match self {
            Variant::InflexibleNoSystem => (inflexible, econ.without_system()),
            Variant::InflexibleBattery => (inflexible, battery_only),
            Variant::InflexibleRenewables => (inflexible, renewables_only),
            Variant::FlexibleNoSystem => (*process, econ.without_system()),
            Variant::FlexibleFullSystem => (*process, *econ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub variant: Variant,
    pub summary: DesignSummary,
    /// TAC saved against the inflexible process without a local system.
    pub savings: f64,
    pub relative_savings: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsDecomposition {
    pub rows: Vec<DecompositionRow>,
    /// Sum of the three single-addition savings.
    pub summed_savings: f64,
    /// `|summed - full| / full` savings; zero when the full savings vanish.
    pub additivity_gap: f64,
}

impl SavingsDecomposition {
    pub fn row(&self, v: Variant) -> &DecompositionRow {
        self.rows
            .iter()
            .find(|r| r.variant == v)
            .expect("every variant is solved")
    }
}

/// TAC-optimal designs for the inflexible baseline, each single addition
/// (battery, wind and PV, process flexibility) and the full combination.
pub fn savings_decomposition(inputs: &StudyInputs) -> Result<SavingsDecomposition, StudyError> {
    let summaries: Vec<DesignSummary> = Variant::ALL
        .par_iter()
        .map(|v| {
            let (process, econ) = v.specs(&inputs.process, &inputs.econ);
            Ok(solve_design(&inputs.with(process, econ), Objective::Tac)?.summary())
        })
        .collect::<Result<_, StudyError>>()?;
    let base = summaries[0].tac;
    let rows: Vec<DecompositionRow> = Variant::ALL
        .iter()
        .zip(summaries)
        .map(|(&variant, summary)| DecompositionRow {
            variant,
            summary,
            savings: base - summary.tac,
            relative_savings: (base - summary.tac) / base,
        })
        .collect();
    let summed_savings = rows[1].savings + rows[2].savings + rows[3].savings;
    let full = rows[4].savings;
    let additivity_gap = if full.abs() > 0.0 {
        (summed_savings - full).abs() / full.abs()
    } else {
        0.0
    };
    Ok(SavingsDecomposition {
        rows,
        summed_savings,
        additivity_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketComparison {
    pub id_only: DesignSummary,
    pub simultaneous: DesignSummary,
    /// `TAC(IdOnly) - TAC(Simultaneous)`.
    pub savings: f64,
    pub relative_savings: f64,
}

/// TAC-optimal designs with intraday-only and simultaneous trading on the same tree.
pub fn market_mode_comparison(inputs: &StudyInputs) -> Result<MarketComparison, StudyError> {
    let solve = |mode| -> Result<DesignSummary, StudyError> {
        let inp = StudyInputs {
            market_mode: mode,
            ..inputs.clone()
        };
        Ok(solve_design(&inp, Objective::Tac)?.summary())
    };
    let (id_only, simultaneous) = rayon::join(
        || solve(MarketMode::IdOnly),
        || solve(MarketMode::Simultaneous),
    );
    let (id_only, simultaneous) = (id_only?, simultaneous?);
    let savings = id_only.tac - simultaneous.tac;
    Ok(MarketComparison {
        id_only,
        simultaneous,
        savings,
        relative_savings: savings / id_only.tac,
    })
}

#[cfg(test)]
mod tests;
