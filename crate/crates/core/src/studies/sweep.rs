use super::{solve_design, DesignSummary, StudyError, StudyInputs};
use crate::domain::{ProcessSpec, ScenarioTree, TechEconSpec};
use crate::lp::SolveOptions;
use crate::model::{MarketMode, Objective};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParameter {
    Oversizing,
    MinPartLoad,
    StorageHours,
    RampLimit,
    CapacityScale,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 5] = [
        SweepParameter::Oversizing,
        SweepParameter::MinPartLoad,
        SweepParameter::StorageHours,
        SweepParameter::RampLimit,
        SweepParameter::CapacityScale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Oversizing => "oversizing",
            SweepParameter::MinPartLoad => "min_part_load",
            SweepParameter::StorageHours => "storage_hours",
            SweepParameter::RampLimit => "ramp_limit",
            SweepParameter::CapacityScale => "capacity_scale",
        }
    }

    /// Whether larger values enlarge the feasible set. Only the minimal part
    /// load runs the other way.
    pub fn larger_is_more_flexible(self) -> bool {
        self != SweepParameter::MinPartLoad
    }

    /// Value of this parameter in the given specs.
    pub fn current(self, process: &ProcessSpec) -> f64 {
        match self {
            SweepParameter::Oversizing => process.oversizing,
            SweepParameter::MinPartLoad => process.min_part_load,
            SweepParameter::StorageHours => process.storage_hours,
            SweepParameter::RampLimit => process.ramp_limit,
            SweepParameter::CapacityScale => 1.0,
        }
    }

    /// Value at which this parameter grants no flexibility.
    pub fn inflexible_value(self) -> f64 {
        match self {
            SweepParameter::MinPartLoad => 1.0,
            _ => 0.0,
        }
    }

    pub fn apply(
        self,
        process: &ProcessSpec,
        econ: &TechEconSpec,
        value: f64,
    ) -> (ProcessSpec, TechEconSpec) {
        let mut p = *process;
        let mut e = *econ;
        match self {
            SweepParameter::Oversizing => p.oversizing = value,
            SweepParameter::MinPartLoad => p.min_part_load = value,
            SweepParameter::StorageHours => p.storage_hours = value,
            SweepParameter::RampLimit => p.ramp_limit = value,
            SweepParameter::CapacityScale => e = econ.with_capacity_scale(value),
        }
        (p, e)
    }

    /// `n` evenly spaced values from the inflexible value to twice the
    /// flexibility of `process` (clamped to the physical range).
    pub fn default_values(self, process: &ProcessSpec, n: usize) -> Vec<f64> {
        let from = self.inflexible_value();
        let reference = self.current(process);
        let to = (from + 2.0 * (reference - from)).max(0.0);
        if n < 2 {
            return vec![to];
        }
        (0..n)
            .map(|k| from + (to - from) * k as f64 / (n - 1) as f64)
            .collect()
    }

    fn check(self, v: f64) -> Result<(), String> {
        let ok = v.is_finite()
            && v >= 0.0
            && match self {
                SweepParameter::MinPartLoad => v <= 1.0,
                _ => true,
            };
        if ok {
            Ok(())
        } else {
            Err(format!(
                "{} value {v} outside its physical range",
                self.name()
            ))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub tree: ScenarioTree,
    pub process: ProcessSpec,
    pub econ: TechEconSpec,
    pub market_mode: MarketMode,
    pub objective: Objective,
    pub solve: SolveOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub with_system: DesignSummary,
    pub without_system: DesignSummary,
    /// `1 - TAC_with / TAC_without`.
    pub savings: f64,
}

/// Solves every sweep value with and without a local energy system.
pub fn flexibility_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, StudyError> {
    if spec.values.is_empty() {
        return Err(StudyError::Invalid("sweep needs at least one value".into()));
    }
    for &v in &spec.values {
        spec.parameter.check(v).map_err(StudyError::Invalid)?;
    }
    let jobs: Vec<(usize, bool)> = (0..spec.values.len())
        .flat_map(|k| [(k, true), (k, false)])
        .collect();
    let solved: Vec<DesignSummary> = jobs
        .par_iter()
        .map(|&(k, with_system)| {
            let (process, econ) = spec
                .parameter
                .apply(&spec.process, &spec.econ, spec.values[k]);
            let econ = if with_system {
                econ
            } else {
                econ.without_system()
            };
            let inputs = StudyInputs {
                tree: spec.tree.clone(),
                process,
                econ,
                market_mode: spec.market_mode,
                solve: spec.solve.clone(),
            };
            Ok(solve_design(&inputs, spec.objective)?.summary())
        })
        .collect::<Result<_, StudyError>>()?;
    Ok(spec
        .values
        .iter()
        .zip(solved.chunks(2))
        .map(|(&value, pair)| SweepRow {
            value,
            with_system: pair[0],
            without_system: pair[1],
            savings: 1.0 - pair[0].tac / pair[1].tac,
        })
        .collect())
}
