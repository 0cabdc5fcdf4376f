use crate::domain::{HOURS_PER_DAY, QUARTERS_PER_DAY};
use crate::lp::VarId;
use serde::{Deserialize, Serialize};

/// Column handles of the deterministic-equivalent LP.
///
/// Per-scenario blocks are laid out scenario-major: entry `s * 96 + t`.
/// Battery charge and product storage are stored for quarters `0..96`; the
/// closing state after the last quarter equals the opening state by
/// construction of the dynamics rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableIndex {
    pub q_pv: VarId,
    pub q_wind: VarId,
    pub q_batt: VarId,
    pub n_clusters: usize,
    pub n_scenarios: usize,
    /// Cluster position for each scenario position.
    pub cluster_of: Vec<usize>,
    pub da: Vec<VarId>,
    pub id: Vec<VarId>,
    pub charge: Vec<VarId>,
    pub discharge: Vec<VarId>,
    pub soc: Vec<VarId>,
    pub power: Vec<VarId>,
    pub storage: Vec<VarId>,
    pub grid_fee: Vec<VarId>,
    /// Per-scenario copies of the PV, wind and battery capacities, each tied
    /// to its first-stage column by an equality row. They keep the
    /// first-stage columns short, which keeps basis solves sparse.
    pub local_design: Vec<[VarId; 3]>,
    /// Whether the day-ahead columns are free (false in intraday-only mode).
    pub da_active: bool,
    pub n_vars: usize,
}

/// Decision-variable counts by class. Fixed columns are not degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofCensus {
    pub design: usize,
    pub day_ahead: usize,
    pub intraday: usize,
    pub battery: usize,
}

impl VariableIndex {
    #[inline]
    pub fn qt(s: usize, t: usize) -> usize {
        s * QUARTERS_PER_DAY + t
    }

    pub fn da(&self, cluster: usize, hour: usize) -> VarId {
        self.da[cluster * HOURS_PER_DAY + hour]
    }

    pub fn id(&self, s: usize, t: usize) -> VarId {
        self.id[Self::qt(s, t)]
    }

    pub fn charge(&self, s: usize, t: usize) -> VarId {
        self.charge[Self::qt(s, t)]
    }

    pub fn discharge(&self, s: usize, t: usize) -> VarId {
        self.discharge[Self::qt(s, t)]
    }

    /// Battery charge at the start of quarter `t`; `t == 96` wraps to 0.
    pub fn soc(&self, s: usize, t: usize) -> VarId {
        self.soc[Self::qt(s, t % QUARTERS_PER_DAY)]
    }

    pub fn power(&self, s: usize, t: usize) -> VarId {
        self.power[Self::qt(s, t)]
    }

    /// Product storage level at the start of quarter `t`; `t == 96` wraps to 0.
    pub fn storage(&self, s: usize, t: usize) -> VarId {
        self.storage[Self::qt(s, t % QUARTERS_PER_DAY)]
    }

    pub fn grid_fee(&self, s: usize, t: usize) -> VarId {
        self.grid_fee[Self::qt(s, t)]
    }

    pub fn census(&self) -> DofCensus {
        DofCensus {
            design: 3,
            day_ahead: if self.da_active { self.da.len() } else { 0 },
            intraday: self.id.len(),
            battery: self.charge.len() + self.discharge.len(),
        }
    }
}
