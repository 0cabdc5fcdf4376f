//! Scenario-tree construction from historical days: z-score features,
//! seeded k-means, cluster day-ahead averages and intraday reconstruction
//! from market deviations.

mod features;
mod kmeans;
mod tree;

pub use features::{standardize, FeatureMatrix};
pub use kmeans::{kmeans, kmeans_with, wcss_curve, Clustering, KMeansOptions};
pub use tree::{build_tree, deviation_std_report, DeviationReport};

use crate::domain::{DailyProfile, Violation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("at least 2 days are required, got {0}")]
    TooFewDays(usize),
    #[error("k = {k} is invalid for {days} days")]
    InvalidK { k: usize, days: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("missing data: {0}")]
    MissingDay(String),
    #[error("invalid profile: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidProfile(Vec<Violation>),
}

/// All series of one historical day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day_id: String,
    /// Hourly day-ahead price.
    pub da_price: DailyProfile,
    /// Quarter-hourly intraday price.
    pub id_price: DailyProfile,
    /// Relative wind output in [0, 1].
    pub wind: DailyProfile,
    /// Relative PV output in [0, 1].
    pub pv: DailyProfile,
    /// Grid emission factor.
    pub gwi: DailyProfile,
}

/// Standardize, cluster and build the tree in one call.
pub fn scenario_tree(
    days: &[DayRecord],
    k: usize,
    seed: u64,
) -> Result<(crate::domain::ScenarioTree, Clustering), ScenarioError> {
    let features = standardize(days)?;
    let clustering = kmeans(&features, k, seed)?;
    let tree = build_tree(&clustering, days)?;
    Ok((tree, clustering))
}
