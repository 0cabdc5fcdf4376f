use super::{DayRecord, ScenarioError};
use serde::{Deserialize, Serialize};

/// One row per day: z-scored wind, PV and grid-emission profiles, concatenated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Row-major values.
    pub data: Vec<f64>,
    /// Raw column means used for the z-score.
    pub means: Vec<f64>,
    /// Raw population standard deviations; zero-variance columns map to zeros.
    pub stds: Vec<f64>,
    pub day_ids: Vec<String>,
}

impl FeatureMatrix {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// Builds a matrix directly from rows, without standardization.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ScenarioError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(ScenarioError::Shape("rows of unequal length".into()));
        }
        Ok(Self {
            n_rows,
            n_cols,
            data: rows.into_iter().flatten().collect(),
            means: vec![0.0; n_cols],
            stds: vec![1.0; n_cols],
            day_ids: (0..n_rows).map(|i| format!("row{i}")).collect(),
        })
    }

    /// Maps a standardized row back to raw units.
    pub fn inverse_row(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| if *s > 0.0 { v * s + m } else { *m })
            .collect()
    }
}

/// Column-wise z-score (population standard deviation) of the concatenated
/// daily wind, PV and emission profiles.
pub fn standardize(days: &[DayRecord]) -> Result<FeatureMatrix, ScenarioError> {
    if days.len() < 2 {
        return Err(ScenarioError::TooFewDays(days.len()));
    }
    let width = days[0].wind.values.len();
    let mut raw: Vec<Vec<f64>> = Vec::with_capacity(days.len());
    for d in days {
        if d.wind.values.len() != width || d.pv.values.len() != width || d.gwi.values.len() != width
        {
            return Err(ScenarioError::Shape(format!(
                "day {} has profiles of unequal length",
                d.day_id
            )));
        }
        let mut row = Vec::with_capacity(3 * width);
        row.extend_from_slice(&d.wind.values);
        row.extend_from_slice(&d.pv.values);
        row.extend_from_slice(&d.gwi.values);
        raw.push(row);
    }
    standardize_rows(raw, days.iter().map(|d| d.day_id.clone()).collect())
}

pub(crate) fn standardize_rows(
    raw: Vec<Vec<f64>>,
    day_ids: Vec<String>,
) -> Result<FeatureMatrix, ScenarioError> {
    let n_rows = raw.len();
    if n_rows < 2 {
        return Err(ScenarioError::TooFewDays(n_rows));
    }
    let n_cols = raw[0].len();
    let nf = n_rows as f64;
    let mut means = vec![0.0; n_cols];
    let mut stds = vec![0.0; n_cols];
    for c in 0..n_cols {
        let mean = raw.iter().map(|r| r[c]).sum::<f64>() / nf;
        let var = raw.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / nf;
        means[c] = mean;
        stds[c] = var.sqrt();
    }
    let mut data = Vec::with_capacity(n_rows * n_cols);
    for r in &raw {
        for c in 0..n_cols {
            // Columns that are constant up to rounding are treated as zero-variance.
            let s = stds[c];
            let z = if s > 1e-12 * (1.0 + means[c].abs()) {
                (r[c] - means[c]) / s
            } else {
                0.0
            };
            data.push(z);
        }
    }
    for s in stds.iter_mut().zip(&means) {
        if *s.0 <= 1e-12 * (1.0 + s.1.abs()) {
            *s.0 = 0.0;
        }
    }
    Ok(FeatureMatrix {
        n_rows,
        n_cols,
        data,
        means,
        stds,
        day_ids,
    })
}
