//! Relative PV and wind output from weather measurements.

use crate::domain::{DailyProfile, Resolution, Unit, QUARTERS_PER_DAY};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Stand-in for a generic turbine curve: 50 knots from 0 to 2.45 times the
/// reference speed, cut-in at 0.25, rated output at 1.0. This is not a
/// digitized manufacturer curve; substitute one with [`PerformanceCurve::parse`].
const DEFAULT_CURVE: &str = include_str!("../data/wind_performance_curve.csv");

/// Largest gap between consecutive 10-minute samples that is still interpolated.
pub const MAX_SAMPLE_GAP_MINUTES: f64 = 30.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeatherError {
    #[error("invalid wind site: {0}")]
    InvalidSite(String),
    #[error("invalid performance curve: {0}")]
    InvalidCurve(String),
    #[error("invalid PV specification: {0}")]
    InvalidPv(String),
    #[error("negative or non-finite input {0}")]
    InvalidInput(f64),
    #[error("samples not strictly increasing in time at minute {0}")]
    Unsorted(f64),
    #[error("gap of {gap} min before minute {at} exceeds {MAX_SAMPLE_GAP_MINUTES} min")]
    GapTooLarge { at: f64, gap: f64 },
    #[error("samples do not cover the day: {0}")]
    Coverage(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceCurve {
    points: Vec<(f64, f64)>,
}

impl PerformanceCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, WeatherError> {
        if points.len() < 2 {
            return Err(WeatherError::InvalidCurve("need at least two knots".into()));
        }
        for (i, &(v, q)) in points.iter().enumerate() {
            if !v.is_finite() || !q.is_finite() {
                return Err(WeatherError::InvalidCurve(format!("non-finite knot {i}")));
            }
            if !(0.0..=1.0).contains(&q) {
                return Err(WeatherError::InvalidCurve(format!(
                    "output {q} at knot {i} outside [0, 1]"
                )));
            }
            if i > 0 && v <= points[i - 1].0 {
                return Err(WeatherError::InvalidCurve(format!(
                    "normalized speeds not strictly increasing at knot {i}"
                )));
            }
        }
        if points[0] != (0.0, 0.0) {
            return Err(WeatherError::InvalidCurve(
                "curve must start at (0, 0)".into(),
            ));
        }
        Ok(Self { points })
    }

    /// Parses a two-column text file with one header line. Columns may be
    /// separated by commas, semicolons or whitespace.
    pub fn parse(text: &str) -> Result<Self, WeatherError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate().skip(1) {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(WeatherError::InvalidCurve(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    WeatherError::InvalidCurve(format!("line {}: bad number '{s}'", lineno + 1))
                })
            };
            points.push((parse(fields[0])?, parse(fields[1])?));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Piecewise-linear evaluation; holds the last knot's output beyond the curve.
    pub fn eval(&self, v_norm: f64) -> f64 {
        let pts = &self.points;
        if v_norm <= pts[0].0 {
            return pts[0].1;
        }
        let last = pts[pts.len() - 1];
        if v_norm >= last.0 {
            return last.1;
        }
        let idx = pts.partition_point(|&(v, _)| v <= v_norm);
        let (v0, q0) = pts[idx - 1];
        let (v1, q1) = pts[idx];
        let w = (v_norm - v0) / (v1 - v0);
        (q0 + w * (q1 - q0)).clamp(0.0, 1.0)
    }
}

impl Default for PerformanceCurve {
    fn default() -> Self {
        Self::parse(DEFAULT_CURVE).expect("bundled performance curve is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindSiteSpec {
    pub hub_height: f64,
    pub measure_height: f64,
    pub roughness: f64,
    pub reference_speed: f64,
}

impl WindSiteSpec {
    /// 80 m hub, 10 m anemometer, 0.1 m roughness, 11.8 m/s reference speed.
    pub fn reference() -> Self {
        Self {
            hub_height: 80.0,
            measure_height: 10.0,
            roughness: 0.1,
            reference_speed: 11.8,
        }
    }

    pub fn check(&self) -> Result<(), WeatherError> {
        let all_finite = [
            self.hub_height,
            self.measure_height,
            self.roughness,
            self.reference_speed,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(WeatherError::InvalidSite("non-finite parameter".into()));
        }
        if self.roughness <= 0.0 {
            return Err(WeatherError::InvalidSite(
                "roughness length must be > 0".into(),
            ));
        }
        if self.measure_height <= self.roughness {
            return Err(WeatherError::InvalidSite(
                "measurement height must exceed roughness length".into(),
            ));
        }
        if self.hub_height <= self.roughness {
            return Err(WeatherError::InvalidSite(
                "hub height must exceed roughness length".into(),
            ));
        }
        if self.reference_speed <= 0.0 {
            return Err(WeatherError::InvalidSite(
                "reference speed must be > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvSpec {
    pub efficiency: f64,
    /// Nominal module capacity in kW per m².
    pub nominal_capacity: f64,
}

impl PvSpec {
    pub fn reference() -> Self {
        Self {
            efficiency: 0.19,
            nominal_capacity: 0.1,
        }
    }

    pub fn check(&self) -> Result<(), WeatherError> {
        if !(self.efficiency > 0.0 && self.efficiency < 1.0) {
            return Err(WeatherError::InvalidPv(
                "efficiency must lie in (0, 1)".into(),
            ));
        }
        if !(self.nominal_capacity > 0.0 && self.nominal_capacity.is_finite()) {
            return Err(WeatherError::InvalidPv(
                "nominal capacity must be > 0".into(),
            ));
        }
        Ok(())
    }
}

fn check_input(x: f64) -> Result<(), WeatherError> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(WeatherError::InvalidInput(x))
    }
}

/// Logarithmic wind profile extrapolation from anemometer to hub height.
pub fn hub_wind_speed(v_measure: f64, site: &WindSiteSpec) -> Result<f64, WeatherError> {
    site.check()?;
    check_input(v_measure)?;
    let ratio =
        (site.hub_height / site.roughness).ln() / (site.measure_height / site.roughness).ln();
    Ok(v_measure * ratio)
}

pub fn wind_relative_output(
    v_measure: f64,
    site: &WindSiteSpec,
    curve: &PerformanceCurve,
) -> Result<f64, WeatherError> {
    let v_hub = hub_wind_speed(v_measure, site)?;
    Ok(curve.eval(v_hub / site.reference_speed))
}

/// Relative PV output for tilted-plane irradiance `irradiance` in kW/m², capped at one.
pub fn pv_relative_output(irradiance: f64, pv: &PvSpec) -> Result<f64, WeatherError> {
    pv.check()?;
    check_input(irradiance)?;
    Ok((pv.efficiency * irradiance / pv.nominal_capacity).min(1.0))
}

/// Linear interpolation of one day of samples onto the quarter-hour grid.
///
/// `samples` are `(minute_of_day, value)` pairs, strictly increasing in time.
/// Minute 1440 (midnight of the following day) is accepted as the closing
/// sample. The first sample must be at or before 00:00 and the last at or
/// after 23:45.
pub fn resample_10min_to_quarter(
    day_id: &str,
    unit: Unit,
    samples: &[(f64, f64)],
) -> Result<DailyProfile, WeatherError> {
    if samples.is_empty() {
        return Err(WeatherError::Coverage("no samples".into()));
    }
    for (i, w) in samples.windows(2).enumerate() {
        let (t0, _) = w[0];
        let (t1, _) = w[1];
        if t1 <= t0 {
            return Err(WeatherError::Unsorted(samples[i + 1].0));
        }
        if t1 - t0 > MAX_SAMPLE_GAP_MINUTES {
            return Err(WeatherError::GapTooLarge {
                at: t1,
                gap: t1 - t0,
            });
        }
    }
    if let Some(&(t, v)) = samples
        .iter()
        .find(|(t, v)| !t.is_finite() || !v.is_finite())
    {
        return Err(WeatherError::Coverage(format!(
            "non-finite sample ({t}, {v})"
        )));
    }
    let first = samples[0].0;
    let last_needed = 15.0 * (QUARTERS_PER_DAY - 1) as f64;
    let last = samples[samples.len() - 1].0;
    if first > 0.0 {
        return Err(WeatherError::Coverage(format!(
            "first sample at minute {first}"
        )));
    }
    if last < last_needed {
        return Err(WeatherError::Coverage(format!(
            "last sample at minute {last}"
        )));
    }
    let mut values = Vec::with_capacity(QUARTERS_PER_DAY);
    for k in 0..QUARTERS_PER_DAY {
        let t = 15.0 * k as f64;
        let idx = samples.partition_point(|&(ts, _)| ts <= t);
        // idx >= 1 because first <= 0 <= t
        let (t0, v0) = samples[idx - 1];
        let value = if t0 == t || idx == samples.len() {
            v0
        } else {
            let (t1, v1) = samples[idx];
            v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        };
        values.push(value);
    }
    Ok(DailyProfile::new(
        day_id,
        Resolution::QuarterHour,
        unit,
        values,
    ))
}
