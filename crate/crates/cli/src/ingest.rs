//! CSV ingestion. Each series is one file of `timestamp,value` rows with a
//! `# unit: ...` header comment. Rows are grouped by the calendar day of their
//! local wall-clock time; a day is kept only if every series has a complete,
//! well-formed record for it.

use crate::error::IngestError;
use chrono::{DateTime, NaiveDate, NaiveDateTime, Timelike};
use flexplan_core::scenarios::DayRecord;
use flexplan_core::weather::{
    pv_relative_output, resample_10min_to_quarter, wind_relative_output, PerformanceCurve, PvSpec,
    WindSiteSpec,
};
use flexplan_core::{DailyProfile, Resolution, Unit, HOURS_PER_DAY, QUARTERS_PER_DAY};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    DaPrice,
    IdPrice,
    WindSpeed,
    Irradiance,
    Gwi,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 5] = [
        SeriesKind::DaPrice,
        SeriesKind::IdPrice,
        SeriesKind::WindSpeed,
        SeriesKind::Irradiance,
        SeriesKind::Gwi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::DaPrice => "da_price",
            SeriesKind::IdPrice => "id_price",
            SeriesKind::WindSpeed => "wind_speed",
            SeriesKind::Irradiance => "irradiance",
            SeriesKind::Gwi => "gwi",
        }
    }

    /// Dotted config key naming the input file.
    pub fn field(self) -> String {
        format!("inputs.{}", self.name())
    }

    /// Accepted units and the factor converting each to the internal unit.
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            SeriesKind::DaPrice | SeriesKind::IdPrice => &[("EUR/MWh", 1.0)],
            SeriesKind::WindSpeed => &[("m/s", 1.0)],
            SeriesKind::Irradiance => &[
                ("kW/m2", 1.0),
                ("kW/m²", 1.0),
                ("W/m2", 1e-3),
                ("W/m²", 1e-3),
            ],
            SeriesKind::Gwi => &[("kgCO2/MWh", 1.0), ("gCO2/kWh", 1.0)],
        }
    }

    /// Fixed sampling step in minutes; weather series are interpolated instead.
    fn step_minutes(self) -> Option<u32> {
        match self {
            SeriesKind::DaPrice => Some(60),
            SeriesKind::IdPrice | SeriesKind::Gwi => Some(15),
            SeriesKind::WindSpeed | SeriesKind::Irradiance => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct DaySamples {
    samples: Vec<(u32, f64)>,
    offsets: BTreeSet<i32>,
    error: Option<String>,
}

impl DaySamples {
    fn fail(&mut self, reason: String) {
        self.error.get_or_insert(reason);
    }
}

/// One file split into local calendar days.
#[derive(Debug, Clone)]
pub struct ParsedSeries {
    pub kind: SeriesKind,
    pub unit: String,
    days: BTreeMap<NaiveDate, DaySamples>,
    /// Row problems that could not be attributed to a day.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedDay {
    pub day: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct IngestReport {
    pub days: Vec<DayRecord>,
    pub dropped: Vec<DroppedDay>,
    pub warnings: Vec<String>,
}

/// Conversion parameters from weather measurements to relative output.
#[derive(Debug, Clone)]
pub struct WeatherModel {
    pub site: WindSiteSpec,
    pub curve: PerformanceCurve,
    pub pv: PvSpec,
}

/// Parses an ISO-8601 timestamp into local date, minute of day and, when
/// present, the UTC offset in seconds.
fn parse_timestamp(s: &str) -> Option<(NaiveDate, u32, Option<i32>)> {
    let (local, offset) = match DateTime::parse_from_rfc3339(s) {
        Ok(dt) => (dt.naive_local(), Some(dt.offset().local_minus_utc())),
        Err(_) => {
            let formats = [
                "%Y-%m-%dT%H:%M:%S",
                "%Y-%m-%dT%H:%M",
                "%Y-%m-%d %H:%M:%S",
                "%Y-%m-%d %H:%M",
            ];
            let local = formats
                .iter()
                .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())?;
            (local, None)
        }
    };
    if local.second() != 0 || local.nanosecond() != 0 {
        return None;
    }
    Some((local.date(), local.hour() * 60 + local.minute(), offset))
}

fn unit_comment(text: &str) -> Option<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| l.starts_with('#'))
        .find_map(|l| {
            let body = l.trim_start_matches('#').trim();
            let (key, value) = body.split_once(':')?;
            key.trim()
                .eq_ignore_ascii_case("unit")
                .then(|| value.trim().to_string())
        })
}

pub fn parse_series(text: &str, kind: SeriesKind) -> Result<ParsedSeries, IngestError> {
    let field = kind.field();
    let unit = unit_comment(text).ok_or_else(|| IngestError::MissingUnit {
        field: field.clone(),
    })?;
    let Some(&(_, scale)) = kind.units().iter().find(|(u, _)| *u == unit) else {
        let expected = kind
            .units()
            .iter()
            .map(|(u, _)| format!("'{u}'"))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(IngestError::Unit {
            field,
            found: unit,
            expected,
        });
    };

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| IngestError::Csv {
        field: field.clone(),
        message: e.to_string(),
    })?;
    if header.len() != 2 || &header[0] != "timestamp" || &header[1] != "value" {
        let found = header.iter().collect::<Vec<_>>().join(",");
        return Err(IngestError::Header { field, found });
    }

    let mut days: BTreeMap<NaiveDate, DaySamples> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut rows = 0usize;
    for record in reader.records() {
        rows += 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                warnings.push(format!("{field}: {e}"));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let stamp = record.get(0).unwrap_or("");
        let Some((date, minute, offset)) = parse_timestamp(stamp) else {
            // Attribute the row to its day when the date part is readable.
            match stamp
                .get(..10)
                .and_then(|d| NaiveDate::parse_from_str(d, "%Y-%m-%d").ok())
            {
                Some(date) => days
                    .entry(date)
                    .or_default()
                    .fail(format!("line {line}: unparseable timestamp '{stamp}'")),
                None => warnings.push(format!(
                    "{field}: line {line}: unparseable timestamp '{stamp}' ignored"
                )),
            }
            continue;
        };
        let day = days.entry(date).or_default();
        if let Some(o) = offset {
            day.offsets.insert(o);
        }
        if record.len() != 2 {
            day.fail(format!(
                "line {line}: expected 2 fields, found {}",
                record.len()
            ));
            continue;
        }
        match record[1].parse::<f64>() {
            Ok(v) if v.is_finite() => day.samples.push((minute, v * scale)),
            _ => day.fail(format!("line {line}: unparseable value '{}'", &record[1])),
        }
    }
    if rows == 0 {
        return Err(IngestError::Empty { field });
    }
    Ok(ParsedSeries {
        kind,
        unit,
        days,
        warnings,
    })
}

/// Raw samples of one day on the fixed grid, or the reason the day is unusable.
fn day_samples(day: &DaySamples, kind: SeriesKind) -> Result<Vec<(u32, f64)>, String> {
    if let Some(e) = &day.error {
        return Err(e.clone());
    }
    if day.offsets.len() > 1 {
        return Err("nonstandard day length (UTC offset changes within the day)".into());
    }
    let mut samples = day.samples.clone();
    samples.sort_by_key(|&(m, _)| m);
    if samples.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err("nonstandard day length (repeated timestamps)".into());
    }
    if let Some(step) = kind.step_minutes() {
        let expected = (24 * 60 / step) as usize;
        if samples.len() != expected {
            return Err(format!(
                "nonstandard day length ({} steps, expected {expected})",
                samples.len()
            ));
        }
        if samples
            .iter()
            .enumerate()
            .any(|(k, &(m, _))| m != k as u32 * step)
        {
            return Err(format!("timestamps off the {step}-minute grid"));
        }
    }
    Ok(samples)
}

fn profile(
    day: &DaySamples,
    kind: SeriesKind,
    day_id: &str,
    weather: &WeatherModel,
) -> Result<DailyProfile, String> {
    let samples = day_samples(day, kind)?;
    let values = || samples.iter().map(|&(_, v)| v).collect::<Vec<_>>();
    let quarter = |unit| {
        let points: Vec<(f64, f64)> = samples.iter().map(|&(m, v)| (m as f64, v)).collect();
        resample_10min_to_quarter(day_id, unit, &points).map_err(|e| e.to_string())
    };
    match kind {
        SeriesKind::DaPrice => Ok(DailyProfile::new(
            day_id,
            Resolution::Hour,
            Unit::EurPerMwh,
            values(),
        )),
        SeriesKind::IdPrice => Ok(DailyProfile::new(
            day_id,
            Resolution::QuarterHour,
            Unit::EurPerMwh,
            values(),
        )),
        SeriesKind::Gwi => Ok(DailyProfile::new(
            day_id,
            Resolution::QuarterHour,
            Unit::KgCo2PerMwh,
            values(),
        )),
        SeriesKind::WindSpeed => {
            let mut p = quarter(Unit::Dimensionless)?;
            for v in &mut p.values {
                *v = wind_relative_output(*v, &weather.site, &weather.curve)
                    .map_err(|e| e.to_string())?;
            }
            Ok(p)
        }
        SeriesKind::Irradiance => {
            let mut p = quarter(Unit::Dimensionless)?;
            for v in &mut p.values {
                *v = pv_relative_output(*v, &weather.pv).map_err(|e| e.to_string())?;
            }
            Ok(p)
        }
    }
}

/// Aligns the five parsed series into daily bundles. Days missing from a
/// series or failing any check are dropped with the first reason found.
pub fn assemble(
    series: &[ParsedSeries],
    weather: &WeatherModel,
) -> Result<IngestReport, IngestError> {
    let get = |k: SeriesKind| {
        series
            .iter()
            .find(|s| s.kind == k)
            .expect("all five series are parsed")
    };
    let all_dates: BTreeSet<NaiveDate> =
        series.iter().flat_map(|s| s.days.keys().copied()).collect();
    let mut days = Vec::new();
    let mut dropped = Vec::new();
    for date in all_dates {
        let day_id = date.format("%Y-%m-%d").to_string();
        let mut parts = Vec::with_capacity(5);
        let mut reason = None;
        for kind in SeriesKind::ALL {
            let p = match get(kind).days.get(&date) {
                None => Err("no rows".to_string()),
                Some(d) => profile(d, kind, &day_id, weather),
            };
            match p {
                Ok(p) => parts.push(p),
                Err(e) => {
                    reason = Some(format!("{}: {e}", kind.name()));
                    break;
                }
            }
        }
        match reason {
            Some(reason) => dropped.push(DroppedDay {
                day: day_id,
                reason,
            }),
            None => {
                let mut it = parts.into_iter();
                let mut next = || it.next().expect("five profiles");
                let (da_price, id_price, wind, pv, gwi) = (next(), next(), next(), next(), next());
                debug_assert_eq!(da_price.values.len(), HOURS_PER_DAY);
                debug_assert_eq!(id_price.values.len(), QUARTERS_PER_DAY);
                days.push(DayRecord {
                    day_id,
                    da_price,
                    id_price,
                    wind,
                    pv,
                    gwi,
                });
            }
        }
    }
    let warnings = series
        .iter()
        .flat_map(|s| s.warnings.iter().cloned())
        .collect();
    if days.is_empty() {
        return Err(IngestError::NoDays {
            dropped: dropped.len(),
        });
    }
    Ok(IngestReport {
        days,
        dropped,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_file(unit: &str, day: &str, n: usize, value: f64) -> String {
        let mut s = format!("# unit: {unit}\ntimestamp,value\n");
        for k in 0..n {
            s += &format!(
                "{day}T{:02}:{:02}:00+01:00,{value}\n",
                k * 15 / 60,
                k * 15 % 60
            );
        }
        s
    }

    #[test]
    fn timestamps_with_and_without_offset() {
        let d = NaiveDate::from_ymd_opt(2022, 3, 27).unwrap();
        assert_eq!(
            parse_timestamp("2022-03-27T03:15:00+02:00"),
            Some((d, 195, Some(7200)))
        );
        assert_eq!(parse_timestamp("2022-03-27T03:15"), Some((d, 195, None)));
        assert_eq!(parse_timestamp("2022-03-27 03:15:00"), Some((d, 195, None)));
        assert_eq!(parse_timestamp("2022-03-27T03:15:30"), None);
        assert_eq!(parse_timestamp("yesterday"), None);
    }

    #[test]
    fn unit_header_is_required_and_checked() {
        let text = quarter_file("EUR/MWh", "2022-01-01", 96, 1.0);
        assert!(parse_series(&text, SeriesKind::IdPrice).is_ok());
        assert!(matches!(
            parse_series(&text, SeriesKind::Gwi),
            Err(IngestError::Unit { .. })
        ));
        let bare = text.replacen("# unit: EUR/MWh\n", "", 1);
        assert!(matches!(
            parse_series(&bare, SeriesKind::IdPrice),
            Err(IngestError::MissingUnit { .. })
        ));
    }

    #[test]
    fn short_day_is_nonstandard() {
        let text = quarter_file("EUR/MWh", "2022-03-27", 92, 1.0);
        let s = parse_series(&text, SeriesKind::IdPrice).unwrap();
        let day = s.days.values().next().unwrap();
        let err = day_samples(day, SeriesKind::IdPrice).unwrap_err();
        assert!(err.starts_with("nonstandard day length"), "{err}");
    }

    #[test]
    fn watts_are_converted_to_kilowatts() {
        let text = "# unit: W/m2\ntimestamp,value\n2022-01-01T00:00,500\n";
        let s = parse_series(text, SeriesKind::Irradiance).unwrap();
        assert_eq!(s.days.values().next().unwrap().samples, vec![(0, 0.5)]);
    }
}
