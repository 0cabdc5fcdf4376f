//! Seeded synthetic market and weather days, used as test fixtures and for
//! benchmarks. The shapes are plausible (midday PV, evening price peaks, wind
//! pushing prices and grid emissions down) but carry no historical meaning.

use crate::domain::{DailyProfile, Resolution, Unit, HOURS_PER_DAY, QUARTERS_PER_DAY};
use crate::scenarios::DayRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub days: usize,
    pub seed: u64,
    /// Mean day-ahead price in EUR/MWh.
    pub price_level: f64,
    /// Standard deviation of the intraday innovation around day-ahead, EUR/MWh.
    pub deviation_scale: f64,
    /// Grid emission factor with no renewable infeed, kgCO2/MWh.
    pub gwi_level: f64,
    /// Day-of-year of the first day (0 = 1 January).
    pub start_day: usize,
}

impl SyntheticSpec {
    pub fn new(days: usize, seed: u64) -> Self {
        Self {
            days,
            seed,
            price_level: 120.0,
            deviation_scale: 15.0,
            gwi_level: 650.0,
            start_day: 0,
        }
    }
}

/// Generates `spec.days` consecutive days.
pub fn synthetic_days(spec: &SyntheticSpec) -> Vec<DayRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let wind_level = Beta::new(1.6, 2.4).expect("valid beta");
    let unit_noise = Normal::new(0.0, 1.0).expect("valid normal");
    let mut wind_state: f64 = 0.0;
    (0..spec.days)
        .map(|d| {
            let doy = (spec.start_day + d) % 365;
            // +1 in midsummer, -1 in midwinter.
            let season = -(2.0 * PI * (doy as f64 + 10.0) / 365.0).cos();
            let day_id = format!("day{:03}", spec.start_day + d);

            let base_wind = wind_level.sample(&mut rng) * (1.0 - 0.3 * season).min(1.0);
            let mut wind = Vec::with_capacity(QUARTERS_PER_DAY);
            for _ in 0..QUARTERS_PER_DAY {
                wind_state = 0.97 * wind_state + 0.03 * unit_noise.sample(&mut rng);
                wind.push((base_wind + 0.25 * wind_state).clamp(0.0, 1.0));
            }

            let clearness: f64 = rng.random_range(0.15..1.0);
            let half_len = 6.0 + 2.0 * season;
            let peak = (0.6 + 0.25 * season) * clearness;
            let pv: Vec<f64> = (0..QUARTERS_PER_DAY)
                .map(|t| {
                    let hour = (t as f64 + 0.5) / 4.0;
                    let x = (hour - 12.5) / half_len;
                    if x.abs() >= 1.0 {
                        0.0
                    } else {
                        let jitter = 1.0 + 0.1 * clearness * unit_noise.sample(&mut rng);
                        (peak * (PI * x / 2.0).cos().powi(2) * jitter).clamp(0.0, 1.0)
                    }
                })
                .collect();

            let gwi: Vec<f64> = (0..QUARTERS_PER_DAY)
                .map(|t| (spec.gwi_level * (1.0 - 0.55 * wind[t] - 0.35 * pv[t])).max(30.0))
                .collect();

            let level = spec.price_level * (1.0 + 0.1 * unit_noise.sample(&mut rng));
            let da: Vec<f64> = (0..HOURS_PER_DAY)
                .map(|h| {
                    let q = &(4 * h..4 * h + 4);
                    let w = wind[q.clone()].iter().sum::<f64>() / 4.0;
                    let s = pv[q.clone()].iter().sum::<f64>() / 4.0;
                    let hf = h as f64;
                    let shape = 0.25 * (-(hf - 8.0).powi(2) / 4.0).exp()
                        + 0.35 * (-(hf - 19.0).powi(2) / 5.0).exp()
                        - 0.15 * (-(hf - 3.0).powi(2) / 6.0).exp();
                    level * (1.0 + shape - 0.45 * w - 0.35 * s) + 4.0 * unit_noise.sample(&mut rng)
                })
                .collect();

            let mut dev = 0.0;
            let id: Vec<f64> = (0..QUARTERS_PER_DAY)
                .map(|t| {
                    dev = 0.6 * dev + spec.deviation_scale * unit_noise.sample(&mut rng);
                    da[t / 4] + dev
                })
                .collect();

            DayRecord {
                da_price: DailyProfile::new(day_id.clone(), Resolution::Hour, Unit::EurPerMwh, da),
                id_price: DailyProfile::new(
                    day_id.clone(),
                    Resolution::QuarterHour,
                    Unit::EurPerMwh,
                    id,
                ),
                wind: DailyProfile::new(
                    day_id.clone(),
                    Resolution::QuarterHour,
                    Unit::Dimensionless,
                    wind,
                ),
                pv: DailyProfile::new(
                    day_id.clone(),
                    Resolution::QuarterHour,
                    Unit::Dimensionless,
                    pv,
                ),
                gwi: DailyProfile::new(
                    day_id.clone(),
                    Resolution::QuarterHour,
                    Unit::KgCo2PerMwh,
                    gwi,
                ),
                day_id,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let spec = SyntheticSpec::new(20, 5);
        let a = synthetic_days(&spec);
        assert_eq!(a, synthetic_days(&spec));
        for d in &a {
            for p in [&d.da_price, &d.id_price, &d.wind, &d.pv, &d.gwi] {
                assert!(p.violations().is_empty());
            }
            assert!(d
                .wind
                .values
                .iter()
                .chain(&d.pv.values)
                .all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn zero_deviation_means_id_equals_da() {
        let spec = SyntheticSpec {
            deviation_scale: 0.0,
            ..SyntheticSpec::new(3, 1)
        };
        for d in synthetic_days(&spec) {
            assert_eq!(d.id_price.values, d.da_price.to_quarter_hours().values);
        }
    }
}
