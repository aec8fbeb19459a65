//! Household presence over the simulated year.
//!
//! The year starts on a Monday. Mon–Fri the family is away during the work
//! block; on weekends daytime presence is drawn per block from a seeded
//! Bernoulli; two vacations of `vacation_days` whole days mark every hour
//! as [`OccupancyState::Vacation`].

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weather::{DAYS_PER_YEAR, HOURS_PER_YEAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum OccupancyState {
    Occupied,
    Away,
    Vacation,
}

impl OccupancyState {
    pub fn as_str(self) -> &'static str {
        match self {
            OccupancyState::Occupied => "occupied",
            OccupancyState::Away => "away",
            OccupancyState::Vacation => "vacation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct OccupancyConfig {
    /// First away hour on workdays (0–24).
    pub workday_away_start: u32,
    /// End of the away block, exclusive. Equal to the start for no absence.
    pub workday_away_end: u32,
    /// Weekend hours in `[weekend_day_start, weekend_day_end)` are drawn at random.
    pub weekend_day_start: u32,
    pub weekend_day_end: u32,
    pub weekend_presence_probability: f64,
    /// Hours per weekend Bernoulli draw.
    pub weekend_block_hours: u32,
    /// 0-based day of year.
    pub winter_vacation_start_day: usize,
    pub summer_vacation_start_day: usize,
    pub vacation_days: usize,
}

impl Default for OccupancyConfig {
    fn default() -> Self {
        Self {
            workday_away_start: 8,
            workday_away_end: 18,
            weekend_day_start: 8,
            weekend_day_end: 20,
            weekend_presence_probability: 0.6,
            weekend_block_hours: 2,
            winter_vacation_start_day: 10,
            summer_vacation_start_day: 200,
            vacation_days: 15,
        }
    }
}

impl OccupancyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidOccupancy(m.to_string()));
        if self.workday_away_start > 24
            || self.workday_away_end > 24
            || self.workday_away_start > self.workday_away_end
        {
            return bad("workday away range must satisfy 0 <= start <= end <= 24");
        }
        if self.weekend_day_start > self.weekend_day_end || self.weekend_day_end > 24 {
            return bad("weekend daytime range must satisfy 0 <= start <= end <= 24");
        }
        if !(0.0..=1.0).contains(&self.weekend_presence_probability) {
            return bad("weekend_presence_probability must be in [0, 1]");
        }
        if self.weekend_block_hours == 0 {
            return bad("weekend_block_hours must be >= 1");
        }
        let (w, s, n) = (
            self.winter_vacation_start_day,
            self.summer_vacation_start_day,
            self.vacation_days,
        );
        if w + n > DAYS_PER_YEAR || s + n > DAYS_PER_YEAR {
            return bad("vacation window extends past the end of the year");
        }
        if n > 0 && w < s + n && s < w + n {
            return Err(Error::OverlappingVacations {
                winter: w,
                summer: s,
                days: n,
            });
        }
        Ok(())
    }

    fn is_vacation_day(&self, day: usize) -> bool {
        let n = self.vacation_days;
        (self.winter_vacation_start_day..self.winter_vacation_start_day + n).contains(&day)
            || (self.summer_vacation_start_day..self.summer_vacation_start_day + n).contains(&day)
    }
}

/// Monday = 0 … Sunday = 6.
pub fn weekday(day: usize) -> usize {
    day % 7
}

pub fn is_workday(day: usize) -> bool {
    weekday(day) < 5
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyProfile {
    hourly_state: Vec<OccupancyState>,
    seed: u64,
    config: OccupancyConfig,
}

pub fn build_profile(seed: u64, config: &OccupancyConfig) -> Result<OccupancyProfile> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(HOURS_PER_YEAR);
    for day in 0..DAYS_PER_YEAR {
        if config.is_vacation_day(day) {
            states.extend(std::iter::repeat_n(OccupancyState::Vacation, 24));
            continue;
        }
        if is_workday(day) {
            for hour in 0..24u32 {
                let away = (config.workday_away_start..config.workday_away_end).contains(&hour);
                states.push(if away {
                    OccupancyState::Away
                } else {
                    OccupancyState::Occupied
                });
            }
        } else {
            let mut block_state = OccupancyState::Occupied;
            for hour in 0..24u32 {
                if (config.weekend_day_start..config.weekend_day_end).contains(&hour) {
                    if (hour - config.weekend_day_start).is_multiple_of(config.weekend_block_hours) {
                        block_state = if rng.gen_bool(config.weekend_presence_probability) {
                            OccupancyState::Occupied
                        } else {
                            OccupancyState::Away
                        };
                    }
                    states.push(block_state);
                } else {
                    states.push(OccupancyState::Occupied);
                }
            }
        }
    }
    Ok(OccupancyProfile {
        hourly_state: states,
        seed,
        config: config.clone(),
    })
}

impl OccupancyProfile {
    pub fn states(&self) -> &[OccupancyState] {
        &self.hourly_state
    }

    pub fn state(&self, hour: usize) -> OccupancyState {
        self.hourly_state[hour]
    }

    pub fn len(&self) -> usize {
        self.hourly_state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hourly_state.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn config(&self) -> &OccupancyConfig {
        &self.config
    }

    /// Whether the family's fixed weekly plan has them out at work.
    /// Random weekend outings are not part of the plan.
    pub fn scheduled_away(&self, hour: usize) -> bool {
        let (day, h) = (hour / 24, (hour % 24) as u32);
        self.hourly_state[hour] != OccupancyState::Vacation
            && is_workday(day)
            && (self.config.workday_away_start..self.config.workday_away_end).contains(&h)
    }

    pub fn count(&self, state: OccupancyState) -> usize {
        self.hourly_state.iter().filter(|s| **s == state).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("hour,state\n");
        for (h, s) in self.hourly_state.iter().enumerate() {
            let _ = writeln!(out, "{h},{}", s.as_str());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_has_720_vacation_hours() {
        let p = build_profile(7, &OccupancyConfig::default()).unwrap();
        assert_eq!(p.len(), HOURS_PER_YEAR);
        assert_eq!(p.count(OccupancyState::Vacation), 720);
    }

    #[test]
    fn degenerate_schedule_is_always_home() {
        let cfg = OccupancyConfig {
            workday_away_start: 8,
            workday_away_end: 8,
            weekend_presence_probability: 1.0,
            ..Default::default()
        };
        let p = build_profile(1, &cfg).unwrap();
        assert_eq!(p.count(OccupancyState::Away), 0);
        assert_eq!(p.count(OccupancyState::Occupied), HOURS_PER_YEAR - 720);
    }

    #[test]
    fn deterministic_for_seed() {
        let cfg = OccupancyConfig::default();
        assert_eq!(build_profile(3, &cfg).unwrap(), build_profile(3, &cfg).unwrap());
        assert_ne!(
            build_profile(3, &cfg).unwrap().states(),
            build_profile(4, &cfg).unwrap().states()
        );
    }

    #[test]
    fn overlapping_vacations_rejected() {
        let cfg = OccupancyConfig {
            winter_vacation_start_day: 100,
            summer_vacation_start_day: 110,
            ..Default::default()
        };
        assert!(matches!(
            build_profile(0, &cfg),
            Err(Error::OverlappingVacations { .. })
        ));
        // adjacent windows are fine
        let cfg = OccupancyConfig {
            winter_vacation_start_day: 100,
            summer_vacation_start_day: 115,
            ..Default::default()
        };
        assert!(build_profile(0, &cfg).is_ok());
    }

    #[test]
    fn workday_blocks_are_away_and_weekends_vary() {
        let p = build_profile(11, &OccupancyConfig::default()).unwrap();
        for day in 0..DAYS_PER_YEAR {
            for h in 0..24 {
                let hour = day * 24 + h;
                let s = p.state(hour);
                if s == OccupancyState::Vacation {
                    assert!((0..24).all(|k| p.state(day * 24 + k) == OccupancyState::Vacation));
                    continue;
                }
                if is_workday(day) {
                    assert_eq!(s == OccupancyState::Away, (8..18).contains(&h));
                    assert_eq!(p.scheduled_away(hour), (8..18).contains(&h));
                } else {
                    assert!(!p.scheduled_away(hour));
                    if !(8..20).contains(&h) {
                        assert_eq!(s, OccupancyState::Occupied);
                    }
                }
            }
        }
        let weekend_away = (0..HOURS_PER_YEAR)
            .filter(|h| !is_workday(h / 24) && p.state(*h) == OccupancyState::Away)
            .count();
        assert!(weekend_away > 0);
    }

    #[test]
    fn weekend_draws_come_in_blocks() {
        let p = build_profile(5, &OccupancyConfig::default()).unwrap();
        for day in (0..DAYS_PER_YEAR).filter(|d| !is_workday(*d)) {
            for h in (8..20).step_by(2) {
                assert_eq!(p.state(day * 24 + h), p.state(day * 24 + h + 1));
            }
        }
    }

    #[test]
    fn csv_export() {
        let p = build_profile(0, &OccupancyConfig::default()).unwrap();
        let csv = p.to_csv();
        assert_eq!(csv.lines().count(), HOURS_PER_YEAR + 1);
        assert!(csv.starts_with("hour,state\n0,occupied\n"));
    }
}
