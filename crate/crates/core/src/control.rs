//! The three automation levels and their device costs.

use std::fmt;
use std::str::FromStr;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::occupancy::OccupancyState;

/// Occupied indoor temperature above which the household asks for more cooling.
pub const COMFORT_COOLING_TRIGGER_C: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Baseline,
    LowCost,
    Extended,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::Baseline,
        ScenarioKind::LowCost,
        ScenarioKind::Extended,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Baseline => "baseline",
            ScenarioKind::LowCost => "low-cost",
            ScenarioKind::Extended => "extended",
        }
    }

    pub fn valid_names() -> Vec<String> {
        Self::ALL.iter().map(|k| k.as_str().to_string()).collect()
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "scenario",
                name: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum LightingMode {
    /// Switched by hand; left on during short weekend outings.
    Manual,
    /// Smart lamp following the family's weekly plan.
    Scheduled,
    /// Motion sensing plus daylight dimming.
    SensorDaylight,
}

/// User-tunable magnitudes shared by all policies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct ControlSettings {
    pub heat_setpoint: f64,
    pub cool_setpoint: f64,
    pub setback_heat: f64,
    pub setback_cool: f64,
    pub auto_away_delay_h: u32,
    pub suggestion_offset_k: f64,
    /// Cooling target the household asks for once the comfort trigger fires.
    pub comfort_cool_setpoint: f64,
}

impl Default for ControlSettings {
    fn default() -> Self {
        Self {
            heat_setpoint: 20.0,
            cool_setpoint: 24.0,
            setback_heat: 16.0,
            setback_cool: 28.0,
            auto_away_delay_h: 2,
            suggestion_offset_k: 1.0,
            comfort_cool_setpoint: 24.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ControlPolicy {
    pub kind: ScenarioKind,
    pub heat_setpoint: f64,
    pub cool_setpoint: f64,
    pub setback_heat: f64,
    pub setback_cool: f64,
    pub auto_away_delay_h: u32,
    pub suggestion_offset_k: f64,
    pub comfort_cool_setpoint: f64,
    pub lighting_mode: LightingMode,
}

impl ControlPolicy {
    pub fn new(kind: ScenarioKind, s: &ControlSettings) -> Result<Self> {
        let policy = Self {
            kind,
            heat_setpoint: s.heat_setpoint,
            cool_setpoint: s.cool_setpoint,
            setback_heat: s.setback_heat,
            setback_cool: s.setback_cool,
            auto_away_delay_h: s.auto_away_delay_h,
            suggestion_offset_k: s.suggestion_offset_k,
            comfort_cool_setpoint: s.comfort_cool_setpoint,
            lighting_mode: match kind {
                ScenarioKind::Baseline => LightingMode::Manual,
                ScenarioKind::LowCost => LightingMode::Scheduled,
                ScenarioKind::Extended => LightingMode::SensorDaylight,
            },
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.heat_setpoint,
            self.cool_setpoint,
            self.setback_heat,
            self.setback_cool,
            self.suggestion_offset_k,
            self.comfort_cool_setpoint,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPolicy("setpoints must be finite".into()));
        }
        if self.heat_setpoint >= self.cool_setpoint {
            return Err(Error::InvalidSetpoints {
                heat: self.heat_setpoint,
                cool: self.cool_setpoint,
            });
        }
        if self.setback_heat > self.heat_setpoint {
            return Err(Error::InvalidPolicy(
                "setback_heat must not exceed heat_setpoint".into(),
            ));
        }
        if self.setback_cool < self.cool_setpoint {
            return Err(Error::InvalidPolicy(
                "setback_cool must not be below cool_setpoint".into(),
            ));
        }
        if self.suggestion_offset_k < 0.0 {
            return Err(Error::InvalidPolicy(
                "suggestion_offset_k must be >= 0".into(),
            ));
        }
        if self.comfort_cool_setpoint <= self.heat_setpoint {
            return Err(Error::InvalidPolicy(
                "comfort_cool_setpoint must be above heat_setpoint".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Setpoints {
    pub heat: f64,
    pub cool: f64,
}

/// What the controller can know about the current hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourContext {
    pub state: OccupancyState,
    /// The family's weekly plan has them at work.
    pub scheduled_away: bool,
    /// Completed hours of the current absence before this hour.
    pub away_streak: u32,
}

pub fn effective_setpoints(policy: &ControlPolicy, ctx: HourContext) -> Setpoints {
    let comfort = Setpoints {
        heat: policy.heat_setpoint,
        cool: policy.cool_setpoint,
    };
    let setback = Setpoints {
        heat: policy.setback_heat,
        cool: policy.setback_cool,
    };
    let vacation = ctx.state == OccupancyState::Vacation;
    match policy.kind {
        ScenarioKind::Baseline => comfort,
        ScenarioKind::LowCost => {
            if vacation || ctx.scheduled_away {
                setback
            } else {
                comfort
            }
        }
        ScenarioKind::Extended => {
            let auto_away = ctx.state != OccupancyState::Occupied
                && ctx.away_streak >= policy.auto_away_delay_h;
            if vacation || ctx.scheduled_away || auto_away {
                setback
            } else {
                // Accepted thermostat suggestion, never past the setback pair.
                Setpoints {
                    heat: (comfort.heat - policy.suggestion_offset_k).max(setback.heat),
                    cool: (comfort.cool + policy.suggestion_offset_k).min(setback.cool),
                }
            }
        }
    }
}

/// Strictly above the trigger, and only with someone home.
pub fn comfort_cooling_demand(indoor_temp: f64, occupied: bool) -> bool {
    occupied && indoor_temp > COMFORT_COOLING_TRIGGER_C
}

/// Presence as seen by the comfort rule. A fixed thermostat cannot tell
/// a short absence from presence, so only Vacation counts as empty.
pub fn comfort_presence(policy: &ControlPolicy, state: OccupancyState) -> bool {
    match policy.kind {
        ScenarioKind::Baseline => state != OccupancyState::Vacation,
        _ => state == OccupancyState::Occupied,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ScenarioSpec {
    pub name: ScenarioKind,
    pub policy: ControlPolicy,
    pub investment_eur: f64,
    pub devices: Vec<String>,
    pub operation: String,
}

pub fn investment_eur(kind: ScenarioKind) -> f64 {
    match kind {
        ScenarioKind::Baseline => 0.0,
        ScenarioKind::LowCost => 268.93,
        ScenarioKind::Extended => 528.35,
    }
}

pub fn scenario_catalog() -> Vec<ScenarioSpec> {
    scenario_catalog_with(&ControlSettings::default())
        .expect("default control settings are valid")
}

pub fn scenario_catalog_with(settings: &ControlSettings) -> Result<Vec<ScenarioSpec>> {
    ScenarioKind::ALL
        .into_iter()
        .map(|kind| scenario_spec(kind, settings))
        .collect()
}

pub fn scenario_spec(kind: ScenarioKind, settings: &ControlSettings) -> Result<ScenarioSpec> {
    let (devices, operation): (&[&str], &str) = match kind {
        ScenarioKind::Baseline => (&[], "Manual control"),
        ScenarioKind::LowCost => (&["thermostat", "lamp"], "Fixed schedule control"),
        ScenarioKind::Extended => (
            &["thermostat", "lamp", "hub", "motion sensors", "light sensors"],
            "Sensor-based control",
        ),
    };
    Ok(ScenarioSpec {
        name: kind,
        policy: ControlPolicy::new(kind, settings)?,
        investment_eur: investment_eur(kind),
        devices: devices.iter().map(|d| d.to_string()).collect(),
        operation: operation.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn policy(kind: ScenarioKind) -> ControlPolicy {
        ControlPolicy::new(kind, &ControlSettings::default()).unwrap()
    }

    fn ctx(state: OccupancyState, scheduled_away: bool, away_streak: u32) -> HourContext {
        HourContext {
            state,
            scheduled_away,
            away_streak,
        }
    }

    #[test]
    fn baseline_is_fixed() {
        let p = policy(ScenarioKind::Baseline);
        for s in [
            OccupancyState::Occupied,
            OccupancyState::Away,
            OccupancyState::Vacation,
        ] {
            assert_eq!(
                effective_setpoints(&p, ctx(s, false, 50)),
                Setpoints { heat: 20.0, cool: 24.0 }
            );
        }
    }

    #[test]
    fn low_cost_sets_back_on_vacation_and_work_hours() {
        let p = policy(ScenarioKind::LowCost);
        let sb = Setpoints { heat: 16.0, cool: 28.0 };
        assert_eq!(effective_setpoints(&p, ctx(OccupancyState::Vacation, false, 0)), sb);
        assert_eq!(effective_setpoints(&p, ctx(OccupancyState::Away, true, 0)), sb);
        // an unplanned weekend outing keeps comfort
        assert_eq!(
            effective_setpoints(&p, ctx(OccupancyState::Away, false, 5)),
            Setpoints { heat: 20.0, cool: 24.0 }
        );
    }

    #[test]
    fn extended_offsets_and_auto_away() {
        let p = policy(ScenarioKind::Extended);
        assert_eq!(
            effective_setpoints(&p, ctx(OccupancyState::Occupied, false, 0)),
            Setpoints { heat: 19.0, cool: 25.0 }
        );
        assert_eq!(
            effective_setpoints(&p, ctx(OccupancyState::Away, false, 1)),
            Setpoints { heat: 19.0, cool: 25.0 }
        );
        assert_eq!(
            effective_setpoints(&p, ctx(OccupancyState::Away, false, 2)),
            Setpoints { heat: 16.0, cool: 28.0 }
        );
    }

    #[test]
    fn comfort_rule_is_strict() {
        assert!(comfort_cooling_demand(26.0, true));
        assert!(!comfort_cooling_demand(25.0, true));
        assert!(!comfort_cooling_demand(30.0, false));
        let base = policy(ScenarioKind::Baseline);
        assert!(comfort_cooling_demand(
            30.0,
            comfort_presence(&base, OccupancyState::Away)
        ));
        assert!(!comfort_cooling_demand(
            30.0,
            comfort_presence(&base, OccupancyState::Vacation)
        ));
        let ext = policy(ScenarioKind::Extended);
        assert!(!comfort_presence(&ext, OccupancyState::Away));
    }

    #[test]
    fn catalog_costs_and_lighting() {
        let cat = scenario_catalog();
        assert_eq!(cat.len(), 3);
        assert_eq!(cat[0].investment_eur, 0.0);
        assert_eq!(cat[1].investment_eur, 268.93);
        assert_eq!(cat[2].investment_eur, 528.35);
        let modes: Vec<_> = cat.iter().map(|s| s.policy.lighting_mode).collect();
        assert_eq!(
            modes,
            [
                LightingMode::Manual,
                LightingMode::Scheduled,
                LightingMode::SensorDaylight
            ]
        );
    }

    #[test]
    fn names_parse() {
        assert_eq!("low-cost".parse::<ScenarioKind>().unwrap(), ScenarioKind::LowCost);
        let err = "smart".parse::<ScenarioKind>().unwrap_err().to_string();
        assert!(err.contains("baseline, low-cost, extended"), "{err}");
    }

    #[test]
    fn invalid_settings_rejected() {
        let s = ControlSettings {
            heat_setpoint: 24.0,
            cool_setpoint: 24.0,
            ..Default::default()
        };
        assert!(matches!(
            ControlPolicy::new(ScenarioKind::Baseline, &s),
            Err(Error::InvalidSetpoints { .. })
        ));
        let s = ControlSettings {
            setback_heat: 21.0,
            ..Default::default()
        };
        assert!(ControlPolicy::new(ScenarioKind::LowCost, &s).is_err());
    }

    fn any_state() -> impl Strategy<Value = OccupancyState> {
        prop_oneof![
            Just(OccupancyState::Occupied),
            Just(OccupancyState::Away),
            Just(OccupancyState::Vacation),
        ]
    }

    proptest! {
        #[test]
        fn automation_never_more_demanding(
            state in any_state(),
            scheduled in any::<bool>(),
            streak in 0u32..48,
            offset in 0.0f64..3.0,
            delay in 0u32..6,
        ) {
            let settings = ControlSettings {
                suggestion_offset_k: offset,
                auto_away_delay_h: delay,
                ..Default::default()
            };
            // the plan only has people away when they actually are
            let scheduled = scheduled && state == OccupancyState::Away;
            let c = ctx(state, scheduled, streak);
            let b = effective_setpoints(&ControlPolicy::new(ScenarioKind::Baseline, &settings).unwrap(), c);
            let l = effective_setpoints(&ControlPolicy::new(ScenarioKind::LowCost, &settings).unwrap(), c);
            let e = effective_setpoints(&ControlPolicy::new(ScenarioKind::Extended, &settings).unwrap(), c);
            prop_assert!(e.heat <= l.heat && l.heat <= b.heat);
            prop_assert!(e.cool >= l.cool && l.cool >= b.cool);
            prop_assert!(e.heat < e.cool);
        }
    }
}
