//! Hourly single-zone lumped-capacitance model with ideal HVAC and
//! occupancy-driven lighting.
//!
//! The zone obeys `C dT/dt = UA (T_out - T) + Q`, with `Q` constant over
//! each hour, so the hourly update is the exact exponential solution. The
//! HVAC delivers the constant power that lands the zone exactly on the
//! violated setpoint at the end of the hour, clipped to the plant capacity.

use std::fmt::Write as _;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::control::{
    comfort_cooling_demand, comfort_presence, effective_setpoints, ControlPolicy, HourContext,
    LightingMode, Setpoints,
};
use crate::error::{Error, Result};
use crate::occupancy::{OccupancyProfile, OccupancyState};
use crate::weather::{WeatherRecord, WeatherSeries};

const STEP_SECONDS: f64 = 3600.0;
const J_PER_WH: f64 = 3600.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct BuildingParams {
    /// m²
    pub floor_area: f64,
    /// Overall heat-loss coefficient, W/K.
    pub ua: f64,
    /// Thermal mass, J/K.
    pub capacitance: f64,
    /// Effective solar aperture, m².
    pub window_solar_area: f64,
    /// W per person at home.
    pub internal_gain_per_person: f64,
    pub occupants: u32,
    /// Gas boiler seasonal efficiency.
    pub heater_efficiency: f64,
    pub cooling_cop: f64,
    /// W/m²
    pub lighting_power_density: f64,
    /// Symmetric heating/cooling plant capacity, W.
    pub hvac_capacity: f64,
    /// GHI at which daylight alone suffices, W/m².
    pub daylight_threshold: f64,
    /// Lights are only wanted in `[awake_start_hour, awake_end_hour)`.
    pub awake_start_hour: u32,
    pub awake_end_hour: u32,
}

impl Default for BuildingParams {
    fn default() -> Self {
        Self {
            floor_area: 150.0,
            ua: 360.0,
            capacitance: 40.0e6,
            window_solar_area: 6.0,
            internal_gain_per_person: 90.0,
            occupants: 4,
            heater_efficiency: 0.9,
            cooling_cop: 3.0,
            lighting_power_density: 10.0,
            hvac_capacity: 12_000.0,
            daylight_threshold: 120.0,
            awake_start_hour: 6,
            awake_end_hour: 23,
        }
    }
}

impl BuildingParams {
    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 9] = [
            ("floor_area", self.floor_area),
            ("ua", self.ua),
            ("capacitance", self.capacitance),
            ("window_solar_area", self.window_solar_area),
            ("internal_gain_per_person", self.internal_gain_per_person),
            ("heater_efficiency", self.heater_efficiency),
            ("cooling_cop", self.cooling_cop),
            ("lighting_power_density", self.lighting_power_density),
            ("hvac_capacity", self.hvac_capacity),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidBuilding {
                    field,
                    reason: format!("must be > 0, got {v}"),
                });
            }
        }
        if !(self.daylight_threshold.is_finite() && self.daylight_threshold > 0.0) {
            return Err(Error::InvalidBuilding {
                field: "daylight_threshold",
                reason: "must be > 0".into(),
            });
        }
        if self.occupants == 0 {
            return Err(Error::InvalidBuilding {
                field: "occupants",
                reason: "must be >= 1".into(),
            });
        }
        if self.heater_efficiency > 1.0 {
            return Err(Error::InvalidBuilding {
                field: "heater_efficiency",
                reason: "must be <= 1".into(),
            });
        }
        if self.cooling_cop < 1.0 {
            return Err(Error::InvalidBuilding {
                field: "cooling_cop",
                reason: "must be >= 1".into(),
            });
        }
        if self.awake_start_hour > self.awake_end_hour || self.awake_end_hour > 24 {
            return Err(Error::InvalidBuilding {
                field: "awake_end_hour",
                reason: "awake window must satisfy start <= end <= 24".into(),
            });
        }
        Ok(())
    }

    pub fn installed_lighting_w(&self) -> f64 {
        self.lighting_power_density * self.floor_area
    }

    /// Fraction of the initial temperature offset remaining after one hour.
    fn decay(&self) -> f64 {
        (-self.ua * STEP_SECONDS / self.capacitance).exp()
    }

    /// `1 - decay`, accurate for small UA.
    fn one_minus_decay(&self) -> f64 {
        -(-self.ua * STEP_SECONDS / self.capacitance).exp_m1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum HvacMode {
    Heat,
    Cool,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneState {
    pub indoor_temp: f64,
    pub hvac_mode: HvacMode,
    /// Thermal energy delivered over the last hour, Wh. Negative when cooling.
    pub delivered_heat: f64,
}

impl ZoneState {
    pub fn at(indoor_temp: f64) -> Self {
        Self {
            indoor_temp,
            hvac_mode: HvacMode::Off,
            delivered_heat: 0.0,
        }
    }
}

fn end_temp(t0: f64, t_out: f64, q: f64, p: &BuildingParams) -> f64 {
    let t_eq = t_out + q / p.ua;
    t_eq + (t0 - t_eq) * p.decay()
}

/// Constant power over the hour that ends the hour at `target`.
fn power_to_reach(t0: f64, t_out: f64, target: f64, q_free: f64, p: &BuildingParams) -> f64 {
    p.ua * (target - t_out - (t0 - t_out) * p.decay()) / p.one_minus_decay() - q_free
}

pub fn solar_gain_w(weather: &WeatherRecord, params: &BuildingParams) -> f64 {
    weather.ghi * params.window_solar_area
}

/// Advances the zone one hour. `gains` are internal gains (people, lights) in W;
/// solar gains are taken from the weather record.
pub fn step_zone(
    state: ZoneState,
    weather: &WeatherRecord,
    setpoints: Setpoints,
    params: &BuildingParams,
    gains: f64,
) -> Result<ZoneState> {
    if setpoints.heat.is_nan() || setpoints.cool.is_nan() || setpoints.heat >= setpoints.cool {
        return Err(Error::InvalidSetpoints {
            heat: setpoints.heat,
            cool: setpoints.cool,
        });
    }
    let t0 = state.indoor_temp;
    let t_out = weather.outdoor_temp;
    let q_free = solar_gain_w(weather, params) + gains;
    let free = end_temp(t0, t_out, q_free, params);

    let (mode, target) = if free < setpoints.heat {
        (HvacMode::Heat, setpoints.heat)
    } else if free > setpoints.cool {
        (HvacMode::Cool, setpoints.cool)
    } else {
        return Ok(ZoneState {
            indoor_temp: free,
            hvac_mode: HvacMode::Off,
            delivered_heat: 0.0,
        });
    };

    let needed = power_to_reach(t0, t_out, target, q_free, params);
    let cap = params.hvac_capacity;
    let q_hvac = needed.clamp(-cap, cap);
    let indoor_temp = if q_hvac == needed {
        target
    } else {
        end_temp(t0, t_out, q_free + q_hvac, params)
    };
    Ok(ZoneState {
        indoor_temp,
        hvac_mode: mode,
        delivered_heat: q_hvac * STEP_SECONDS / J_PER_WH,
    })
}

/// Stored energy `C ΔT` and the time integral of the net heat flow over one
/// step, both in J. `hvac_w` is the mean HVAC power actually delivered.
pub fn step_energy_balance(
    t_start: f64,
    t_end: f64,
    weather: &WeatherRecord,
    params: &BuildingParams,
    gains: f64,
    hvac_w: f64,
) -> (f64, f64) {
    let q = solar_gain_w(weather, params) + gains + hvac_w;
    let t_eq = weather.outdoor_temp + q / params.ua;
    let tau = params.capacitance / params.ua;
    // ∫ T dt over the hour along the exponential trajectory.
    let mean_t = t_eq + (t_start - t_eq) * params.one_minus_decay() * tau / STEP_SECONDS;
    let net = (params.ua * (weather.outdoor_temp - mean_t) + q) * STEP_SECONDS;
    let stored = params.capacitance * (t_end - t_start);
    (stored, net)
}

/// Relative mismatch of [`step_energy_balance`], scaled by the gross heat
/// throughput of the step.
pub fn energy_balance_residual(
    t_start: f64,
    t_end: f64,
    weather: &WeatherRecord,
    params: &BuildingParams,
    gains: f64,
    hvac_w: f64,
) -> f64 {
    let (stored, net) = step_energy_balance(t_start, t_end, weather, params, gains, hvac_w);
    let q = solar_gain_w(weather, params) + gains + hvac_w;
    let scale = stored
        .abs()
        .max(net.abs())
        .max(q.abs() * STEP_SECONDS)
        .max(params.ua * (weather.outdoor_temp - t_start).abs() * STEP_SECONDS)
        .max(1.0);
    (stored - net).abs() / scale
}

/// What lighting control can see in a given hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightingContext {
    pub state: OccupancyState,
    /// The weekly plan has the family out at work.
    pub scheduled_away: bool,
}

/// Electric lighting power for the hour, W.
///
/// Manual and Scheduled light dark waking hours whenever the family is not
/// out at work or on vacation; with manual switches that includes lights
/// left burning during weekend outings, with the smart lamp it is the
/// planned at-home time. SensorDaylight lights only actually occupied
/// waking hours and dims linearly to zero as GHI approaches the daylight
/// threshold.
pub fn lighting_demand(
    hour: &WeatherRecord,
    ctx: LightingContext,
    mode: LightingMode,
    params: &BuildingParams,
) -> f64 {
    let hod = hour.hour_of_year % 24;
    let awake = (params.awake_start_hour..params.awake_end_hour).contains(&hod);
    if !awake || ctx.state == OccupancyState::Vacation {
        return 0.0;
    }
    let installed = params.installed_lighting_w();
    let dark = hour.ghi < params.daylight_threshold;
    match mode {
        LightingMode::Manual => {
            if dark && !ctx.scheduled_away {
                installed
            } else {
                0.0
            }
        }
        LightingMode::Scheduled => {
            let planned_home = !ctx.scheduled_away;
            if dark && planned_home {
                installed
            } else {
                0.0
            }
        }
        LightingMode::SensorDaylight => {
            if ctx.state != OccupancyState::Occupied {
                return 0.0;
            }
            let daylight = (hour.ghi / params.daylight_threshold).clamp(0.0, 1.0);
            installed * (1.0 - daylight)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub hour: u32,
    pub temp_in_c: f64,
    /// Gas burned for heating, Wh.
    pub heat_wh: f64,
    /// Electricity for cooling, Wh.
    pub cool_wh: f64,
    /// Electricity for lighting, Wh.
    pub light_wh: f64,
}

pub const TRACE_CSV_HEADER: &str = "hour,temp_in_c,heat_wh,cool_wh,light_wh";

/// Annual site energy by end use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SimulationResult {
    /// Gas for heating, kWh/a.
    pub heating_kwh: f64,
    /// Electricity for cooling, kWh/a.
    pub cooling_kwh: f64,
    /// Electricity for lighting, kWh/a.
    pub lighting_kwh: f64,
    #[serde(skip)]
    #[schemars(skip)]
    pub hourly_trace: Option<Vec<TraceRow>>,
}

impl SimulationResult {
    pub fn from_end_uses(heating_kwh: f64, cooling_kwh: f64, lighting_kwh: f64) -> Self {
        Self {
            heating_kwh,
            cooling_kwh,
            lighting_kwh,
            hourly_trace: None,
        }
    }

    pub fn gas_kwh(&self) -> f64 {
        self.heating_kwh
    }

    pub fn electricity_kwh(&self) -> f64 {
        self.cooling_kwh + self.lighting_kwh
    }

    pub fn total_kwh(&self) -> f64 {
        self.heating_kwh + self.cooling_kwh + self.lighting_kwh
    }

    pub fn trace_csv(&self) -> Option<String> {
        let trace = self.hourly_trace.as_ref()?;
        let mut out = String::with_capacity(trace.len() * 48);
        out.push_str(TRACE_CSV_HEADER);
        out.push('\n');
        for r in trace {
            let _ = writeln!(
                out,
                "{},{:.4},{:.4},{:.4},{:.4}",
                r.hour, r.temp_in_c, r.heat_wh, r.cool_wh, r.light_wh
            );
        }
        Some(out)
    }
}

/// Runs one year hour by hour. The zone starts at the comfort heating setpoint.
pub fn simulate_year(
    weather: &WeatherSeries,
    profile: &OccupancyProfile,
    policy: &ControlPolicy,
    params: &BuildingParams,
    keep_trace: bool,
) -> Result<SimulationResult> {
    simulate_records(weather.records(), profile, policy, params, keep_trace)
}

pub fn simulate_records(
    weather: &[WeatherRecord],
    profile: &OccupancyProfile,
    policy: &ControlPolicy,
    params: &BuildingParams,
    keep_trace: bool,
) -> Result<SimulationResult> {
    if weather.len() != profile.len() {
        return Err(Error::LengthMismatch {
            weather: weather.len(),
            occupancy: profile.len(),
        });
    }
    params.validate()?;
    policy.validate()?;

    let mut zone = ZoneState::at(policy.heat_setpoint);
    let mut away_streak = 0u32;
    let (mut heat_wh, mut cool_wh, mut light_wh) = (0.0, 0.0, 0.0);
    let mut trace = keep_trace.then(|| Vec::with_capacity(weather.len()));

    for (hour, rec) in weather.iter().enumerate() {
        let state = profile.state(hour);
        let scheduled_away = profile.scheduled_away(hour);
        if state == OccupancyState::Occupied {
            away_streak = 0;
        }

        let light_w = lighting_demand(
            rec,
            LightingContext {
                state,
                scheduled_away,
            },
            policy.lighting_mode,
            params,
        );
        let people_w = if state == OccupancyState::Occupied {
            params.internal_gain_per_person * params.occupants as f64
        } else {
            0.0
        };

        let mut sp = effective_setpoints(
            policy,
            HourContext {
                state,
                scheduled_away,
                away_streak,
            },
        );
        if comfort_cooling_demand(zone.indoor_temp, comfort_presence(policy, state)) {
            sp.cool = sp.cool.min(policy.comfort_cool_setpoint).max(sp.heat + 0.5);
        }

        zone = step_zone(zone, rec, sp, params, people_w + light_w)?;

        let gas = zone.delivered_heat.max(0.0) / params.heater_efficiency;
        let cool = (-zone.delivered_heat).max(0.0) / params.cooling_cop;
        heat_wh += gas;
        cool_wh += cool;
        light_wh += light_w;
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow {
                hour: rec.hour_of_year,
                temp_in_c: zone.indoor_temp,
                heat_wh: gas,
                cool_wh: cool,
                light_wh: light_w,
            });
        }

        if state != OccupancyState::Occupied {
            away_streak += 1;
        }
    }

    Ok(SimulationResult {
        heating_kwh: heat_wh / 1000.0,
        cooling_kwh: cool_wh / 1000.0,
        lighting_kwh: light_wh / 1000.0,
        hourly_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{ControlSettings, ScenarioKind};
    use crate::occupancy::{build_profile, OccupancyConfig};
    use crate::weather::HOURS_PER_YEAR;

    fn rec(t_out: f64, ghi: f64) -> WeatherRecord {
        WeatherRecord {
            hour_of_year: 12,
            outdoor_temp: t_out,
            ghi,
        }
    }

    fn sp(heat: f64, cool: f64) -> Setpoints {
        Setpoints { heat, cool }
    }

    #[test]
    fn equilibrium_is_unchanged() {
        let p = BuildingParams::default();
        let s = step_zone(ZoneState::at(22.0), &rec(22.0, 0.0), sp(20.0, 24.0), &p, 0.0).unwrap();
        assert_eq!(s.indoor_temp, 22.0);
        assert_eq!(s.delivered_heat, 0.0);
        assert_eq!(s.hvac_mode, HvacMode::Off);
    }

    #[test]
    fn adiabatic_limit_holds_temperature() {
        let p = BuildingParams {
            ua: 1e-9,
            ..Default::default()
        };
        let s = step_zone(ZoneState::at(21.0), &rec(-10.0, 0.0), sp(15.0, 30.0), &p, 0.0).unwrap();
        assert!((s.indoor_temp - 21.0).abs() < 1e-9);
        assert_eq!(s.hvac_mode, HvacMode::Off);
    }

    #[test]
    fn steady_state_heating_matches_ua_delta_t() {
        let p = BuildingParams {
            hvac_capacity: 1e9,
            ..Default::default()
        };
        let mut s = ZoneState::at(20.0);
        for _ in 0..48 {
            s = step_zone(s, &rec(0.0, 0.0), sp(20.0, 24.0), &p, 0.0).unwrap();
        }
        let expected = p.ua * 20.0; // Wh per hour
        assert!((s.delivered_heat - expected).abs() < 1e-6 * expected);
        assert_eq!(s.indoor_temp, 20.0);
    }

    #[test]
    fn capacity_clips_and_temperature_drops() {
        let p = BuildingParams {
            hvac_capacity: 1000.0,
            ..Default::default()
        };
        let s = step_zone(ZoneState::at(20.0), &rec(-20.0, 0.0), sp(20.0, 24.0), &p, 0.0).unwrap();
        assert_eq!(s.delivered_heat, 1000.0);
        assert!(s.indoor_temp < 20.0);
        assert!(s.delivered_heat.abs() <= p.hvac_capacity);
    }

    #[test]
    fn cooling_is_negative() {
        let p = BuildingParams::default();
        let s = step_zone(ZoneState::at(24.0), &rec(35.0, 800.0), sp(20.0, 24.0), &p, 400.0).unwrap();
        assert_eq!(s.hvac_mode, HvacMode::Cool);
        assert!(s.delivered_heat < 0.0);
        assert_eq!(s.indoor_temp, 24.0);
    }

    #[test]
    fn invalid_setpoints() {
        let p = BuildingParams::default();
        assert!(matches!(
            step_zone(ZoneState::at(20.0), &rec(0.0, 0.0), sp(24.0, 24.0), &p, 0.0),
            Err(Error::InvalidSetpoints { .. })
        ));
    }

    /// Classical RK4 on the ODE with the HVAC power held at the delivered
    /// average; independent of the closed-form update.
    fn rk4_end_temp(t0: f64, r: &WeatherRecord, p: &BuildingParams, q: f64) -> f64 {
        let f = |t: f64| (p.ua * (r.outdoor_temp - t) + q) / p.capacitance;
        let n = 3600;
        let h = STEP_SECONDS / n as f64;
        let mut t = t0;
        for _ in 0..n {
            let k1 = f(t);
            let k2 = f(t + 0.5 * h * k1);
            let k3 = f(t + 0.5 * h * k2);
            let k4 = f(t + h * k3);
            t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t
    }

    #[test]
    fn exponential_update_matches_rk4() {
        let p = BuildingParams::default();
        for (t0, t_out, ghi, gains, set) in [
            (20.0, -5.0, 0.0, 360.0, sp(20.0, 24.0)),
            (18.0, 30.0, 700.0, 0.0, sp(20.0, 24.0)),
            (22.0, 15.0, 200.0, 100.0, sp(16.0, 28.0)),
            (10.0, -20.0, 0.0, 0.0, sp(20.0, 24.0)),
        ] {
            let r = rec(t_out, ghi);
            let s = step_zone(ZoneState::at(t0), &r, set, &p, gains).unwrap();
            let q = solar_gain_w(&r, &p) + gains + s.delivered_heat;
            let oracle = rk4_end_temp(t0, &r, &p, q);
            assert!((s.indoor_temp - oracle).abs() < 1e-9, "{} vs {}", s.indoor_temp, oracle);
            let res = energy_balance_residual(t0, s.indoor_temp, &r, &p, gains, s.delivered_heat);
            assert!(res < 1e-6, "residual {res}");
        }
    }

    #[test]
    fn lighting_modes() {
        let p = BuildingParams::default();
        let home = LightingContext {
            state: OccupancyState::Occupied,
            scheduled_away: false,
        };
        let night = WeatherRecord {
            hour_of_year: 20,
            outdoor_temp: 5.0,
            ghi: 0.0,
        };
        assert_eq!(lighting_demand(&night, home, LightingMode::Manual, &p), 1500.0);
        let bright = WeatherRecord { ghi: 120.0, hour_of_year: 12, ..night };
        assert_eq!(lighting_demand(&bright, home, LightingMode::SensorDaylight, &p), 0.0);
        let half = WeatherRecord { ghi: 60.0, hour_of_year: 9, ..night };
        assert!((lighting_demand(&half, home, LightingMode::SensorDaylight, &p) - 750.0).abs() < 1e-9);
        // asleep
        let late = WeatherRecord { hour_of_year: 2, ..night };
        assert_eq!(lighting_demand(&late, home, LightingMode::Manual, &p), 0.0);
        // weekend outing: manual leaves lights on, sensors do not
        let out = LightingContext {
            state: OccupancyState::Away,
            scheduled_away: false,
        };
        assert_eq!(lighting_demand(&night, out, LightingMode::Manual, &p), 1500.0);
        assert_eq!(lighting_demand(&night, out, LightingMode::SensorDaylight, &p), 0.0);
        let vac = LightingContext {
            state: OccupancyState::Vacation,
            scheduled_away: false,
        };
        for m in [LightingMode::Manual, LightingMode::Scheduled, LightingMode::SensorDaylight] {
            assert_eq!(lighting_demand(&night, vac, m, &p), 0.0);
        }
    }

    fn mild_weather() -> WeatherSeries {
        WeatherSeries::new(
            (0..HOURS_PER_YEAR)
                .map(|h| WeatherRecord {
                    hour_of_year: h as u32,
                    outdoor_temp: 22.0,
                    ghi: 1000.0,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn no_demand_gives_zero_totals() {
        // Bright mild sky: manual lights stay off and the zone settles inside
        // the deadband under people gains alone.
        let weather = mild_weather();
        let params = BuildingParams {
            window_solar_area: 1e-9,
            ..Default::default()
        };
        let profile = build_profile(0, &OccupancyConfig::default()).unwrap();
        let policy =
            ControlPolicy::new(ScenarioKind::Baseline, &ControlSettings::default()).unwrap();
        let r = simulate_year(&weather, &profile, &policy, &params, false).unwrap();
        assert_eq!(r.heating_kwh, 0.0);
        assert_eq!(r.cooling_kwh, 0.0);
        assert_eq!(r.lighting_kwh, 0.0);
    }

    #[test]
    fn trace_sums_to_totals_and_no_simultaneous_modes() {
        let weather = crate::weather::synthesize_weather(
            &crate::weather::ClimatePreset {
                name: "t".into(),
                mean_annual_temp: 14.0,
                seasonal_amplitude: 9.0,
                diurnal_amplitude: 5.0,
                peak_ghi: 900.0,
                phase: 20.0,
                daylength_amplitude_h: 3.5,
                noise: true,
            },
            2,
        )
        .unwrap();
        let profile = build_profile(2, &OccupancyConfig::default()).unwrap();
        let policy = ControlPolicy::new(ScenarioKind::LowCost, &ControlSettings::default()).unwrap();
        let r = simulate_year(&weather, &profile, &policy, &BuildingParams::default(), true).unwrap();
        let t = r.hourly_trace.as_ref().unwrap();
        assert_eq!(t.len(), HOURS_PER_YEAR);
        let sum = |f: fn(&TraceRow) -> f64| t.iter().map(f).sum::<f64>() / 1000.0;
        assert!((sum(|x| x.heat_wh) - r.heating_kwh).abs() <= 1e-6 * r.heating_kwh.max(1.0));
        assert!((sum(|x| x.cool_wh) - r.cooling_kwh).abs() <= 1e-6 * r.cooling_kwh.max(1.0));
        assert!((sum(|x| x.light_wh) - r.lighting_kwh).abs() <= 1e-6 * r.lighting_kwh.max(1.0));
        assert!(t.iter().all(|x| !(x.heat_wh > 0.0 && x.cool_wh > 0.0)));
        assert!(r.heating_kwh > 0.0 && r.cooling_kwh > 0.0);
        let csv = r.trace_csv().unwrap();
        assert_eq!(csv.lines().count(), HOURS_PER_YEAR + 1);
        assert!(csv.starts_with(TRACE_CSV_HEADER));
    }

    #[test]
    fn length_mismatch() {
        let weather = mild_weather();
        let profile = build_profile(0, &OccupancyConfig::default()).unwrap();
        let policy =
            ControlPolicy::new(ScenarioKind::Baseline, &ControlSettings::default()).unwrap();
        let err = simulate_records(
            &weather.records()[..100],
            &profile,
            &policy,
            &BuildingParams::default(),
            false,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                weather: 100,
                occupancy: 8760
            }
        ));
    }
}
