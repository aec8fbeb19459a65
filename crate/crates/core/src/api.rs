//! Request/response types of the JSON API and the handlers behind them.
//!
//! The HTTP service and the local CLI both go through these handlers, so a
//! given request yields the same numbers on either path.

use schemars::{schema_for, JsonSchema};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::{City, Config};
use crate::control::{scenario_catalog_with, ControlPolicy, ControlSettings, ScenarioKind, ScenarioSpec};
use crate::error::Error;
use crate::indicators::{
    full_report, report_from_savings, EconParams, EmissionFactorTable, EndUseSavings,
    IndicatorReport, ReportInputs,
};
use crate::occupancy::{build_profile, OccupancyConfig};
use crate::tariff::{EnergyByCarrier, PriceBook};
use crate::thermal::{simulate_year, BuildingParams, SimulationResult};
use crate::weather::{synthesize_weather, ClimatePreset, WeatherSeries};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Malformed body, unknown names, missing fields.
    BadRequest,
    /// Well-formed but violates a domain rule.
    Unprocessable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema, thiserror::Error)]
#[error("{message}")]
pub struct ApiError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    /// Accepted values, when the error is an unknown name.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub valid: Vec<String>,
}

impl ApiError {
    pub fn bad_request(field: impl Into<Option<String>>, message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::BadRequest,
            message: message.into(),
            field: field.into(),
            valid: Vec::new(),
        }
    }

    pub fn unprocessable(field: impl Into<Option<String>>, message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Unprocessable,
            message: message.into(),
            field: field.into(),
            valid: Vec::new(),
        }
    }

    fn from_core(field: &str, e: Error) -> Self {
        let semantic = e.is_semantic();
        let valid = match &e {
            Error::UnknownName { valid, .. } => valid.clone(),
            _ => Vec::new(),
        };
        Self {
            kind: if semantic {
                ErrorKind::Unprocessable
            } else {
                ErrorKind::BadRequest
            },
            message: e.to_string(),
            field: Some(field.to_string()),
            valid,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SimulateRequest {
    /// Weather preset name, e.g. `stuttgart-cfb`.
    #[serde(default)]
    pub preset: Option<String>,
    /// `baseline`, `low-cost` or `extended`.
    pub scenario: String,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Partial overrides of the building parameters.
    #[serde(default)]
    pub building: Option<Map<String, Value>>,
    /// Partial overrides of the thermostat settings.
    #[serde(default)]
    pub control: Option<Map<String, Value>>,
    /// Partial overrides of the occupancy pattern.
    #[serde(default)]
    pub occupancy: Option<Map<String, Value>>,
}

/// Annual site energy by end use and carrier, kWh/a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EnergySummary {
    pub heating_kwh: f64,
    pub cooling_kwh: f64,
    pub lighting_kwh: f64,
    pub electricity_kwh: f64,
    pub gas_kwh: f64,
    pub total_kwh: f64,
}

impl From<&SimulationResult> for EnergySummary {
    fn from(r: &SimulationResult) -> Self {
        Self {
            heating_kwh: r.heating_kwh,
            cooling_kwh: r.cooling_kwh,
            lighting_kwh: r.lighting_kwh,
            electricity_kwh: r.electricity_kwh(),
            gas_kwh: r.gas_kwh(),
            total_kwh: r.total_kwh(),
        }
    }
}

impl EnergySummary {
    pub fn to_result(&self) -> SimulationResult {
        SimulationResult::from_end_uses(self.heating_kwh, self.cooling_kwh, self.lighting_kwh)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SimulateEcho {
    /// Preset name, or `csv:<path>` for ingested weather.
    pub weather: String,
    pub scenario: ScenarioKind,
    pub seed: u64,
    pub building: BuildingParams,
    pub control: ControlSettings,
    pub occupancy: OccupancyConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SimulateResponse {
    pub engine_version: String,
    pub config: SimulateEcho,
    pub result: EnergySummary,
}

/// A resolved simulation: the response plus the full result with trace.
pub struct SimulationRun {
    pub response: SimulateResponse,
    pub result: SimulationResult,
}

fn merge_overrides<T>(field: &str, base: &T, overrides: &Option<Map<String, Value>>) -> Result<T, ApiError>
where
    T: Serialize + for<'de> Deserialize<'de>,
{
    let Some(ov) = overrides else {
        return serde_json::to_value(base)
            .and_then(serde_json::from_value)
            .map_err(|e| ApiError::bad_request(field.to_string(), e.to_string()));
    };
    let mut v = serde_json::to_value(base).expect("config sections serialize");
    let obj = v.as_object_mut().expect("config sections are objects");
    for (k, val) in ov {
        obj.insert(k.clone(), val.clone());
    }
    serde_json::from_value(v)
        .map_err(|e| ApiError::bad_request(field.to_string(), format!("{field}: {e}")))
}

pub fn parse_scenario(name: &str) -> Result<ScenarioKind, ApiError> {
    name.parse().map_err(|e| ApiError::from_core("scenario", e))
}

struct ResolvedSimulation {
    scenario: ScenarioKind,
    seed: u64,
    building: BuildingParams,
    control: ControlSettings,
    occupancy: OccupancyConfig,
}

fn resolve_simulation(config: &Config, req: &SimulateRequest) -> Result<ResolvedSimulation, ApiError> {
    let scenario = parse_scenario(&req.scenario)?;
    let building: BuildingParams = merge_overrides("building", &config.building, &req.building)?;
    let control: ControlSettings = merge_overrides("control", &config.control, &req.control)?;
    let occupancy: OccupancyConfig = merge_overrides("occupancy", &config.occupancy, &req.occupancy)?;
    building
        .validate()
        .map_err(|e| ApiError::from_core("building", e))?;
    occupancy
        .validate()
        .map_err(|e| ApiError::from_core("occupancy", e))?;
    ControlPolicy::new(scenario, &control).map_err(|e| ApiError::from_core("control", e))?;
    Ok(ResolvedSimulation {
        scenario,
        seed: req.seed.unwrap_or(config.seed),
        building,
        control,
        occupancy,
    })
}

/// Runs one scenario on the given weather.
pub fn simulate_with_weather(
    config: &Config,
    req: &SimulateRequest,
    weather: &WeatherSeries,
    weather_label: &str,
    keep_trace: bool,
) -> Result<SimulationRun, ApiError> {
    let r = resolve_simulation(config, req)?;
    let profile = build_profile(Config::occupancy_seed(r.seed), &r.occupancy)
        .map_err(|e| ApiError::from_core("occupancy", e))?;
    let policy = ControlPolicy::new(r.scenario, &r.control)
        .map_err(|e| ApiError::from_core("control", e))?;
    let result = simulate_year(weather, &profile, &policy, &r.building, keep_trace)
        .map_err(|e| ApiError::from_core("simulation", e))?;
    Ok(SimulationRun {
        response: SimulateResponse {
            engine_version: ENGINE_VERSION.to_string(),
            config: SimulateEcho {
                weather: weather_label.to_string(),
                scenario: r.scenario,
                seed: r.seed,
                building: r.building,
                control: r.control,
                occupancy: r.occupancy,
            },
            result: EnergySummary::from(&result),
        },
        result,
    })
}

pub fn preset_weather(config: &Config, name: &str, seed: u64) -> Result<WeatherSeries, ApiError> {
    let preset = config
        .weather_preset(name)
        .map_err(|e| ApiError::from_core("preset", e))?;
    synthesize_weather(preset, seed).map_err(|e| ApiError::from_core("preset", e))
}

pub fn run_simulation(config: &Config, req: &SimulateRequest, keep_trace: bool) -> Result<SimulationRun, ApiError> {
    // scenario errors take precedence so the caller learns the valid names
    parse_scenario(&req.scenario)?;
    let preset = req
        .preset
        .as_deref()
        .ok_or_else(|| ApiError::bad_request("preset".to_string(), "missing field `preset`"))?;
    let seed = req.seed.unwrap_or(config.seed);
    let weather = preset_weather(config, preset, seed)?;
    simulate_with_weather(config, req, &weather, preset, keep_trace)
}

pub fn handle_simulate(config: &Config, req: &SimulateRequest) -> Result<SimulateResponse, ApiError> {
    run_simulation(config, req, false).map(|r| r.response)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum PriceBookRef {
    Named(String),
    Custom(PriceBook),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SavingsInput {
    pub heating_kwh: f64,
    pub cooling_kwh: f64,
    pub lighting_kwh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EndUseEnergy {
    pub heating_kwh: f64,
    pub cooling_kwh: f64,
    pub lighting_kwh: f64,
}

impl From<&EnergySummary> for EndUseEnergy {
    fn from(s: &EnergySummary) -> Self {
        Self {
            heating_kwh: s.heating_kwh,
            cooling_kwh: s.cooling_kwh,
            lighting_kwh: s.lighting_kwh,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EconOverrides {
    #[serde(default)]
    pub discount_rate: Option<f64>,
    #[serde(default)]
    pub horizon_years: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct IndicatorsRequest {
    /// Scenario whose device cost is the investment.
    #[serde(default)]
    pub scenario: Option<String>,
    /// Overrides the catalog investment, €.
    #[serde(default)]
    pub investment_eur: Option<f64>,
    /// Annual savings per end use. Mutually exclusive with `reference`/`candidate`.
    #[serde(default)]
    pub savings: Option<SavingsInput>,
    /// Pre-retrofit consumption per carrier for valuing `savings` under block
    /// tariffs. Without it savings are valued at the marginal (upper block) price.
    #[serde(default)]
    pub reference_consumption: Option<EnergyByCarrier>,
    #[serde(default)]
    pub reference: Option<EndUseEnergy>,
    #[serde(default)]
    pub candidate: Option<EndUseEnergy>,
    /// Preset name or a full custom price book.
    pub price_book: PriceBookRef,
    #[serde(default)]
    pub econ: Option<EconOverrides>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IndicatorsEcho {
    pub scenario: Option<ScenarioKind>,
    pub investment_eur: f64,
    pub price_book_name: Option<String>,
    pub price_book: PriceBook,
    pub econ: EconParams,
    /// `savings` or `results`.
    pub input_mode: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IndicatorsResponse {
    pub engine_version: String,
    pub config: IndicatorsEcho,
    pub report: IndicatorReport,
}

pub fn handle_indicators(config: &Config, req: &IndicatorsRequest) -> Result<IndicatorsResponse, ApiError> {
    let scenario = req.scenario.as_deref().map(parse_scenario).transpose()?;
    let investment = match (req.investment_eur, scenario) {
        (Some(v), _) => v,
        (None, Some(k)) => crate::control::investment_eur(k),
        (None, None) => {
            return Err(ApiError::bad_request(
                "scenario".to_string(),
                "either `scenario` or `investment_eur` is required",
            ))
        }
    };
    if !(investment.is_finite() && investment >= 0.0) {
        return Err(ApiError::unprocessable(
            "investment_eur".to_string(),
            format!("investment must be >= 0, got {investment}"),
        ));
    }

    let (book_name, book) = match &req.price_book {
        PriceBookRef::Named(n) => (
            Some(n.clone()),
            config
                .price_book(n)
                .map_err(|e| ApiError::from_core("price_book", e))?
                .clone(),
        ),
        PriceBookRef::Custom(b) => (None, b.clone()),
    };
    book.validate()
        .map_err(|e| ApiError::from_core("price_book", e))?;

    let ov = req.econ.unwrap_or_default();
    let econ = EconParams {
        discount_rate: ov.discount_rate.unwrap_or(config.econ.discount_rate),
        horizon_years: ov.horizon_years.unwrap_or(config.econ.horizon_years),
    };
    econ.validate().map_err(|e| ApiError::from_core("econ", e))?;

    let table: &EmissionFactorTable = &config.emission_factors;
    let inputs = ReportInputs {
        investment_eur: investment,
        book: &book,
        econ,
        table,
    };
    let (report, mode) = match (&req.savings, &req.reference, &req.candidate) {
        (Some(s), None, None) => (
            report_from_savings(
                EndUseSavings::new(s.heating_kwh, s.cooling_kwh, s.lighting_kwh),
                req.reference_consumption,
                &inputs,
            )
            .map_err(|e| ApiError::from_core("savings", e))?,
            "savings",
        ),
        (None, Some(r), Some(c)) => {
            let to_result =
                |e: &EndUseEnergy| SimulationResult::from_end_uses(e.heating_kwh, e.cooling_kwh, e.lighting_kwh);
            (
                full_report(&to_result(r), &to_result(c), &inputs)
                    .map_err(|e| ApiError::from_core("reference", e))?,
                "results",
            )
        }
        _ => {
            return Err(ApiError::bad_request(
                "savings".to_string(),
                "provide either `savings` or both `reference` and `candidate`",
            ))
        }
    };

    Ok(IndicatorsResponse {
        engine_version: ENGINE_VERSION.to_string(),
        config: IndicatorsEcho {
            scenario,
            investment_eur: investment,
            price_book_name: book_name,
            price_book: book,
            econ,
            input_mode: mode.to_string(),
        },
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Defaults {
    pub seed: u64,
    pub building: BuildingParams,
    pub occupancy: OccupancyConfig,
    pub control: ControlSettings,
    pub econ: EconParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PresetsResponse {
    pub engine_version: String,
    pub weather_presets: std::collections::BTreeMap<String, ClimatePreset>,
    pub price_books: std::collections::BTreeMap<String, PriceBook>,
    pub cities: std::collections::BTreeMap<String, City>,
    pub scenarios: Vec<ScenarioSpec>,
    pub emission_factors: EmissionFactorTable,
    pub defaults: Defaults,
}

pub fn handle_presets(config: &Config) -> PresetsResponse {
    PresetsResponse {
        engine_version: ENGINE_VERSION.to_string(),
        weather_presets: config.weather_presets.clone(),
        price_books: config.price_books.clone(),
        cities: config.cities.clone(),
        scenarios: scenario_catalog_with(&config.control).expect("validated config"),
        emission_factors: config.emission_factors.clone(),
        defaults: Defaults {
            seed: config.seed,
            building: config.building.clone(),
            occupancy: config.occupancy.clone(),
            control: config.control.clone(),
            econ: config.econ,
        },
    }
}

/// JSON schemas of every request and response body.
pub fn schemas() -> Value {
    serde_json::json!({
        "engine_version": ENGINE_VERSION,
        "simulate_request": schema_for!(SimulateRequest),
        "simulate_response": schema_for!(SimulateResponse),
        "indicators_request": schema_for!(IndicatorsRequest),
        "indicators_response": schema_for!(IndicatorsResponse),
        "presets_response": schema_for!(PresetsResponse),
        "error": schema_for!(ApiError),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn indicators(body: Value) -> Result<IndicatorsResponse, ApiError> {
        let req: IndicatorsRequest = serde_json::from_value(body).unwrap();
        handle_indicators(&Config::default(), &req)
    }

    #[test]
    fn unknown_scenario_lists_valid_names() {
        let req = SimulateRequest {
            scenario: "smart".into(),
            ..Default::default()
        };
        let err = handle_simulate(&Config::default(), &req).unwrap_err();
        assert_eq!(err.kind, ErrorKind::BadRequest);
        assert_eq!(err.valid, ["baseline", "low-cost", "extended"]);
    }

    #[test]
    fn setpoint_inversion_is_unprocessable() {
        let req = SimulateRequest {
            preset: Some("algiers-csa".into()),
            scenario: "baseline".into(),
            control: Some(json!({"heat_setpoint": 25.0}).as_object().unwrap().clone()),
            ..Default::default()
        };
        let err = handle_simulate(&Config::default(), &req).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Unprocessable, "{err:?}");
    }

    #[test]
    fn unknown_override_field_is_bad_request() {
        let req = SimulateRequest {
            preset: Some("algiers-csa".into()),
            scenario: "baseline".into(),
            building: Some(json!({"walls": 3}).as_object().unwrap().clone()),
            ..Default::default()
        };
        let err = handle_simulate(&Config::default(), &req).unwrap_err();
        assert_eq!(err.kind, ErrorKind::BadRequest);
        assert!(err.message.contains("walls"), "{}", err.message);
    }

    #[test]
    fn stuttgart_low_cost_payback() {
        let r = indicators(json!({
            "scenario": "low-cost",
            "savings": {"heating_kwh": 7403.0, "cooling_kwh": 2689.0, "lighting_kwh": 0.0},
            "price_book": "germany-2019",
            "econ": {"discount_rate": 0.05}
        }))
        .unwrap();
        assert!((r.report.payback_years.unwrap() - 0.212).abs() < 1e-3);
        assert_eq!(r.config.investment_eur, 268.93);
    }

    #[test]
    fn undiscounted_npv() {
        let r = indicators(json!({
            "scenario": "extended",
            "savings": {"heating_kwh": 1000.0, "cooling_kwh": 500.0, "lighting_kwh": 100.0},
            "price_book": "germany-2019",
            "econ": {"discount_rate": 0.0}
        }))
        .unwrap();
        let doc = r.report.annual_cost_saving_eur;
        assert!((r.report.npv_eur - (10.0 * doc - 528.35)).abs() < 1e-9);
    }

    #[test]
    fn negative_custom_rate_is_unprocessable() {
        let err = indicators(json!({
            "scenario": "low-cost",
            "savings": {"heating_kwh": 1.0, "cooling_kwh": 1.0, "lighting_kwh": 1.0},
            "price_book": {"country": "X", "electricity": {"flat": {"rate": -0.1}}, "gas": {"flat": {"rate": 0.05}}}
        }))
        .unwrap_err();
        assert_eq!(err.kind, ErrorKind::Unprocessable);
    }

    #[test]
    fn mode_selection() {
        let err = indicators(json!({"scenario": "low-cost", "price_book": "germany-2019"})).unwrap_err();
        assert_eq!(err.kind, ErrorKind::BadRequest);
        let err = indicators(json!({
            "savings": {"heating_kwh": 1.0, "cooling_kwh": 1.0, "lighting_kwh": 1.0},
            "price_book": "germany-2019"
        }))
        .unwrap_err();
        assert_eq!(err.field.as_deref(), Some("scenario"));
        let err = indicators(json!({
            "scenario": "low-cost",
            "savings": {"heating_kwh": 1.0, "cooling_kwh": 1.0, "lighting_kwh": 1.0},
            "price_book": "france-2030"
        }))
        .unwrap_err();
        assert_eq!(err.kind, ErrorKind::BadRequest);
        assert!(err.valid.contains(&"germany-2019".to_string()));
    }

    #[test]
    fn schemas_cover_all_bodies() {
        let s = schemas();
        for k in ["simulate_request", "indicators_request", "presets_response"] {
            assert!(s.get(k).is_some(), "{k}");
        }
    }
}
