//! Simulation and cost-benefit engine for home energy-saving scenarios:
//! synthetic weather and occupancy, a single-zone thermal and lighting model,
//! thermostat policies, tariffs and economic and environmental indicators.

pub mod api;
pub mod config;
pub mod control;
pub mod error;
pub mod fixtures;
pub mod indicators;
pub mod occupancy;
pub mod report;
pub mod tariff;
pub mod thermal;
pub mod weather;

pub use config::Config;
pub use control::{ControlPolicy, ScenarioKind};
pub use error::{Error, Result};
pub use indicators::{EconParams, IndicatorReport};
pub use occupancy::{build_profile, OccupancyProfile, OccupancyState};
pub use thermal::{simulate_year, BuildingParams, SimulationResult};
pub use weather::{synthesize_weather, WeatherSeries};
