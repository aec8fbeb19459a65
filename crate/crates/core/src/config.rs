//! The run configuration file (TOML) and its shipped defaults.

use std::collections::BTreeMap;
use std::path::Path;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::control::{ControlSettings, ScenarioKind};
use crate::error::{Error, Result};
use crate::indicators::{EconParams, EmissionFactorTable};
use crate::occupancy::OccupancyConfig;
use crate::tariff::PriceBook;
use crate::thermal::BuildingParams;
use crate::weather::ClimatePreset;

pub const DEFAULT_CONFIG_TOML: &str = include_str!("../config/default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct City {
    pub weather: String,
    pub price_book: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    #[serde(default)]
    pub building: BuildingParams,
    #[serde(default)]
    pub occupancy: OccupancyConfig,
    #[serde(default)]
    pub control: ControlSettings,
    #[serde(default)]
    pub econ: EconParams,
    #[serde(default)]
    pub weather_presets: BTreeMap<String, ClimatePreset>,
    #[serde(default)]
    pub price_books: BTreeMap<String, PriceBook>,
    #[serde(default)]
    pub cities: BTreeMap<String, City>,
    #[serde(default)]
    pub emission_factors: EmissionFactorTable,
}

/// A user file: every section optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overlay {
    seed: Option<u64>,
    building: Option<BuildingParams>,
    occupancy: Option<OccupancyConfig>,
    control: Option<ControlSettings>,
    econ: Option<EconParams>,
    #[serde(default)]
    weather_presets: BTreeMap<String, ClimatePreset>,
    #[serde(default)]
    price_books: BTreeMap<String, PriceBook>,
    #[serde(default)]
    cities: BTreeMap<String, City>,
    emission_factors: Option<EmissionFactorTable>,
}

impl Default for Config {
    fn default() -> Self {
        let cfg: Config =
            toml::from_str(DEFAULT_CONFIG_TOML).expect("shipped default config parses");
        cfg.validate().expect("shipped default config is valid");
        cfg
    }
}

impl Config {
    /// Shipped defaults overlaid with `text`. Sections replace their default
    /// counterpart wholesale; named presets are merged by name.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let overlay: Overlay = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Config::default();
        if let Some(seed) = overlay.seed {
            cfg.seed = seed;
        }
        if let Some(b) = overlay.building {
            cfg.building = b;
        }
        if let Some(o) = overlay.occupancy {
            cfg.occupancy = o;
        }
        if let Some(c) = overlay.control {
            cfg.control = c;
        }
        if let Some(e) = overlay.econ {
            cfg.econ = e;
        }
        if let Some(t) = overlay.emission_factors {
            cfg.emission_factors = t;
        }
        for (k, mut v) in overlay.weather_presets {
            v.name = k.clone();
            cfg.weather_presets.insert(k, v);
        }
        cfg.price_books.extend(overlay.price_books);
        cfg.cities.extend(overlay.cities);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.building.validate()?;
        self.occupancy.validate()?;
        for kind in ScenarioKind::ALL {
            crate::control::ControlPolicy::new(kind, &self.control)?;
        }
        self.econ.validate()?;
        self.emission_factors.validate()?;
        for p in self.weather_presets.values() {
            p.validate()?;
        }
        for b in self.price_books.values() {
            b.validate()?;
        }
        for (name, city) in &self.cities {
            self.weather_preset(&city.weather).map_err(|e| {
                Error::Config(format!("city `{name}`: {e}"))
            })?;
            self.price_book(&city.price_book).map_err(|e| {
                Error::Config(format!("city `{name}`: {e}"))
            })?;
        }
        Ok(())
    }

    pub fn weather_preset(&self, name: &str) -> Result<&ClimatePreset> {
        self.weather_presets
            .get(name)
            .ok_or_else(|| Error::UnknownName {
                kind: "weather preset",
                name: name.to_string(),
                valid: self.weather_presets.keys().cloned().collect(),
            })
    }

    pub fn price_book(&self, name: &str) -> Result<&PriceBook> {
        self.price_books
            .get(name)
            .ok_or_else(|| Error::UnknownName {
                kind: "price book",
                name: name.to_string(),
                valid: self.price_books.keys().cloned().collect(),
            })
    }

    pub fn city(&self, name: &str) -> Result<&City> {
        self.cities.get(name).ok_or_else(|| Error::UnknownName {
            kind: "city",
            name: name.to_string(),
            valid: self.cities.keys().cloned().collect(),
        })
    }

    /// City whose weather preset is `preset`, if any.
    pub fn city_for_weather(&self, preset: &str) -> Option<(&str, &City)> {
        self.cities
            .iter()
            .find(|(_, c)| c.weather == preset)
            .map(|(n, c)| (n.as_str(), c))
    }

    /// Seed for the occupancy generator, decorrelated from the weather seed.
    pub fn occupancy_seed(seed: u64) -> u64 {
        seed ^ 0x9E37_79B9_7F4A_7C15
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tariff::{algeria_2019, germany_2019};

    #[test]
    fn defaults_carry_published_prices() {
        let c = Config::default();
        assert_eq!(c.price_book("germany-2019").unwrap(), &germany_2019());
        assert_eq!(c.price_book("algeria-2019").unwrap(), &algeria_2019());
        assert_eq!(c.emission_factors, EmissionFactorTable::germany_2016());
        assert_eq!(c.econ, EconParams::default());
        assert_eq!(c.control, ControlSettings::default());
        assert_eq!(c.occupancy, OccupancyConfig::default());
        assert_eq!(c.building, BuildingParams::default());
        assert!(c.weather_preset("stuttgart-cfb").is_ok());
        assert!(c.weather_preset("algiers-csa").is_ok());
    }

    #[test]
    fn overlay_merges_presets_and_replaces_sections() {
        let c = Config::from_toml_str(
            r#"
seed = 7
[econ]
discount_rate = 0.0
[price_books.flat-test]
country = "Testland"
electricity = { flat = { rate = 0.2 } }
gas = { flat = { rate = 0.05 } }
"#,
        )
        .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.econ.discount_rate, 0.0);
        assert_eq!(c.econ.horizon_years, 10);
        assert_eq!(c.price_books.len(), 3);
    }

    #[test]
    fn bad_files_report_location() {
        let err = Config::from_toml_str("seed = \"x\"\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        let err = Config::from_toml_str("[econ]\nbogus = 1\n").unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        let err = Config::from_toml_str("[control]\nheat_setpoint = 30.0\n").unwrap_err();
        assert!(err.is_semantic());
        let err = Config::from_toml_str("[cities.x]\nweather = \"nowhere\"\nprice_book = \"germany-2019\"\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("nowhere"), "{err}");
    }
}
