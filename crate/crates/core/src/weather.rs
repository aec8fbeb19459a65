//! Hourly weather for one simulated year: CSV ingestion and synthetic
//! climate presets.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HOURS_PER_YEAR: usize = 8760;
pub const DAYS_PER_YEAR: usize = 365;

/// Column header of the weather CSV contract.
pub const CSV_HEADER: &str = "hour,temp_c,ghi_wm2";

const NOISE_SIGMA_K: f64 = 1.5;
const MIN_CLOUDINESS: f64 = 0.3;
/// Hour of day at which the diurnal temperature wave peaks.
const DIURNAL_PEAK_HOUR: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct WeatherRecord {
    pub hour_of_year: u32,
    /// Outdoor dry-bulb temperature, °C.
    pub outdoor_temp: f64,
    /// Global horizontal irradiance, W/m².
    pub ghi: f64,
}

impl WeatherRecord {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !self.outdoor_temp.is_finite() || !(-60.0..=60.0).contains(&self.outdoor_temp) {
            return Err(format!(
                "temperature {} °C outside [-60, 60]",
                self.outdoor_temp
            ));
        }
        if !self.ghi.is_finite() || self.ghi < 0.0 {
            return Err(format!("irradiance {} W/m² is negative", self.ghi));
        }
        Ok(())
    }
}

/// Exactly 8760 gap-free hourly records.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherSeries {
    records: Vec<WeatherRecord>,
}

impl WeatherSeries {
    pub fn new(records: Vec<WeatherRecord>) -> Result<Self> {
        if records.len() != HOURS_PER_YEAR {
            return Err(Error::RecordCountNot8760 {
                found: records.len(),
            });
        }
        for (i, r) in records.iter().enumerate() {
            if r.hour_of_year as usize != i {
                return Err(Error::NonMonotonicHours {
                    line: i + 2,
                    expected: i,
                    found: r.hour_of_year as i64,
                });
            }
            r.validate().map_err(|reason| Error::InvalidValue {
                line: i + 2,
                reason,
            })?;
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[WeatherRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn mean_temp(&self) -> f64 {
        self.records.iter().map(|r| r.outdoor_temp).sum::<f64>() / self.len() as f64
    }

    /// Mean outdoor temperature per calendar month (non-leap year).
    pub fn monthly_mean_temps(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        let mut day = 0;
        for (m, &len) in MONTH_LENGTHS.iter().enumerate() {
            let slice = &self.records[day * 24..(day + len) * 24];
            out[m] = slice.iter().map(|r| r.outdoor_temp).sum::<f64>() / slice.len() as f64;
            day += len;
        }
        out
    }

    /// Daily mean temperatures, 365 values.
    pub fn daily_mean_temps(&self) -> Vec<f64> {
        self.records
            .chunks(24)
            .map(|d| d.iter().map(|r| r.outdoor_temp).sum::<f64>() / 24.0)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(HOURS_PER_YEAR * 24);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            // `{}` on f64 prints the shortest representation that round-trips.
            let _ = writeln!(out, "{},{},{}", r.hour_of_year, r.outdoor_temp, r.ghi);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

const MONTH_LENGTHS: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

pub fn load_weather_csv(path: &Path) -> Result<WeatherSeries> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    parse_weather_csv(&text)
}

/// Parses the `hour,temp_c,ghi_wm2` format. Line numbers in errors are
/// 1-based and count the header.
pub fn parse_weather_csv(text: &str) -> Result<WeatherSeries> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l,
            None => {
                return Err(Error::MissingColumn {
                    line: 1,
                    column: "hour".into(),
                })
            }
        }
    };
    let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    let idx = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::MissingColumn {
                line: 1,
                column: name.to_string(),
            })
    };
    let (i_hour, i_temp, i_ghi) = (idx("hour")?, idx("temp_c")?, idx("ghi_wm2")?);

    let mut records = Vec::with_capacity(HOURS_PER_YEAR);
    for (n, line) in lines {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |i: usize, name: &str| -> Result<f64> {
            let raw = fields.get(i).ok_or_else(|| Error::MissingColumn {
                line: line_no,
                column: name.to_string(),
            })?;
            raw.parse::<f64>().map_err(|_| Error::UnparsableNumber {
                line: line_no,
                value: raw.to_string(),
            })
        };
        let hour = get(i_hour, "hour")?;
        let expected = records.len();
        if hour.fract() != 0.0 || hour < 0.0 || hour as usize != expected {
            return Err(Error::NonMonotonicHours {
                line: line_no,
                expected,
                found: hour as i64,
            });
        }
        let rec = WeatherRecord {
            hour_of_year: expected as u32,
            outdoor_temp: get(i_temp, "temp_c")?,
            ghi: get(i_ghi, "ghi_wm2")?,
        };
        rec.validate()
            .map_err(|reason| Error::InvalidValue {
                line: line_no,
                reason,
            })?;
        records.push(rec);
    }
    WeatherSeries::new(records)
}

/// Parameters of the double-sinusoid synthetic climate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ClimatePreset {
    pub name: String,
    /// °C
    pub mean_annual_temp: f64,
    /// Half the peak-to-peak swing of daily means over the year, K.
    pub seasonal_amplitude: f64,
    /// Half the peak-to-peak swing within a day, K.
    pub diurnal_amplitude: f64,
    /// Clear-sky noon irradiance at the summer solstice, W/m².
    pub peak_ghi: f64,
    /// Day of year (0-based) of the coldest day.
    pub phase: f64,
    /// Half the annual swing of day length, hours.
    #[serde(default = "default_daylength_amplitude")]
    pub daylength_amplitude_h: f64,
    /// Gaussian hourly temperature noise. Off only for tests.
    #[serde(default = "default_true")]
    pub noise: bool,
}

fn default_daylength_amplitude() -> f64 {
    3.5
}

fn default_true() -> bool {
    true
}

impl ClimatePreset {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidPreset {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if !(self.seasonal_amplitude >= 0.0 && self.diurnal_amplitude >= 0.0) {
            return bad("amplitudes must be >= 0");
        }
        if self.peak_ghi.is_nan() || self.peak_ghi <= 0.0 {
            return bad("peak_ghi must be > 0");
        }
        if !(0.0..12.0).contains(&self.daylength_amplitude_h) {
            return bad("daylength_amplitude_h must be in [0, 12)");
        }
        if !self.mean_annual_temp.is_finite() || !self.phase.is_finite() {
            return bad("mean_annual_temp and phase must be finite");
        }
        Ok(())
    }
}

/// Seasonal + diurnal temperature sinusoids with seeded noise; clear-sky
/// irradiance half-sine between sunrise and sunset scaled by a seeded daily
/// cloudiness factor.
pub fn synthesize_weather(preset: &ClimatePreset, seed: u64) -> Result<WeatherSeries> {
    preset.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, NOISE_SIGMA_K).expect("valid sigma");
    let cloud = Uniform::new_inclusive(MIN_CLOUDINESS, 1.0);

    let mut records = Vec::with_capacity(HOURS_PER_YEAR);
    for day in 0..DAYS_PER_YEAR {
        let seasonal = -preset.seasonal_amplitude
            * (2.0 * PI * (day as f64 - preset.phase) / DAYS_PER_YEAR as f64).cos();
        // Solar season is tied to the solstices, not to the thermal lag.
        let solar_season = (2.0 * PI * (day as f64 - 80.0) / DAYS_PER_YEAR as f64).sin();
        let day_length = 12.0 + preset.daylength_amplitude_h * solar_season;
        let sunrise = 12.0 - day_length / 2.0;
        let noon_ghi = preset.peak_ghi * (0.6 + 0.4 * solar_season);
        let cloudiness = cloud.sample(&mut rng);

        for hour in 0..24 {
            let h = hour as f64;
            let diurnal =
                preset.diurnal_amplitude * (2.0 * PI * (h - DIURNAL_PEAK_HOUR) / 24.0).cos();
            let eps = if preset.noise {
                noise.sample(&mut rng)
            } else {
                0.0
            };
            // Irradiance evaluated at mid-hour.
            let x = (h + 0.5 - sunrise) / day_length;
            let ghi = if (0.0..=1.0).contains(&x) {
                noon_ghi * (PI * x).sin() * cloudiness
            } else {
                0.0
            };
            records.push(WeatherRecord {
                hour_of_year: (day * 24 + hour) as u32,
                outdoor_temp: (preset.mean_annual_temp + seasonal + diurnal + eps)
                    .clamp(-60.0, 60.0),
                ghi: ghi.max(0.0),
            });
        }
    }
    WeatherSeries::new(records)
}
