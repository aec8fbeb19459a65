use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: missing column `{column}`")]
    MissingColumn { line: usize, column: String },
    #[error("line {line}: expected hour {expected}, found {found}")]
    NonMonotonicHours {
        line: usize,
        expected: usize,
        found: i64,
    },
    #[error("weather series must have 8760 hourly records, found {found}")]
    RecordCountNot8760 { found: usize },
    #[error("line {line}: cannot parse `{value}` as a number")]
    UnparsableNumber { line: usize, value: String },
    #[error("line {line}: {reason}")]
    InvalidValue { line: usize, reason: String },
    #[error("invalid climate preset `{name}`: {reason}")]
    InvalidPreset { name: String, reason: String },

    #[error("vacation windows overlap (winter starts day {winter}, summer starts day {summer}, {days} days each)")]
    OverlappingVacations {
        winter: usize,
        summer: usize,
        days: usize,
    },
    #[error("invalid occupancy settings: {0}")]
    InvalidOccupancy(String),

    #[error("heating setpoint {heat} °C must be below cooling setpoint {cool} °C")]
    InvalidSetpoints { heat: f64, cool: f64 },
    #[error("invalid building parameter `{field}`: {reason}")]
    InvalidBuilding { field: &'static str, reason: String },
    #[error("input length mismatch: weather has {weather} hours, occupancy has {occupancy}")]
    LengthMismatch { weather: usize, occupancy: usize },
    #[error("invalid control policy: {0}")]
    InvalidPolicy(String),

    #[error("consumption must be non-negative, got {0} kWh")]
    NegativeConsumption(f64),
    #[error("invalid tariff: {0}")]
    InvalidTariff(String),

    #[error("invalid economic parameters: {0}")]
    InvalidEcon(String),

    #[error("unknown {kind} `{name}`; valid values: {}", valid.join(", "))]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: Vec<String>,
    },
    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Input is well-formed but violates a domain rule.
    pub fn is_semantic(&self) -> bool {
        matches!(
            self,
            Error::InvalidPreset { .. }
                | Error::OverlappingVacations { .. }
                | Error::InvalidOccupancy(_)
                | Error::InvalidSetpoints { .. }
                | Error::InvalidBuilding { .. }
                | Error::InvalidPolicy(_)
                | Error::NegativeConsumption(_)
                | Error::InvalidTariff(_)
                | Error::InvalidEcon(_)
                | Error::LengthMismatch { .. }
        )
    }
}
