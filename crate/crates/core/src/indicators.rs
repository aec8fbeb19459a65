//! Homeowner benefit indicators: energy savings, payback, NPV, IRR,
//! additional disposable income and avoided emissions.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tariff::{annual_cost_saving, EnergyByCarrier, PriceBook};
use crate::thermal::SimulationResult;

/// Bracket for the IRR search, as fractions per year.
pub const IRR_LOWER: f64 = -0.99;
pub const IRR_UPPER: f64 = 1.0e4;
/// |NPV| at which the IRR search stops, €.
pub const IRR_NPV_TOLERANCE: f64 = 1.0e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct EconParams {
    pub discount_rate: f64,
    pub horizon_years: u32,
}

impl Default for EconParams {
    fn default() -> Self {
        Self {
            discount_rate: 0.05,
            horizon_years: 10,
        }
    }
}

impl EconParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.discount_rate.is_finite() && self.discount_rate > -1.0) {
            return Err(Error::InvalidEcon(format!(
                "discount_rate must be > -1, got {}",
                self.discount_rate
            )));
        }
        if self.horizon_years < 1 {
            return Err(Error::InvalidEcon("horizon_years must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EndUseSavings {
    pub heating_kwh: f64,
    pub cooling_kwh: f64,
    pub lighting_kwh: f64,
    pub total_kwh: f64,
}

impl EndUseSavings {
    pub fn new(heating_kwh: f64, cooling_kwh: f64, lighting_kwh: f64) -> Self {
        Self {
            heating_kwh,
            cooling_kwh,
            lighting_kwh,
            total_kwh: heating_kwh + cooling_kwh + lighting_kwh,
        }
    }

    /// Components with a separately stated total, for tabulated figures whose
    /// rounded parts do not add up exactly.
    pub fn with_total(heating_kwh: f64, cooling_kwh: f64, lighting_kwh: f64, total_kwh: f64) -> Self {
        Self {
            heating_kwh,
            cooling_kwh,
            lighting_kwh,
            total_kwh,
        }
    }

    pub fn by_carrier(&self) -> EnergyByCarrier {
        EnergyByCarrier::new(self.cooling_kwh + self.lighting_kwh, self.heating_kwh)
    }
}

pub fn carriers(result: &SimulationResult) -> EnergyByCarrier {
    EnergyByCarrier::new(result.electricity_kwh(), result.gas_kwh())
}

/// Reference minus scenario, per end use. Negative values are kept.
pub fn annual_energy_savings(e_ref: &SimulationResult, e_i: &SimulationResult) -> EndUseSavings {
    EndUseSavings::new(
        e_ref.heating_kwh - e_i.heating_kwh,
        e_ref.cooling_kwh - e_i.cooling_kwh,
        e_ref.lighting_kwh - e_i.lighting_kwh,
    )
}

/// Cumulated savings over the horizon with identical yearly savings.
pub fn lifetime_energy_savings(annual_kwh: f64, years: u32) -> f64 {
    (0..years).map(|_| annual_kwh).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema, thiserror::Error)]
#[serde(rename_all = "kebab-case")]
pub enum PaybackError {
    #[error("zero annual cost savings: the investment is never recouped")]
    ZeroSavings,
    #[error("negative annual cost savings: the investment never pays back")]
    NeverPaysBack,
}

pub fn payback_period(investment: f64, annual_saving: f64) -> Result<f64, PaybackError> {
    if annual_saving == 0.0 {
        Err(PaybackError::ZeroSavings)
    } else if annual_saving < 0.0 {
        Err(PaybackError::NeverPaysBack)
    } else {
        Ok(investment / annual_saving)
    }
}

/// Discounted sum of end-of-year flows; `flows[0]` lands at the end of year 1.
pub fn present_value(flows: &[f64], rate: f64) -> f64 {
    let growth = 1.0 + rate;
    let mut factor = 1.0;
    flows
        .iter()
        .map(|cf| {
            factor /= growth;
            cf * factor
        })
        .sum()
}

pub fn net_present_value(investment: f64, flows: &[f64], rate: f64) -> f64 {
    present_value(flows, rate) - investment
}

/// The social indicator: discounted savings with the investment assumed
/// to be covered by a subsidy.
pub fn additional_disposable_income(flows: &[f64], rate: f64) -> f64 {
    present_value(flows, rate)
}

/// Rate at which the NPV vanishes, or `None` when the NPV keeps one sign
/// over the whole search bracket.
pub fn internal_rate_of_return(investment: f64, flows: &[f64]) -> Option<f64> {
    if flows.iter().all(|&f| f == 0.0) {
        return None;
    }
    let npv = |r: f64| net_present_value(investment, flows, r);
    let (mut lo, mut hi) = (IRR_LOWER, IRR_UPPER);
    let (f_lo, f_hi) = (npv(lo), npv(hi));
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let f_mid = npv(mid);
        if f_mid.abs() < IRR_NPV_TOLERANCE || mid == lo || mid == hi {
            return Some(mid);
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum MassUnit {
    Kg,
    G,
    Mg,
}

impl MassUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            MassUnit::Kg => "kg",
            MassUnit::G => "g",
            MassUnit::Mg => "mg",
        }
    }

    pub fn to_kg(self, value: f64) -> f64 {
        match self {
            MassUnit::Kg => value,
            MassUnit::G => value * 1e-3,
            MassUnit::Mg => value * 1e-6,
        }
    }
}

/// Mass of one pollutant emitted per kWh of final energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EmissionFactor {
    pub key: String,
    pub name: String,
    pub unit: MassUnit,
    /// `unit` per kWh.
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EmissionFactorTable {
    pub factors: Vec<EmissionFactor>,
}

impl EmissionFactorTable {
    /// German electricity-mix factors (UBA, 2016).
    pub fn germany_2016() -> Self {
        let row = |key: &str, name: &str, unit, coefficient| EmissionFactor {
            key: key.into(),
            name: name.into(),
            unit,
            coefficient,
        };
        Self {
            factors: vec![
                row("so2", "Sulfur dioxide", MassUnit::G, 0.290),
                row("no2", "Nitrogen dioxide", MassUnit::G, 0.440),
                row("pm", "Particulate matter", MassUnit::G, 0.017),
                row("pm10", "PM10", MassUnit::G, 0.015),
                row("co", "Carbon monoxide", MassUnit::G, 0.230),
                row("co2", "CO2", MassUnit::Kg, 0.516),
                row("no", "NO", MassUnit::G, 0.013),
                row("ch4", "CH4 (methane)", MassUnit::G, 0.184),
                row("voc", "Volatile organic compounds", MassUnit::G, 0.017),
                row("hg", "Mercury", MassUnit::Mg, 0.010),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for f in &self.factors {
            if !(f.coefficient.is_finite() && f.coefficient >= 0.0) {
                return Err(Error::Config(format!(
                    "emission factor `{}` must be >= 0",
                    f.key
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&EmissionFactor> {
        self.factors.iter().find(|f| f.key == key)
    }
}

impl Default for EmissionFactorTable {
    fn default() -> Self {
        Self::germany_2016()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EmissionMass {
    pub key: String,
    pub unit: MassUnit,
    pub mass: f64,
}

/// Avoided mass per pollutant for `delta_kwh` of saved final energy, in each
/// factor's own unit. Negative savings give negative masses.
pub fn emission_savings(delta_kwh: f64, table: &EmissionFactorTable) -> Vec<EmissionMass> {
    table
        .factors
        .iter()
        .map(|f| EmissionMass {
            key: f.key.clone(),
            unit: f.unit,
            mass: f.coefficient * delta_kwh,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EmissionSaving {
    pub key: String,
    pub name: String,
    pub unit: MassUnit,
    pub coefficient_per_kwh: f64,
    pub annual: f64,
    pub lifetime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum PaybackStatus {
    Ok,
    ZeroSavings,
    NeverPaysBack,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IndicatorReport {
    pub delta_e_annual_kwh: f64,
    pub delta_e_lifetime_kwh: f64,
    pub delta_e_by_end_use_kwh: EndUseSavings,
    pub annual_cost_saving_eur: f64,
    pub investment_eur: f64,
    pub payback_years: Option<f64>,
    pub payback_status: PaybackStatus,
    pub npv_eur: f64,
    /// `None` when no rate zeroes the NPV.
    pub irr_per_year: Option<f64>,
    pub adi_eur: f64,
    pub emissions: Vec<EmissionSaving>,
    /// Zero cost savings: payback and IRR are undefined.
    pub degenerate: bool,
}

impl IndicatorReport {
    pub fn emission(&self, key: &str) -> Option<&EmissionSaving> {
        self.emissions.iter().find(|e| e.key == key)
    }

    /// Annual CO₂ savings in tonnes.
    pub fn co2_annual_t(&self) -> Option<f64> {
        self.emission("co2")
            .map(|e| e.unit.to_kg(e.annual) / 1000.0)
    }
}

/// Everything the report needs besides the two energy pictures.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportInputs<'a> {
    pub investment_eur: f64,
    pub book: &'a PriceBook,
    pub econ: EconParams,
    pub table: &'a EmissionFactorTable,
}

pub fn full_report(
    e_ref: &SimulationResult,
    e_i: &SimulationResult,
    inputs: &ReportInputs<'_>,
) -> Result<IndicatorReport> {
    let savings = annual_energy_savings(e_ref, e_i);
    build_report(savings, &carriers(e_ref), &carriers(e_i), inputs)
}

/// Report from annual savings alone. With no reference consumption the
/// savings are valued at the marginal price of a household that still fills
/// every low-price block after the retrofit.
pub fn report_from_savings(
    savings: EndUseSavings,
    reference: Option<EnergyByCarrier>,
    inputs: &ReportInputs<'_>,
) -> Result<IndicatorReport> {
    let saved = savings.by_carrier();
    let (reference, scenario) = match reference {
        Some(r) => {
            let s = EnergyByCarrier::new(
                r.electricity_kwh - saved.electricity_kwh,
                r.gas_kwh - saved.gas_kwh,
            );
            (r, s)
        }
        None => {
            let floor = |t: &crate::tariff::Tariff, s: f64| t.low_block_capacity() + (-s).max(0.0);
            let s = EnergyByCarrier::new(
                floor(&inputs.book.electricity, saved.electricity_kwh),
                floor(&inputs.book.gas, saved.gas_kwh),
            );
            let r = EnergyByCarrier::new(
                s.electricity_kwh + saved.electricity_kwh,
                s.gas_kwh + saved.gas_kwh,
            );
            (r, s)
        }
    };
    build_report(savings, &reference, &scenario, inputs)
}

fn build_report(
    savings: EndUseSavings,
    reference: &EnergyByCarrier,
    scenario: &EnergyByCarrier,
    inputs: &ReportInputs<'_>,
) -> Result<IndicatorReport> {
    inputs.econ.validate()?;
    inputs.table.validate()?;
    if !(inputs.investment_eur.is_finite() && inputs.investment_eur >= 0.0) {
        return Err(Error::InvalidEcon(format!(
            "investment must be >= 0, got {}",
            inputs.investment_eur
        )));
    }
    let years = inputs.econ.horizon_years;
    let rate = inputs.econ.discount_rate;
    let investment = inputs.investment_eur;

    let doc = annual_cost_saving(reference, scenario, inputs.book)?;
    let flows = vec![doc; years as usize];
    let (payback_years, payback_status) = match payback_period(investment, doc) {
        Ok(pb) => (Some(pb), PaybackStatus::Ok),
        Err(PaybackError::ZeroSavings) => (None, PaybackStatus::ZeroSavings),
        Err(PaybackError::NeverPaysBack) => (None, PaybackStatus::NeverPaysBack),
    };

    let annual = savings.total_kwh;
    let lifetime = lifetime_energy_savings(annual, years);
    let yearly = emission_savings(annual, inputs.table);
    let total = emission_savings(lifetime, inputs.table);
    let emissions = inputs
        .table
        .factors
        .iter()
        .zip(yearly.iter().zip(&total))
        .map(|(f, (a, l))| EmissionSaving {
            key: f.key.clone(),
            name: f.name.clone(),
            unit: f.unit,
            coefficient_per_kwh: f.coefficient,
            annual: a.mass,
            lifetime: l.mass,
        })
        .collect();

    Ok(IndicatorReport {
        delta_e_annual_kwh: annual,
        delta_e_lifetime_kwh: lifetime,
        delta_e_by_end_use_kwh: savings,
        annual_cost_saving_eur: doc,
        investment_eur: investment,
        payback_years,
        payback_status,
        npv_eur: net_present_value(investment, &flows, rate),
        irr_per_year: internal_rate_of_return(investment, &flows),
        adi_eur: additional_disposable_income(&flows, rate),
        emissions,
        degenerate: doc == 0.0,
    })
}
