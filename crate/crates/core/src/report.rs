//! Text renderings: CSV files, the city comparison table and the
//! published-case comparison.
//!
//! Fixed decimals everywhere: 2 for €, 0 for kWh, 3 for rates, years and masses.

use std::fmt::Write as _;

use serde::Serialize;

use crate::api::{run_simulation, SimulateRequest, SimulateResponse, ApiError};
use crate::config::Config;
use crate::control::{investment_eur, ScenarioKind};
use crate::fixtures::{FixtureComparison, PUBLISHED_CASES};
use crate::indicators::{full_report, report_from_savings, IndicatorReport, ReportInputs};
use crate::thermal::SimulationResult;

pub fn eur(v: f64) -> String {
    format!("{v:.2}")
}

pub fn kwh(v: f64) -> String {
    // avoid "-0"
    let s = format!("{v:.0}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub fn rate(v: f64) -> String {
    format!("{v:.3}")
}

fn opt(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub const REPORT_CSV_HEADER: &str =
    "row,name,unit,annual,lifetime,annual_cost_saving_eur,payback_years,npv_eur,irr_per_year,adi_eur";

/// One summary row (energy and finance) followed by one row per pollutant.
pub fn report_csv(report: &IndicatorReport) -> String {
    let mut out = String::new();
    out.push_str(REPORT_CSV_HEADER);
    out.push('\n');
    let _ = writeln!(
        out,
        "summary,energy,kWh,{},{},{},{},{},{},{}",
        kwh(report.delta_e_annual_kwh),
        kwh(report.delta_e_lifetime_kwh),
        eur(report.annual_cost_saving_eur),
        opt(report.payback_years, rate),
        eur(report.npv_eur),
        opt(report.irr_per_year, rate),
        eur(report.adi_eur),
    );
    for e in &report.emissions {
        let _ = writeln!(
            out,
            "emission,{},{},{},{},,,,,",
            e.key,
            e.unit.as_str(),
            rate(e.annual),
            rate(e.lifetime)
        );
    }
    out
}

pub const SIMULATION_CSV_HEADER: &str =
    "weather,scenario,heating_kwh,cooling_kwh,lighting_kwh,electricity_kwh,gas_kwh,total_kwh";

pub fn simulation_csv(responses: &[SimulateResponse]) -> String {
    let mut out = String::new();
    out.push_str(SIMULATION_CSV_HEADER);
    out.push('\n');
    for r in responses {
        let s = &r.result;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.config.weather,
            r.config.scenario,
            kwh(s.heating_kwh),
            kwh(s.cooling_kwh),
            kwh(s.lighting_kwh),
            kwh(s.electricity_kwh),
            kwh(s.gas_kwh),
            kwh(s.total_kwh),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub city: String,
    pub scenario: ScenarioKind,
    pub indicator: String,
    pub value: Option<f64>,
    pub unit: &'static str,
}

pub const COMPARE_CSV_HEADER: &str = "city,scenario,indicator,value,unit";

fn format_value(v: f64, unit: &str) -> String {
    match unit {
        "EUR" | "EUR/a" => eur(v),
        "kWh" | "kWh/a" => kwh(v),
        _ => rate(v),
    }
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::new();
    out.push_str(COMPARE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let value = r
            .value
            .map(|v| format_value(v, r.unit))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.city, r.scenario, r.indicator, value, r.unit
        );
    }
    out
}

/// Long-format rows for one report.
pub fn indicator_rows(city: &str, scenario: ScenarioKind, report: &IndicatorReport) -> Vec<CompareRow> {
    let mut rows = Vec::new();
    let mut push = |indicator: &str, value: Option<f64>, unit: &'static str| {
        rows.push(CompareRow {
            city: city.to_string(),
            scenario,
            indicator: indicator.to_string(),
            value,
            unit,
        })
    };
    let s = &report.delta_e_by_end_use_kwh;
    push("delta_e_heating", Some(s.heating_kwh), "kWh/a");
    push("delta_e_cooling", Some(s.cooling_kwh), "kWh/a");
    push("delta_e_lighting", Some(s.lighting_kwh), "kWh/a");
    push("delta_e_annual", Some(report.delta_e_annual_kwh), "kWh/a");
    push("delta_e_lifetime", Some(report.delta_e_lifetime_kwh), "kWh");
    push("annual_cost_saving", Some(report.annual_cost_saving_eur), "EUR/a");
    push("investment", Some(report.investment_eur), "EUR");
    push("payback", report.payback_years, "a");
    push("npv", Some(report.npv_eur), "EUR");
    push("irr", report.irr_per_year, "1/a");
    push("adi", Some(report.adi_eur), "EUR");
    push("co2_annual", report.co2_annual_t(), "t/a");
    for e in &report.emissions {
        let unit: &'static str = match e.unit {
            crate::indicators::MassUnit::Kg => "kg/a",
            crate::indicators::MassUnit::G => "g/a",
            crate::indicators::MassUnit::Mg => "mg/a",
        };
        push(&format!("emission_{}", e.key), Some(e.annual), unit);
    }
    rows
}

/// Simulated annual consumption per end use.
pub fn consumption_rows(city: &str, scenario: ScenarioKind, result: &SimulationResult) -> Vec<CompareRow> {
    [
        ("consumption_heating", result.heating_kwh),
        ("consumption_cooling", result.cooling_kwh),
        ("consumption_lighting", result.lighting_kwh),
    ]
    .into_iter()
    .map(|(indicator, v)| CompareRow {
        city: city.to_string(),
        scenario,
        indicator: indicator.to_string(),
        value: Some(v),
        unit: "kWh/a",
    })
    .collect()
}

/// Simulates every scenario for each city (in parallel) and reports each
/// against that city's baseline.
pub fn compare_simulated(config: &Config, cities: &[String]) -> Result<Vec<CompareRow>, ApiError> {
    let mut jobs = Vec::new();
    for name in cities {
        let city = config
            .city(name)
            .map_err(|e| ApiError::bad_request(Some("city".to_string()), e.to_string()))?;
        for kind in ScenarioKind::ALL {
            jobs.push((name.clone(), city.clone(), kind));
        }
    }
    let results: Vec<Result<SimulationResult, ApiError>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(_, city, kind)| {
                s.spawn(move || {
                    let req = SimulateRequest {
                        preset: Some(city.weather.clone()),
                        scenario: kind.as_str().to_string(),
                        ..Default::default()
                    };
                    run_simulation(config, &req, false).map(|r| r.result)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });

    let mut rows = Vec::new();
    for (chunk, res) in jobs.chunks(3).zip(results.chunks(3)) {
        let (name, city, _) = &chunk[0];
        let book = config
            .price_book(&city.price_book)
            .map_err(|e| ApiError::bad_request(Some("price_book".to_string()), e.to_string()))?;
        let baseline = res[0].clone()?;
        for ((_, _, kind), r) in chunk.iter().zip(res) {
            let r = r.clone()?;
            rows.extend(consumption_rows(name, *kind, &r));
            let inputs = ReportInputs {
                investment_eur: investment_eur(*kind),
                book,
                econ: config.econ,
                table: &config.emission_factors,
            };
            let report = full_report(&baseline, &r, &inputs)
                .map_err(|e| ApiError::unprocessable(None, e.to_string()))?;
            rows.extend(indicator_rows(name, *kind, &report));
        }
    }
    Ok(rows)
}

/// Indicator rows for the published savings of both cities.
pub fn compare_published_rows(config: &Config) -> Result<Vec<CompareRow>, ApiError> {
    let mut rows = Vec::new();
    for case in PUBLISHED_CASES {
        let city = config
            .city(case.city)
            .map_err(|e| ApiError::bad_request(Some("city".to_string()), e.to_string()))?;
        let book = config
            .price_book(&city.price_book)
            .map_err(|e| ApiError::bad_request(Some("price_book".to_string()), e.to_string()))?;
        let inputs = ReportInputs {
            investment_eur: investment_eur(case.scenario),
            book,
            econ: config.econ,
            table: &config.emission_factors,
        };
        let report = report_from_savings(case.savings(), None, &inputs)
            .map_err(|e| ApiError::unprocessable(None, e.to_string()))?;
        rows.extend(indicator_rows(case.city, case.scenario, &report));
    }
    Ok(rows)
}

/// Human-readable table of computed indicators against the published ones.
pub fn fixtures_table(rows: &[FixtureComparison]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<9} {:>9} {:>9} {:>8} {:>8} {:>10} {:>10} {:>8} {:>8} {:>7}",
        "city", "scenario", "PB [a]", "pub PB", "dE_T MWh", "pub", "NPV EUR", "pub NPV", "IRR %", "pub IRR", "CO2 t/a"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<10} {:<9} {:>9} {:>9} {:>8.1} {:>8.0} {:>10} {:>10.0} {:>8} {:>8.0} {:>7}",
            r.city,
            r.scenario.as_str(),
            opt(r.payback_years, rate),
            rate(r.published_payback_years),
            r.lifetime_mwh,
            r.published_lifetime_mwh,
            eur(r.npv_eur),
            r.published_npv_eur,
            r.irr_percent.map(|v| format!("{v:.1}")).unwrap_or_default(),
            r.published_irr_percent,
            opt(r.co2_annual_t, rate),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::compare_published;

    #[test]
    fn number_formats() {
        assert_eq!(eur(1270.449), "1270.45");
        assert_eq!(kwh(6522.6), "6523");
        assert_eq!(kwh(-0.2), "0");
        assert_eq!(rate(0.21168), "0.212");
    }

    #[test]
    fn fixtures_table_has_four_rows() {
        let rows = compare_published(&Config::default()).unwrap();
        let t = fixtures_table(&rows);
        assert_eq!(t.lines().count(), 5);
        assert!(t.contains("stuttgart"));
    }

    #[test]
    fn published_compare_rows() {
        let rows = compare_published_rows(&Config::default()).unwrap();
        let adi = rows
            .iter()
            .find(|r| r.city == "algiers" && r.scenario == ScenarioKind::LowCost && r.indicator == "adi")
            .unwrap();
        assert!((adi.value.unwrap() - 887.22).abs() < 0.05);
        let co2 = rows
            .iter()
            .find(|r| r.city == "stuttgart" && r.scenario == ScenarioKind::Extended && r.indicator == "co2_annual")
            .unwrap();
        assert!((co2.value.unwrap() - 7.34).abs() < 0.005);
        let csv = compare_csv(&rows);
        assert!(csv.starts_with(COMPARE_CSV_HEADER));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }

    #[test]
    fn report_csv_shape() {
        let rows = compare_published(&Config::default()).unwrap();
        let csv = report_csv(&rows[0].report);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 1 + 10);
        assert!(lines[1].starts_with("summary,energy,kWh,6523,65230,"));
        assert!(lines.iter().all(|l| l.split(',').count() == 10));
    }
}
