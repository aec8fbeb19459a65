//! Energy prices: flat rates and increasing-block tariffs.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Electricity,
    Gas,
}

/// Annual consumption (or savings) per carrier, kWh.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EnergyByCarrier {
    pub electricity_kwh: f64,
    pub gas_kwh: f64,
}

impl EnergyByCarrier {
    pub fn new(electricity_kwh: f64, gas_kwh: f64) -> Self {
        Self {
            electricity_kwh,
            gas_kwh,
        }
    }

    pub fn get(&self, carrier: Carrier) -> f64 {
        match carrier {
            Carrier::Electricity => self.electricity_kwh,
            Carrier::Gas => self.gas_kwh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Tariff {
    Flat {
        /// €/kWh
        rate: f64,
    },
    Block {
        /// kWh per billing period charged at `low_rate`.
        threshold: f64,
        low_rate: f64,
        high_rate: f64,
        #[serde(default = "one")]
        periods_per_year: u32,
    },
}

fn one() -> u32 {
    1
}

impl Tariff {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| r.is_finite() && r >= 0.0;
        match *self {
            Tariff::Flat { rate } => {
                if !rate_ok(rate) {
                    return Err(Error::InvalidTariff(format!("rate must be >= 0, got {rate}")));
                }
            }
            Tariff::Block {
                threshold,
                low_rate,
                high_rate,
                periods_per_year,
            } => {
                if !rate_ok(low_rate) || !rate_ok(high_rate) {
                    return Err(Error::InvalidTariff("block rates must be >= 0".into()));
                }
                if low_rate > high_rate {
                    return Err(Error::InvalidTariff(format!(
                        "low_rate {low_rate} exceeds high_rate {high_rate}"
                    )));
                }
                if !(threshold.is_finite() && threshold > 0.0) {
                    return Err(Error::InvalidTariff("block threshold must be > 0".into()));
                }
                if periods_per_year == 0 {
                    return Err(Error::InvalidTariff("periods_per_year must be >= 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Annual cost of `kwh`, €. Block consumption is spread evenly over the
    /// billing periods.
    pub fn cost(&self, kwh: f64) -> Result<f64> {
        if kwh.is_nan() || kwh < 0.0 {
            return Err(Error::NegativeConsumption(kwh));
        }
        Ok(match *self {
            Tariff::Flat { rate } => rate * kwh,
            Tariff::Block {
                threshold,
                low_rate,
                high_rate,
                periods_per_year,
            } => {
                let n = periods_per_year as f64;
                let per = kwh / n;
                let low = per.min(threshold);
                n * (low * low_rate + (per - low) * high_rate)
            }
        })
    }

    /// Annual consumption that fills every low-price block (0 for flat rates).
    pub fn low_block_capacity(&self) -> f64 {
        match *self {
            Tariff::Flat { .. } => 0.0,
            Tariff::Block {
                threshold,
                periods_per_year,
                ..
            } => threshold * periods_per_year as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PriceBook {
    pub country: String,
    pub electricity: Tariff,
    pub gas: Tariff,
}

impl PriceBook {
    pub fn validate(&self) -> Result<()> {
        self.electricity.validate()?;
        self.gas.validate()
    }

    pub fn tariff(&self, carrier: Carrier) -> &Tariff {
        match carrier {
            Carrier::Electricity => &self.electricity,
            Carrier::Gas => &self.gas,
        }
    }
}

pub fn germany_2019() -> PriceBook {
    PriceBook {
        country: "Germany".into(),
        electricity: Tariff::Flat { rate: 0.3048 },
        gas: Tariff::Flat { rate: 0.0609 },
    }
}

/// Subsidised Algerian prices. The published gas threshold reads "1125 TWh";
/// it is taken as 1125 kWh per billing period.
pub fn algeria_2019() -> PriceBook {
    PriceBook {
        country: "Algeria".into(),
        electricity: Tariff::Block {
            threshold: 125.0,
            low_rate: 0.014,
            high_rate: 0.033,
            periods_per_year: 1,
        },
        gas: Tariff::Block {
            threshold: 1125.0,
            low_rate: 0.0012,
            high_rate: 0.0024,
            periods_per_year: 1,
        },
    }
}

pub fn annual_cost(consumption: &EnergyByCarrier, book: &PriceBook) -> Result<f64> {
    book.validate()?;
    Ok(book.electricity.cost(consumption.electricity_kwh)? + book.gas.cost(consumption.gas_kwh)?)
}

/// Cost difference; negative when the scenario costs more.
pub fn annual_cost_saving(
    baseline: &EnergyByCarrier,
    scenario: &EnergyByCarrier,
    book: &PriceBook,
) -> Result<f64> {
    Ok(annual_cost(baseline, book)? - annual_cost(scenario, book)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn algeria_elec_annual() -> Tariff {
        algeria_2019().electricity
    }

    #[test]
    fn germany_flat() {
        let c = annual_cost(&EnergyByCarrier::new(1000.0, 0.0), &germany_2019()).unwrap();
        assert_abs_diff_eq!(c, 304.80, epsilon = 1e-9);
    }

    #[test]
    fn block_examples() {
        let t = algeria_elec_annual();
        assert_abs_diff_eq!(t.cost(100.0).unwrap(), 1.40, epsilon = 1e-12);
        assert_abs_diff_eq!(t.cost(1125.0).unwrap(), 34.75, epsilon = 1e-12);
        assert_eq!(t.cost(0.0).unwrap(), 0.0);
    }

    #[test]
    fn quarterly_blocks_split_consumption() {
        let t = Tariff::Block {
            threshold: 125.0,
            low_rate: 0.014,
            high_rate: 0.033,
            periods_per_year: 4,
        };
        // 250 kWh per quarter: 125 low + 125 high, four times
        assert_abs_diff_eq!(t.cost(1000.0).unwrap(), 4.0 * (1.75 + 4.125), epsilon = 1e-12);
    }

    #[test]
    fn saving_examples() {
        let de = germany_2019();
        let base = EnergyByCarrier::new(10_000.0, 20_000.0);
        let scen = EnergyByCarrier::new(10_000.0 - 2689.0, 20_000.0 - 7403.0);
        assert_abs_diff_eq!(
            annual_cost_saving(&base, &scen, &de).unwrap(),
            2689.0 * 0.3048 + 7403.0 * 0.0609,
            epsilon = 1e-9
        );
        let dz = algeria_2019();
        let base = EnergyByCarrier::new(9000.0, 15_000.0);
        let scen = EnergyByCarrier::new(9000.0 - 3243.0, 15_000.0 - 3281.0);
        assert_abs_diff_eq!(
            annual_cost_saving(&base, &scen, &dz).unwrap(),
            3243.0 * 0.033 + 3281.0 * 0.0024,
            epsilon = 1e-9
        );
        assert_eq!(annual_cost_saving(&base, &base, &dz).unwrap(), 0.0);
    }

    #[test]
    fn negative_consumption_rejected() {
        assert!(matches!(
            annual_cost(&EnergyByCarrier::new(-1.0, 0.0), &germany_2019()),
            Err(Error::NegativeConsumption(_))
        ));
    }

    #[test]
    fn invalid_tariffs() {
        assert!(Tariff::Flat { rate: -0.1 }.validate().is_err());
        assert!(Tariff::Block {
            threshold: 10.0,
            low_rate: 0.05,
            high_rate: 0.01,
            periods_per_year: 1
        }
        .validate()
        .is_err());
        assert!(Tariff::Block {
            threshold: 0.0,
            low_rate: 0.01,
            high_rate: 0.05,
            periods_per_year: 1
        }
        .validate()
        .is_err());
    }

    #[test]
    fn serde_shape() {
        let json = serde_json::to_value(algeria_2019()).unwrap();
        assert_eq!(json["electricity"]["block"]["threshold"], 125.0);
        let back: PriceBook = serde_json::from_value(json).unwrap();
        assert_eq!(back, algeria_2019());
    }

    proptest! {
        #[test]
        fn cost_monotone(a in 0.0f64..50_000.0, b in 0.0f64..50_000.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            for t in [algeria_2019().electricity, algeria_2019().gas, germany_2019().electricity] {
                prop_assert!(t.cost(lo).unwrap() <= t.cost(hi).unwrap());
            }
        }

        #[test]
        fn flat_is_linear(a in 0.0f64..1e5, b in 0.0f64..1e5) {
            let t = germany_2019().gas;
            let lhs = t.cost(a + b).unwrap();
            let rhs = t.cost(a).unwrap() + t.cost(b).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
        }
    }
}
