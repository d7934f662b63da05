//! Flight-route arithmetic: daily jet-fuel burn, passenger CO₂, the hydrogen
//! that would replace the fuel, the electricity needed to make it, and the
//! equivalent jet-fuel price per MWh of hydrogen energy.
//!
//! Units are fixed: kg, tonnes, MWh and €/MWh.

use serde::{Deserialize, Serialize};

/// Lower heating value of jet fuel, MJ/kg.
pub const FHV_JET_MJ_PER_KG: f64 = 43.1;
/// Lower heating value of liquid hydrogen, MJ/kg.
pub const FHV_H2_MJ_PER_KG: f64 = 120.0;
/// Electricity needed per kg of hydrogen by electrolysis, kWh/kg.
pub const ELECTROLYSIS_KWH_PER_KG: f64 = 55.0;
/// Rounded hydrogen-to-jet heating value ratio used in paper mode.
pub const PAPER_HEATING_RATIO: f64 = 2.8;

const ROUTES_CSV: &str = include_str!("../data/routes.csv");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AviationError {
    #[error("invalid route parameter {field}: {value}")]
    InvalidRoute { field: &'static str, value: f64 },
    #[error("invalid fuel price {field}: {value}")]
    InvalidPrice { field: &'static str, value: f64 },
    #[error("daily hydrogen energy is zero, equivalent fuel price is undefined")]
    ZeroHydrogenDemand,
    #[error("unknown route {code:?}; known routes: {}", known.join(", "))]
    UnknownRoute { code: String, known: Vec<String> },
    #[error("route dataset: {0}")]
    Dataset(String),
}

/// How jet-fuel mass is converted into hydrogen mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConversionMode {
    /// Divide by the rounded heating-value ratio 2.8 and round flights per day up.
    #[default]
    Paper,
    /// Use `fhv_jet / fhv_h2` and fractional flights per day.
    Exact,
}

impl ConversionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConversionMode::Paper => "paper",
            ConversionMode::Exact => "exact",
        }
    }
}

impl std::str::FromStr for ConversionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(ConversionMode::Paper),
            "exact" => Ok(ConversionMode::Exact),
            other => Err(format!("unknown conversion mode {other:?} (paper|exact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteSpec {
    pub flights_per_day: f64,
    pub fuel_burn_per_journey_kg: f64,
    pub seats_per_aircraft: f64,
    pub co2_per_pax_leg_kg: f64,
    pub fhv_jet_mj_per_kg: f64,
    pub fhv_h2_mj_per_kg: f64,
    pub electrolysis_kwh_per_kg: f64,
}

impl RouteSpec {
    /// Route with the standard heating values and electrolysis rate.
    pub fn new(flights_per_day: f64, fuel_burn_per_journey_kg: f64, seats: f64, co2_per_pax_leg_kg: f64) -> Self {
        RouteSpec {
            flights_per_day,
            fuel_burn_per_journey_kg,
            seats_per_aircraft: seats,
            co2_per_pax_leg_kg,
            fhv_jet_mj_per_kg: FHV_JET_MJ_PER_KG,
            fhv_h2_mj_per_kg: FHV_H2_MJ_PER_KG,
            electrolysis_kwh_per_kg: ELECTROLYSIS_KWH_PER_KG,
        }
    }

    /// Zero flights are accepted so that a route can be switched off.
    pub fn validate(&self) -> Result<(), AviationError> {
        let positive = [
            ("fuel_burn_per_journey_kg", self.fuel_burn_per_journey_kg),
            ("seats_per_aircraft", self.seats_per_aircraft),
            ("co2_per_pax_leg_kg", self.co2_per_pax_leg_kg),
            ("fhv_jet_mj_per_kg", self.fhv_jet_mj_per_kg),
            ("fhv_h2_mj_per_kg", self.fhv_h2_mj_per_kg),
            ("electrolysis_kwh_per_kg", self.electrolysis_kwh_per_kg),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(AviationError::InvalidRoute { field, value });
            }
        }
        if !(self.flights_per_day.is_finite() && self.flights_per_day >= 0.0) {
            return Err(AviationError::InvalidRoute {
                field: "flights_per_day",
                value: self.flights_per_day,
            });
        }
        if self.fhv_h2_mj_per_kg <= self.fhv_jet_mj_per_kg {
            return Err(AviationError::InvalidRoute {
                field: "fhv_h2_mj_per_kg",
                value: self.fhv_h2_mj_per_kg,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelPlan {
    pub daily_jet_fuel_kg: f64,
    pub daily_co2_t: f64,
    pub daily_h2_kg: f64,
    pub daily_h2_mwh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelPriceInputs {
    pub jet_fuel_eur_per_kg: f64,
    pub carbon_offset_eur_per_kg: f64,
}

/// Daily jet fuel burnt on the route, kg/day.
pub fn daily_fuel_burn(route: &RouteSpec) -> f64 {
    route.flights_per_day * route.fuel_burn_per_journey_kg
}

/// Daily passenger CO₂ on the route, tonnes/day, assuming full aircraft.
pub fn daily_co2(route: &RouteSpec) -> f64 {
    route.co2_per_pax_leg_kg * route.seats_per_aircraft * route.flights_per_day / 1000.0
}

/// Hydrogen mass with the same heating value as `jet_fuel_kg`.
pub fn hydrogen_mass(jet_fuel_kg: f64, route: &RouteSpec, mode: ConversionMode) -> f64 {
    match mode {
        ConversionMode::Paper => jet_fuel_kg / PAPER_HEATING_RATIO,
        ConversionMode::Exact => jet_fuel_kg * route.fhv_jet_mj_per_kg / route.fhv_h2_mj_per_kg,
    }
}

/// Electricity to produce `h2_kg` of hydrogen, MWh.
pub fn electrolysis_energy(h2_kg: f64, kwh_per_kg: f64) -> f64 {
    h2_kg * kwh_per_kg / 1000.0
}

pub fn hydrogen_equivalent(route: &RouteSpec, mode: ConversionMode) -> Result<FuelPlan, AviationError> {
    route.validate()?;
    let jet = daily_fuel_burn(route);
    let h2 = hydrogen_mass(jet, route, mode);
    Ok(FuelPlan {
        daily_jet_fuel_kg: jet,
        daily_co2_t: daily_co2(route),
        daily_h2_kg: h2,
        daily_h2_mwh: electrolysis_energy(h2, route.electrolysis_kwh_per_kg),
    })
}

/// Price of the replaced jet fuel (plus offsets) per MWh of hydrogen energy.
pub fn equivalent_jet_fuel_price(plan: &FuelPlan, prices: &FuelPriceInputs) -> Result<f64, AviationError> {
    for (field, value) in [
        ("jet_fuel_eur_per_kg", prices.jet_fuel_eur_per_kg),
        ("carbon_offset_eur_per_kg", prices.carbon_offset_eur_per_kg),
    ] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(AviationError::InvalidPrice { field, value });
        }
    }
    if !(plan.daily_h2_mwh > 0.0) {
        return Err(AviationError::ZeroHydrogenDemand);
    }
    Ok(plan.daily_jet_fuel_kg * (prices.jet_fuel_eur_per_kg + prices.carbon_offset_eur_per_kg) / plan.daily_h2_mwh)
}

/// One row of the bundled busiest-routes table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRecord {
    pub route: String,
    pub passengers_million: f64,
    pub distance_km: f64,
    pub flights_per_year: f64,
    pub co2_per_pax_leg_kg: f64,
    pub time_min: f64,
    pub avg_seats_per_aircraft: f64,
    pub fuel_per_journey_kg: f64,
    pub otp_pct: f64,
}

impl RouteRecord {
    /// Paper mode rounds daily flights up to a whole number, exact mode keeps the fraction.
    pub fn flights_per_day(&self, mode: ConversionMode) -> f64 {
        let daily = self.flights_per_year / 365.0;
        match mode {
            ConversionMode::Paper => daily.ceil(),
            ConversionMode::Exact => daily,
        }
    }

    pub fn to_spec(&self, mode: ConversionMode) -> RouteSpec {
        RouteSpec::new(
            self.flights_per_day(mode),
            self.fuel_per_journey_kg,
            self.avg_seats_per_aircraft,
            self.co2_per_pax_leg_kg,
        )
    }
}

pub fn parse_routes<R: std::io::Read>(reader: R) -> Result<Vec<RouteRecord>, AviationError> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(|e| AviationError::Dataset(e.to_string())))
        .collect()
}

/// The bundled table of the 20 busiest international routes.
pub fn bundled_routes() -> Vec<RouteRecord> {
    parse_routes(ROUTES_CSV.as_bytes()).expect("bundled route table parses")
}

/// Looks up a route code such as `DUB-LHR` (case-insensitive).
pub fn find_route(code: &str) -> Result<RouteRecord, AviationError> {
    let routes = bundled_routes();
    routes
        .iter()
        .find(|r| r.route.eq_ignore_ascii_case(code))
        .cloned()
        .ok_or_else(|| AviationError::UnknownRoute {
            code: code.to_string(),
            known: routes.iter().map(|r| r.route.clone()).collect(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dub_lhr() -> RouteSpec {
        RouteSpec::new(40.0, 2995.0, 165.0, 62.5)
    }

    #[test]
    fn fuel_burn_and_co2() {
        assert_eq!(daily_fuel_burn(&dub_lhr()), 119800.0);
        assert_eq!(daily_co2(&dub_lhr()), 412.5);
        let mut r = dub_lhr();
        r.flights_per_day = 80.0;
        assert_eq!(daily_co2(&r), 825.0);
        r.flights_per_day = 0.0;
        assert_eq!(daily_fuel_burn(&r), 0.0);
        assert_eq!(daily_co2(&r), 0.0);
        let h2_row = RouteSpec::new(1.0, 1070.0, 165.0, 62.5);
        assert_eq!(daily_fuel_burn(&h2_row), 1070.0);
    }

    #[test]
    fn hydrogen_conversion_modes() {
        let paper = hydrogen_equivalent(&dub_lhr(), ConversionMode::Paper).unwrap();
        assert!((paper.daily_h2_kg - 42785.714285714).abs() < 1e-6);
        let exact = hydrogen_equivalent(&dub_lhr(), ConversionMode::Exact).unwrap();
        assert!((exact.daily_h2_kg - 119800.0 * 43.1 / 120.0).abs() < 1e-9);
        assert!((exact.daily_h2_kg * 120.0 - exact.daily_jet_fuel_kg * 43.1).abs() < 1e-6);
        assert!((electrolysis_energy(42785.0, 55.0) - 2353.175).abs() < 1e-9);
    }

    #[test]
    fn zero_flights_give_an_empty_plan_and_no_price() {
        let mut r = dub_lhr();
        r.flights_per_day = 0.0;
        let plan = hydrogen_equivalent(&r, ConversionMode::Paper).unwrap();
        assert_eq!(plan, FuelPlan { daily_jet_fuel_kg: 0.0, daily_co2_t: 0.0, daily_h2_kg: 0.0, daily_h2_mwh: 0.0 });
        let prices = FuelPriceInputs { jet_fuel_eur_per_kg: 0.5, carbon_offset_eur_per_kg: 0.0 };
        assert_eq!(equivalent_jet_fuel_price(&plan, &prices), Err(AviationError::ZeroHydrogenDemand));
    }

    #[test]
    fn fuel_price_benchmark() {
        let plan = FuelPlan { daily_jet_fuel_kg: 119800.0, daily_co2_t: 412.5, daily_h2_kg: 42785.0, daily_h2_mwh: 2353.1 };
        let p = |cos| {
            equivalent_jet_fuel_price(&plan, &FuelPriceInputs { jet_fuel_eur_per_kg: 0.5, carbon_offset_eur_per_kg: cos }).unwrap()
        };
        assert!((p(0.0) - 25.456).abs() < 1e-3);
        assert!((p(0.36) - 43.784).abs() < 1e-3);
        assert!(p(0.2) < p(0.36));
        let free = FuelPriceInputs { jet_fuel_eur_per_kg: 0.0, carbon_offset_eur_per_kg: 0.0 };
        assert_eq!(equivalent_jet_fuel_price(&plan, &free).unwrap(), 0.0);
        let bad = FuelPriceInputs { jet_fuel_eur_per_kg: -1.0, carbon_offset_eur_per_kg: 0.0 };
        assert!(equivalent_jet_fuel_price(&plan, &bad).is_err());
    }

    #[test]
    fn invalid_routes_are_rejected() {
        let mut r = dub_lhr();
        r.fhv_h2_mj_per_kg = 40.0;
        assert!(r.validate().is_err());
        let mut r = dub_lhr();
        r.flights_per_day = -1.0;
        assert!(hydrogen_equivalent(&r, ConversionMode::Paper).is_err());
        let mut r = dub_lhr();
        r.fuel_burn_per_journey_kg = 0.0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn bundled_table_has_twenty_routes() {
        let routes = bundled_routes();
        assert_eq!(routes.len(), 20);
        let dub = find_route("dub-lhr").unwrap();
        assert_eq!(dub.flights_per_day(ConversionMode::Paper), 40.0);
        let kul = find_route("KUL-SIN").unwrap();
        assert_eq!(kul.fuel_per_journey_kg, 2766.3);
        assert!((kul.flights_per_day(ConversionMode::Exact) - 30537.0 / 365.0).abs() < 1e-12);
        match find_route("XXX-YYY") {
            Err(AviationError::UnknownRoute { known, .. }) => assert_eq!(known.len(), 20),
            other => panic!("{other:?}"),
        }
    }
}
