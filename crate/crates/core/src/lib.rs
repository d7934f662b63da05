//! Power-to-hydrogen plant sizing and scheduling inside a multi-period DC
//! optimal power flow.
//!
//! * [`aviation`]: route statistics to daily fuel, CO₂ and hydrogen demand.
//! * [`scenario`]: the problem instance and its TOML/CSV file format.
//! * [`linearize`]: piecewise-linear fuel costs.
//! * [`formulation`]: LP assembly, solution extraction and audits.
//! * [`analysis`]: KPIs and the location, SNSP and bus-pair sweeps.

pub mod analysis;
pub mod aviation;
pub mod error;
pub mod formulation;
pub mod linearize;
pub mod scenario;

pub use error::{CoreError, Result};
pub use scenario::Scenario;
