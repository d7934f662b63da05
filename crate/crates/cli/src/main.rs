//! `p2h`: aviation arithmetic, dispatch runs, sensitivity sweeps and LP export.
//!
//! Exit codes: 0 success, 2 usage or data error, 3 infeasible model,
//! 4 numerical failure (unbounded, iteration limit or failed audit).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "p2h", version, about = "Power-to-hydrogen sizing inside a multi-period DC optimal power flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Daily fuel, CO2 and hydrogen demand of a flight route, with the fuel price benchmark.
    Aviation(AviationArgs),
    /// Solve one dispatch and write KPIs and trajectories.
    Dispatch(DispatchArgs),
    /// Repeated solves over P2H location, SNSP level or bus pairs.
    Sweep {
        #[command(subcommand)]
        kind: SweepCommand,
    },
    /// Write the dispatch LP in MPS format (plus a `.names` map).
    Export(ExportArgs),
}

#[derive(Args, Debug)]
pub struct AviationArgs {
    /// Route code from the bundled table, e.g. DUB-LHR.
    #[arg(long, conflicts_with_all = ["flights_per_day", "fuel_burn_kg"])]
    pub route: Option<String>,
    /// Print the bundled route table and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long, requires = "fuel_burn_kg")]
    pub flights_per_day: Option<f64>,
    /// Fuel burned per journey, kg.
    #[arg(long, requires = "flights_per_day")]
    pub fuel_burn_kg: Option<f64>,
    #[arg(long, default_value_t = 165.0)]
    pub seats: f64,
    /// CO2 per passenger per leg, kg.
    #[arg(long, default_value_t = 62.5)]
    pub co2_per_pax_kg: f64,
    /// paper: whole daily flights and the 2.8 heating-value ratio; exact: fractional flights and 43.1/120.
    #[arg(long, default_value = "paper")]
    pub mode: ModeArg,
    /// Jet fuel price, EUR/kg.
    #[arg(long, default_value_t = 0.5)]
    pub jet_fuel_price: f64,
    /// Carbon offset prices to tabulate, EUR/kg fuel.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.36])]
    pub offset: Vec<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Paper,
    Exact,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurtailmentArg {
    Equality,
    Inequality,
}

/// Scenario selection and model options shared by every model command.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Bundled scenario name (toy6, ireland35) or path to a scenario TOML file.
    #[arg(long, short)]
    pub scenario: String,
    /// Keep only the first STEPS steps (whole days).
    #[arg(long, value_name = "STEPS")]
    pub horizon: Option<usize>,
    /// Cost segments per generator.
    #[arg(long, default_value_t = p2h_core::formulation::DEFAULT_SEGMENTS)]
    pub segments: usize,
    /// Daily hydrogen demand, MWh/day (default: scenario value).
    #[arg(long)]
    pub h2_demand: Option<f64>,
    /// SNSP limit as a fraction (default: scenario value).
    #[arg(long)]
    pub snsp: Option<f64>,
    /// Also bound charging by the plant capacity.
    #[arg(long)]
    pub charge_limit: bool,
    #[arg(long, default_value = "equality")]
    pub curtailment: CurtailmentArg,
    /// Inject import minus export at this bus.
    #[arg(long, value_name = "BUS")]
    pub interconnector_bus: Option<usize>,
    /// Fix every plant's capacity, MW.
    #[arg(long, value_name = "MW")]
    pub fixed_capacity: Option<f64>,
    /// Flight route whose CO2 is reported as avoided when hydrogen is produced.
    #[arg(long, default_value = "DUB-LHR")]
    pub route: String,
}

#[derive(Args, Debug)]
pub struct DispatchArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// P2H bus (repeat for a two-plant run; default: buses flagged in the scenario).
    #[arg(long = "p2h-bus", value_name = "BUS", conflicts_with = "no_p2h")]
    pub p2h_bus: Vec<usize>,
    /// Run without any P2H plant.
    #[arg(long)]
    pub no_p2h: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepCommon {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Parallel solves (default: P2H_WORKERS, else all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Exit non-zero when any point fails to solve.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SweepCommand {
    /// One single-plant run per bus.
    Location {
        #[command(flatten)]
        common: SweepCommon,
        /// Buses as a list and/or ranges, e.g. `1..35` or `3,5,8..10` (default: all).
        #[arg(long)]
        buses: Option<String>,
    },
    /// One run per SNSP level.
    Snsp {
        #[command(flatten)]
        common: SweepCommon,
        /// `start:step:end` or a comma list.
        #[arg(long, default_value = "0.55:0.05:0.80")]
        levels: String,
        #[arg(long, default_value = "fixed-demand")]
        mode: SnspModeArg,
        /// Cost slack over the stage-one minimum in max-h2 mode.
        #[arg(long, default_value_t = p2h_core::analysis::DEFAULT_COST_SLACK)]
        cost_slack: f64,
    },
    /// One two-plant run per unordered pair of candidate buses.
    Pairs {
        #[command(flatten)]
        common: SweepCommon,
        /// Candidate buses, same syntax as `location --buses` (default: all).
        #[arg(long)]
        candidates: Option<String>,
        #[arg(long, default_value = "curtailment")]
        objective: PairObjectiveArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnspModeArg {
    FixedDemand,
    MaxH2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairObjectiveArg {
    Curtailment,
    Cost,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "p2h-bus", value_name = "BUS", conflicts_with = "no_p2h")]
    pub p2h_bus: Vec<usize>,
    #[arg(long)]
    pub no_p2h: bool,
    /// Output MPS file.
    #[arg(long, short)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Aviation(a) => commands::aviation(&a, &argv),
        Command::Dispatch(a) => commands::dispatch(&a, &argv),
        Command::Sweep { kind } => commands::sweep(&kind, &argv),
        Command::Export(a) => commands::export(&a, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
