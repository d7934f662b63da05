//! Run manifests, failure classification and table writers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use p2h_core::formulation::{DispatchModel, DispatchSolution};
use p2h_core::{CoreError, Scenario};
use p2h_lp::{LpSolution, Status};

/// Command failure mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Data(String),
    Infeasible(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Data(m) | Failure::Infeasible(m) | Failure::Numerical(m) => m,
        }
    }

    pub fn from_status(status: Status, context: &str) -> Failure {
        match status {
            Status::Infeasible => Failure::Infeasible(format!("{context}: model is infeasible")),
            other => Failure::Numerical(format!("{context}: solver stopped with status {other}")),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotOptimal(s) => Failure::from_status(s, "solve"),
            other => Failure::Data(other.to_string()),
        }
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

pub fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct ScenarioRecord {
    pub name: String,
    pub source: String,
    /// SHA-256 of the canonical TOML form of the scenario as solved.
    pub sha256: String,
    pub horizon_steps: usize,
}

impl ScenarioRecord {
    pub fn new(s: &Scenario, source: &str) -> CmdResult<ScenarioRecord> {
        let text = p2h_core::scenario::to_toml_string(s)?;
        Ok(ScenarioRecord {
            name: s.name.clone(),
            source: source.to_string(),
            sha256: sha256_hex(text.as_bytes()),
            horizon_steps: s.horizon(),
        })
    }
}

#[derive(Debug, Serialize, Default)]
pub struct SolverStats {
    pub status: String,
    pub iterations: usize,
    pub objective: f64,
    pub duality_gap: f64,
    pub max_primal_residual: f64,
    pub max_dual_residual: f64,
    pub columns: usize,
    pub rows: usize,
}

impl SolverStats {
    pub fn new(model: &DispatchModel, sol: &LpSolution) -> SolverStats {
        SolverStats {
            status: sol.status.as_str().to_string(),
            iterations: sol.iterations,
            objective: sol.objective,
            duality_gap: sol.duality_gap(),
            max_primal_residual: sol.max_primal_residual,
            max_dual_residual: sol.max_dual_residual,
            columns: model.lp.num_cols(),
            rows: model.lp.num_rows(),
        }
    }
}

/// Everything needed to repeat a run. Timings are the only field that varies
/// between identical runs.
#[derive(Debug, Serialize)]
pub struct Manifest<'a, O: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub argv: &'a [String],
    pub scenario: Option<ScenarioRecord>,
    pub options: O,
    pub outputs: Vec<String>,
    pub timings_ms: Vec<(String, f64)>,
    pub solver: Option<SolverStats>,
}

pub fn manifest<'a, O: Serialize>(command: &'a str, argv: &'a [String], options: O) -> Manifest<'a, O> {
    Manifest {
        tool: "p2h",
        version: env!("CARGO_PKG_VERSION"),
        command,
        argv,
        scenario: None,
        options,
        outputs: Vec::new(),
        timings_ms: Vec::new(),
        solver: None,
    }
}

pub struct OutDir {
    pub path: PathBuf,
    pub written: Vec<String>,
}

impl OutDir {
    pub fn create(path: &Path) -> CmdResult<OutDir> {
        fs::create_dir_all(path).map_err(|e| io_failure(path, e))?;
        Ok(OutDir {
            path: path.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CmdResult {
        let p = self.path.join(name);
        fs::write(&p, bytes).map_err(|e| io_failure(&p, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CmdResult {
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Data(e.to_string()))? + "\n";
        self.write(name, text.as_bytes())
    }

    pub fn write_manifest<O: Serialize>(&mut self, mut m: Manifest<'_, O>) -> CmdResult {
        m.outputs = self.written.clone();
        self.write_json("manifest.json", &m)
    }
}

fn table(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> CmdResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::Data(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| Failure::Data(e.to_string()))
}

fn num(v: f64) -> String {
    // normalise -0 so identical dispatches print identically
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

/// Generator outputs, one row per step, one column per generator.
pub fn generation_table(s: &Scenario, sol: &DispatchSolution) -> CmdResult<Vec<u8>> {
    let mut header = vec!["step".to_string(), "hours".to_string()];
    header.extend(s.generators.iter().map(|g| format!("g{}_mw", g.id)));
    let rows = (0..s.horizon()).map(|t| {
        let mut r = vec![(t + 1).to_string(), num(s.profiles.step_hours[t])];
        r.extend(sol.generation_mw.iter().map(|p| num(p[t])));
        r
    });
    table(&header, rows)
}

/// Per-bus, per-step quantities in long form.
pub fn bus_table(s: &Scenario, sol: &DispatchSolution) -> CmdResult<Vec<u8>> {
    let header: Vec<String> = ["step", "bus", "demand_mw", "wind_mw", "curtailed_mw", "shed_mw", "angle_rad"]
        .iter()
        .map(|h| h.to_string())
        .collect();
    let rows = (0..s.horizon()).flat_map(|t| {
        (0..s.buses.len()).map(move |b| {
            vec![
                (t + 1).to_string(),
                s.buses[b].id.to_string(),
                num(s.demand(b, t)),
                num(sol.wind_mw[b][t]),
                num(sol.curtail_mw[b][t]),
                num(sol.shed_mw[b][t]),
                num(sol.angle_rad[b][t]),
            ]
        })
    });
    table(&header, rows)
}

pub fn flow_table(s: &Scenario, sol: &DispatchSolution) -> CmdResult<Vec<u8>> {
    let header: Vec<String> = ["step", "line", "from_bus", "to_bus", "flow_mw", "limit_mw"]
        .iter()
        .map(|h| h.to_string())
        .collect();
    let rows = (0..s.horizon()).flat_map(|t| {
        s.lines.iter().enumerate().map(move |(l, line)| {
            vec![
                (t + 1).to_string(),
                (l + 1).to_string(),
                line.from_bus.to_string(),
                line.to_bus.to_string(),
                num(sol.flow_forward_mw[l][t]),
                num(line.thermal_limit_mw),
            ]
        })
    });
    table(&header, rows)
}

pub fn p2h_table(s: &Scenario, sol: &DispatchSolution) -> CmdResult<Vec<u8>> {
    let header: Vec<String> = ["step", "bus", "capacity_mw", "charge_mw", "discharge_mw", "soc_mwh"]
        .iter()
        .map(|h| h.to_string())
        .collect();
    let rows = (0..s.horizon()).flat_map(|t| {
        sol.plants.iter().filter(|p| p.bus.is_some()).map(move |p| {
            vec![
                (t + 1).to_string(),
                p.bus.unwrap().to_string(),
                num(p.capacity_mw),
                num(p.charge_mw[t]),
                num(p.discharge_mw[t]),
                num(p.soc_mwh[t]),
            ]
        })
    });
    table(&header, rows)
}
