//! Maps an LP solution vector back to dispatch trajectories and costs.

use serde::Serialize;

use super::{Direction, DispatchModel, Var};
use crate::error::{CoreError, Result};
use crate::scenario::Scenario;

/// Cost components over the whole horizon, €.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CostBreakdown {
    pub fuel: f64,
    pub emission: f64,
    pub shedding: f64,
    pub curtailment: f64,
    pub investment: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.fuel + self.emission + self.shedding + self.curtailment + self.investment
    }

    pub fn scaled(&self, f: f64) -> CostBreakdown {
        CostBreakdown {
            fuel: self.fuel * f,
            emission: self.emission * f,
            shedding: self.shedding * f,
            curtailment: self.curtailment * f,
            investment: self.investment * f,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantSchedule {
    /// Bus id; `None` for the placeholder plant of a no-P2H run.
    pub bus: Option<usize>,
    pub capacity_mw: f64,
    pub charge_mw: Vec<f64>,
    pub discharge_mw: Vec<f64>,
    pub soc_mwh: Vec<f64>,
}

/// All trajectories, indexed `[entity][t]` by scenario position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispatchSolution {
    pub generation_mw: Vec<Vec<f64>>,
    /// `[g][t][k]`
    pub segment_mw: Vec<Vec<Vec<f64>>>,
    pub shed_mw: Vec<Vec<f64>>,
    pub wind_mw: Vec<Vec<f64>>,
    pub curtail_mw: Vec<Vec<f64>>,
    pub angle_rad: Vec<Vec<f64>>,
    pub flow_forward_mw: Vec<Vec<f64>>,
    pub flow_reverse_mw: Vec<Vec<f64>>,
    pub plants: Vec<PlantSchedule>,
    pub costs: CostBreakdown,
    /// Value of the LP objective at the extracted point (offset included).
    pub objective: f64,
}

impl DispatchSolution {
    pub fn total_capacity_mw(&self) -> f64 {
        self.plants.iter().map(|p| p.capacity_mw).sum()
    }

    /// Hydrogen energy discharged over the horizon, MWh.
    pub fn hydrogen_mwh(&self, s: &Scenario) -> f64 {
        let tau = &s.profiles.step_hours;
        self.plants
            .iter()
            .map(|p| p.discharge_mw.iter().zip(tau).map(|(x, h)| x * h).sum::<f64>())
            .sum()
    }

    /// Available wind not injected, MWh over the horizon.
    pub fn curtailed_mwh(&self, s: &Scenario) -> f64 {
        let cap = s.wind_capacity_by_bus();
        let p = &s.profiles;
        let mut total = 0.0;
        for (b, w) in self.wind_mw.iter().enumerate() {
            for t in 0..w.len() {
                total += (p.wind_availability[t] * cap[b] - w[t]) * p.step_hours[t];
            }
        }
        total
    }

    /// Power-system CO₂ over the horizon, tonnes.
    pub fn co2_t(&self, s: &Scenario) -> f64 {
        let tau = &s.profiles.step_hours;
        s.generators
            .iter()
            .zip(&self.generation_mw)
            .map(|(g, p)| s.emission_rate(g) * p.iter().zip(tau).map(|(x, h)| x * h).sum::<f64>())
            .sum()
    }

    /// Total charging of all plants in step `t`, MW.
    pub fn charge_at(&self, t: usize) -> f64 {
        self.plants.iter().map(|p| p.charge_mw[t]).sum()
    }
}

pub fn extract(model: &DispatchModel, x: &[f64], s: &Scenario) -> Result<DispatchSolution> {
    let idx = &model.index;
    if x.len() != idx.len() {
        return Err(CoreError::Dimension {
            expected: idx.len(),
            got: x.len(),
        });
    }
    let h = idx.horizon();
    let v = |var: Var| x[idx.col(var)];
    let tau = &s.profiles.step_hours;
    let e = &s.economics;

    let mut costs = CostBreakdown::default();
    let mut generation = Vec::with_capacity(model.costs.len());
    let mut segments = Vec::with_capacity(model.costs.len());
    for (g, pw) in model.costs.iter().enumerate() {
        let mut gen_t = Vec::with_capacity(h);
        let mut seg_t = Vec::with_capacity(h);
        for t in 0..h {
            let fill: Vec<f64> = (0..pw.segments.len()).map(|k| v(Var::Segment { gen: g, seg: k, t })).collect();
            let p = pw.p_min_mw + fill.iter().sum::<f64>();
            costs.fuel += tau[t] * pw.cost_of_fill(&fill);
            costs.emission += tau[t] * e.emission_price_eur_per_mwh * p;
            gen_t.push(p);
            seg_t.push(fill);
        }
        generation.push(gen_t);
        segments.push(seg_t);
    }

    let nb = s.buses.len();
    let per_bus = |f: &dyn Fn(usize, usize) -> Var| -> Vec<Vec<f64>> {
        (0..nb).map(|b| (0..h).map(|t| v(f(b, t))).collect()).collect()
    };
    let shed = per_bus(&|bus, t| Var::Shed { bus, t });
    let curtail = per_bus(&|bus, t| Var::Curtail { bus, t });
    let wind = per_bus(&|bus, t| Var::Wind { bus, t });
    let angle = per_bus(&|bus, t| Var::Angle { bus, t });
    for b in 0..nb {
        for t in 0..h {
            costs.shedding += tau[t] * e.shed_price_eur_per_mwh * shed[b][t];
            costs.curtailment += tau[t] * e.curtailment_price_eur_per_mwh * curtail[b][t];
        }
    }
    let per_line = |dir: Direction| -> Vec<Vec<f64>> {
        (0..s.lines.len())
            .map(|line| (0..h).map(|t| v(Var::Flow { line, dir, t })).collect())
            .collect()
    };

    let plants: Vec<PlantSchedule> = model
        .plant_buses
        .iter()
        .enumerate()
        .map(|(plant, pb)| PlantSchedule {
            bus: pb.map(|b| s.buses[b].id),
            capacity_mw: v(Var::Capacity { plant }),
            charge_mw: (0..h).map(|t| v(Var::Charge { plant, t })).collect(),
            discharge_mw: (0..h).map(|t| v(Var::Discharge { plant, t })).collect(),
            soc_mwh: (0..h).map(|t| v(Var::Soc { plant, t })).collect(),
        })
        .collect();
    costs.investment = plants.iter().map(|p| p.capacity_mw).sum::<f64>() * model.capacity_cost_per_mw;

    Ok(DispatchSolution {
        generation_mw: generation,
        segment_mw: segments,
        shed_mw: shed,
        wind_mw: wind,
        curtail_mw: curtail,
        angle_rad: angle,
        flow_forward_mw: per_line(Direction::Forward),
        flow_reverse_mw: per_line(Direction::Reverse),
        plants,
        costs,
        objective: model.lp.objective_value(x),
    })
}
