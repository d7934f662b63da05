//! Post-solve checks of an extracted dispatch against the model equations,
//! recomputed from the scenario data rather than from the LP rows.

use serde::Serialize;

use super::{CurtailmentMode, DispatchModel, DispatchSolution, Objective};
use crate::scenario::Scenario;

/// Largest violation of each constraint family (MW, MWh or €, zero is perfect).
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AuditReport {
    pub nodal_balance: f64,
    pub flow_equation: f64,
    pub line_limits: f64,
    pub generator_limits: f64,
    pub ramp: f64,
    pub soc_recursion: f64,
    pub soc_negative: f64,
    pub discharge_capacity: f64,
    pub h2_shortfall: f64,
    /// Largest `ratio - limit` over steps with a positive denominator.
    pub snsp_excess: f64,
    pub wind_closure: f64,
    /// `|sum of cost components - LP objective|`, min-cost models only.
    pub cost_decomposition: f64,
    /// Steps where a costlier segment is used while a cheaper one has room.
    pub greedy_fill_violations: usize,
}

impl AuditReport {
    /// Worst residual over all families except the cost identity.
    pub fn max_residual(&self) -> f64 {
        [
            self.nodal_balance,
            self.flow_equation,
            self.line_limits,
            self.generator_limits,
            self.ramp,
            self.soc_recursion,
            self.soc_negative,
            self.discharge_capacity,
            self.h2_shortfall,
            self.snsp_excess,
            self.wind_closure,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.cost_decomposition <= tol && self.greedy_fill_violations == 0
    }
}

fn worse(acc: &mut f64, v: f64) {
    if v > *acc {
        *acc = v;
    }
}

pub fn audit(model: &DispatchModel, sol: &DispatchSolution, s: &Scenario) -> AuditReport {
    let mut r = AuditReport::default();
    let h = model.index.horizon();
    let tau = &s.profiles.step_hours;
    let p = &s.profiles;
    let nb = s.buses.len();
    let wind_cap = s.wind_capacity_by_bus();

    for t in 0..h {
        let mut net = vec![0.0; nb];
        for (g, gen) in s.generators.iter().enumerate() {
            net[s.bus_index(gen.bus).unwrap()] += sol.generation_mw[g][t];
        }
        for b in 0..nb {
            net[b] += sol.wind_mw[b][t] + sol.shed_mw[b][t] - s.demand(b, t);
        }
        for (plant, pb) in sol.plants.iter().zip(&model.plant_buses) {
            if let Some(b) = pb {
                net[*b] -= plant.charge_mw[t];
            }
        }
        if let Some(b) = model.interconnector_bus() {
            net[b] += p.import_mw[t] - p.export_mw[t];
        }
        for (l, line) in s.lines.iter().enumerate() {
            let from = s.bus_index(line.from_bus).unwrap();
            let to = s.bus_index(line.to_bus).unwrap();
            let fwd = sol.flow_forward_mw[l][t];
            let rev = sol.flow_reverse_mw[l][t];
            net[from] -= fwd;
            net[to] -= rev;
            let b_mw = s.base_mva * line.susceptance_pu;
            let diff = sol.angle_rad[from][t] - sol.angle_rad[to][t];
            worse(&mut r.flow_equation, (fwd - b_mw * diff).abs());
            worse(&mut r.flow_equation, (rev + b_mw * diff).abs());
            worse(&mut r.line_limits, fwd.abs() - line.thermal_limit_mw);
            worse(&mut r.line_limits, rev.abs() - line.thermal_limit_mw);
        }
        for v in net {
            worse(&mut r.nodal_balance, v.abs());
        }
    }

    for (g, gen) in s.generators.iter().enumerate() {
        let pg = &sol.generation_mw[g];
        for t in 0..h {
            worse(&mut r.generator_limits, gen.p_min_mw - pg[t]);
            worse(&mut r.generator_limits, pg[t] - gen.p_max_mw);
            if t > 0 {
                worse(&mut r.ramp, pg[t] - pg[t - 1] - gen.ramp_up_mw_per_h * tau[t]);
                worse(&mut r.ramp, pg[t - 1] - pg[t] - gen.ramp_down_mw_per_h * tau[t]);
            }
            let pw = &model.costs[g];
            let fill = &sol.segment_mw[g][t];
            let tol = 1e-6;
            for k in 1..fill.len() {
                let cheaper_has_room = (0..k).any(|j| {
                    fill[j] < pw.segments[j].width_mw - tol && pw.segments[j].slope < pw.segments[k].slope - 1e-12
                });
                if fill[k] > tol && cheaper_has_room {
                    r.greedy_fill_violations += 1;
                }
            }
        }
    }

    let eta = s.storage.charge_efficiency;
    for plant in &sol.plants {
        for t in 0..h {
            let prev = if t == 0 { s.storage.soc_initial_mwh } else { plant.soc_mwh[t - 1] };
            let expect = prev + (eta * plant.charge_mw[t] - plant.discharge_mw[t]) * tau[t];
            worse(&mut r.soc_recursion, (plant.soc_mwh[t] - expect).abs());
            worse(&mut r.soc_negative, -plant.soc_mwh[t]);
            worse(&mut r.discharge_capacity, plant.discharge_mw[t] - plant.capacity_mw);
        }
    }

    if model.options.objective == Objective::MinCost {
        for d in 0..s.num_days() {
            let delivered: f64 = s
                .day_steps(d)
                .map(|t| tau[t] * sol.plants.iter().map(|pl| pl.discharge_mw[t]).sum::<f64>())
                .sum();
            worse(&mut r.h2_shortfall, model.h2_demand_mwh_per_day - delivered);
        }
        r.cost_decomposition = (sol.costs.total() - sol.objective).abs();
    }

    for t in 0..h {
        let num: f64 = sol.wind_mw.iter().map(|w| w[t]).sum::<f64>() + p.import_mw[t];
        let load: f64 = (0..nb).map(|b| s.demand(b, t)).sum();
        let den = load + sol.charge_at(t) + p.export_mw[t];
        if den > 0.0 {
            worse(&mut r.snsp_excess, num / den - model.snsp_limit);
        }
        for b in 0..nb {
            let avail = p.wind_availability[t] * wind_cap[b];
            let gap = sol.wind_mw[b][t] + sol.curtail_mw[b][t] - avail;
            match model.options.curtailment {
                CurtailmentMode::Equality => worse(&mut r.wind_closure, gap.abs()),
                CurtailmentMode::Inequality => worse(&mut r.wind_closure, gap),
            }
            worse(&mut r.wind_closure, -sol.wind_mw[b][t]);
            worse(&mut r.wind_closure, -sol.curtail_mw[b][t]);
        }
    }
    r
}
