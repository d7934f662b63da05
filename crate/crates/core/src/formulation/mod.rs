//! Multi-period DC optimal power flow with P2H plants, assembled as a sparse LP.
//!
//! Column families, in order: generator segments `(g, t, k)`, load shedding,
//! wind curtailment, wind output and bus angles `(b, t)`, directed line flows
//! `(l, dir, t)`, and per plant charge, discharge and state of charge `(p, t)`
//! followed by one capacity column per plant.
//!
//! Generator output is not a column: `P_g,t = p_min + sum_k seg_g,k,t`.

use serde::Serialize;

use p2h_lp::{ColId, LinearProgram, LpBuilder, LpSolution, RowSense, SolverOptions};

use crate::error::{CoreError, Result};
use crate::linearize::{linearize, PiecewiseCost};
use crate::scenario::Scenario;

pub mod audit;
pub mod extract;

pub use audit::{audit, AuditReport};
pub use extract::{extract, CostBreakdown, DispatchSolution, PlantSchedule};

pub const DEFAULT_SEGMENTS: usize = 10;

/// Where P2H plants are connected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Siting {
    /// No plant: charge, discharge and capacity are held at zero.
    None,
    /// The buses flagged `has_p2h` in the scenario (at most two).
    FromScenario,
    /// One or two explicit bus ids, each with its own plant.
    Buses(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurtailmentMode {
    /// Curtailment is exactly the unused available wind.
    #[default]
    Equality,
    /// Curtailment is only bounded by the unused available wind.
    Inequality,
}

impl std::str::FromStr for CurtailmentMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "equality" => Ok(CurtailmentMode::Equality),
            "inequality" => Ok(CurtailmentMode::Inequality),
            o => Err(format!("unknown curtailment mode {o:?} (equality|inequality)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Minimize total operating plus investment cost with the daily hydrogen demand enforced.
    #[default]
    MinCost,
    /// Maximize hydrogen discharged over the horizon, daily demand rows dropped,
    /// total cost capped at `cost_cap` (€ over the horizon).
    MaxHydrogen { cost_cap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulationOptions {
    pub siting: Siting,
    /// Cost segments per generator.
    pub segments: usize,
    /// Fix every plant's capacity to this value, MW.
    pub fixed_capacity_mw: Option<f64>,
    /// Also bound charging by plant capacity.
    pub charge_limited_by_capacity: bool,
    pub curtailment: CurtailmentMode,
    pub snsp_limit: Option<f64>,
    pub h2_demand_mwh_per_day: Option<f64>,
    /// Inject `import - export` at this bus id.
    pub interconnector_bus: Option<usize>,
    pub objective: Objective,
    /// Verify the SNSP ratio on the solved dispatch.
    pub snsp_ratio_check: bool,
}

impl Default for FormulationOptions {
    fn default() -> Self {
        FormulationOptions {
            siting: Siting::FromScenario,
            segments: DEFAULT_SEGMENTS,
            fixed_capacity_mw: None,
            charge_limited_by_capacity: false,
            curtailment: CurtailmentMode::Equality,
            snsp_limit: None,
            h2_demand_mwh_per_day: None,
            interconnector_bus: None,
            objective: Objective::MinCost,
            snsp_ratio_check: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Forward,
    Reverse,
}

/// A decision variable; `gen`, `bus`, `line` and `plant` are positions, not ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Segment { gen: usize, seg: usize, t: usize },
    Shed { bus: usize, t: usize },
    Curtail { bus: usize, t: usize },
    Wind { bus: usize, t: usize },
    Angle { bus: usize, t: usize },
    Flow { line: usize, dir: Direction, t: usize },
    Charge { plant: usize, t: usize },
    Discharge { plant: usize, t: usize },
    Soc { plant: usize, t: usize },
    Capacity { plant: usize },
}

/// Bijection between [`Var`] and column numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableIndex {
    horizon: usize,
    buses: usize,
    lines: usize,
    plants: usize,
    seg_counts: Vec<usize>,
    /// Start of each generator's segment block.
    seg_offsets: Vec<usize>,
    shed: usize,
    curtail: usize,
    wind: usize,
    angle: usize,
    flow: usize,
    charge: usize,
    discharge: usize,
    soc: usize,
    capacity: usize,
    total: usize,
}

impl VariableIndex {
    pub fn new(horizon: usize, seg_counts: Vec<usize>, buses: usize, lines: usize, plants: usize) -> Self {
        let mut seg_offsets = Vec::with_capacity(seg_counts.len());
        let mut next = 0;
        for &k in &seg_counts {
            seg_offsets.push(next);
            next += k * horizon;
        }
        let bt = buses * horizon;
        let shed = next;
        let curtail = shed + bt;
        let wind = curtail + bt;
        let angle = wind + bt;
        let flow = angle + bt;
        let charge = flow + 2 * lines * horizon;
        let discharge = charge + plants * horizon;
        let soc = discharge + plants * horizon;
        let capacity = soc + plants * horizon;
        VariableIndex {
            horizon,
            buses,
            lines,
            plants,
            seg_counts,
            seg_offsets,
            shed,
            curtail,
            wind,
            angle,
            flow,
            charge,
            discharge,
            soc,
            capacity,
            total: capacity + plants,
        }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_plants(&self) -> usize {
        self.plants
    }

    pub fn segments_of(&self, gen: usize) -> usize {
        self.seg_counts[gen]
    }

    pub fn col(&self, v: Var) -> usize {
        let h = self.horizon;
        match v {
            Var::Segment { gen, seg, t } => self.seg_offsets[gen] + t * self.seg_counts[gen] + seg,
            Var::Shed { bus, t } => self.shed + bus * h + t,
            Var::Curtail { bus, t } => self.curtail + bus * h + t,
            Var::Wind { bus, t } => self.wind + bus * h + t,
            Var::Angle { bus, t } => self.angle + bus * h + t,
            Var::Flow { line, dir, t } => {
                let d = match dir {
                    Direction::Forward => 0,
                    Direction::Reverse => 1,
                };
                self.flow + (2 * line + d) * h + t
            }
            Var::Charge { plant, t } => self.charge + plant * h + t,
            Var::Discharge { plant, t } => self.discharge + plant * h + t,
            Var::Soc { plant, t } => self.soc + plant * h + t,
            Var::Capacity { plant } => self.capacity + plant,
        }
    }

    pub fn id(&self, v: Var) -> ColId {
        ColId(self.col(v))
    }

    /// Inverse of [`col`](Self::col); `None` past the last column.
    pub fn var(&self, col: usize) -> Option<Var> {
        let h = self.horizon;
        if col >= self.total {
            return None;
        }
        if col < self.shed {
            // generators without segments share their offset with the next
            // generator, so the last offset not past `col` owns the column
            let gen = self.seg_offsets.partition_point(|&o| o <= col) - 1;
            let r = col - self.seg_offsets[gen];
            let k = self.seg_counts[gen];
            return Some(Var::Segment { gen, seg: r % k, t: r / k });
        }
        let split = |base: usize| ((col - base) / h, (col - base) % h);
        Some(if col < self.curtail {
            let (bus, t) = split(self.shed);
            Var::Shed { bus, t }
        } else if col < self.wind {
            let (bus, t) = split(self.curtail);
            Var::Curtail { bus, t }
        } else if col < self.angle {
            let (bus, t) = split(self.wind);
            Var::Wind { bus, t }
        } else if col < self.flow {
            let (bus, t) = split(self.angle);
            Var::Angle { bus, t }
        } else if col < self.charge {
            let (ld, t) = split(self.flow);
            let dir = if ld % 2 == 0 { Direction::Forward } else { Direction::Reverse };
            Var::Flow { line: ld / 2, dir, t }
        } else if col < self.discharge {
            let (plant, t) = split(self.charge);
            Var::Charge { plant, t }
        } else if col < self.soc {
            let (plant, t) = split(self.discharge);
            Var::Discharge { plant, t }
        } else if col < self.capacity {
            let (plant, t) = split(self.soc);
            Var::Soc { plant, t }
        } else {
            Var::Capacity { plant: col - self.capacity }
        })
    }

    /// Column count predicted from the model dimensions.
    pub fn expected_columns(gens: usize, k: usize, buses: usize, lines: usize, plants: usize, t: usize) -> usize {
        gens * k * t + 2 * buses * t + buses * t + buses * t + 2 * lines * t + 3 * plants * t + plants
    }
}

/// An assembled dispatch LP and everything needed to interpret its solution.
#[derive(Debug, Clone)]
pub struct DispatchModel {
    pub lp: LinearProgram,
    pub index: VariableIndex,
    pub costs: Vec<PiecewiseCost>,
    /// Bus position of each plant; `None` for the placeholder plant of a no-P2H run.
    pub plant_buses: Vec<Option<usize>>,
    pub options: FormulationOptions,
    pub snsp_limit: f64,
    pub h2_demand_mwh_per_day: f64,
    /// Investment charge per MW of capacity over the horizon, €.
    pub capacity_cost_per_mw: f64,
    interconnector: Option<usize>,
}

impl DispatchModel {
    pub fn has_p2h(&self) -> bool {
        self.plant_buses.iter().any(Option::is_some)
    }

    /// Bus position receiving the interconnector injection, if any.
    pub fn interconnector_bus(&self) -> Option<usize> {
        self.interconnector
    }
}

fn plant_label(s: &Scenario, bus: Option<usize>) -> String {
    match bus {
        Some(b) => format!("b{}", s.buses[b].id),
        None => "none".to_string(),
    }
}

fn resolve_plants(s: &Scenario, siting: &Siting) -> Result<Vec<Option<usize>>> {
    let ids = match siting {
        Siting::None => return Ok(vec![None]),
        Siting::FromScenario => s.p2h_buses(),
        Siting::Buses(ids) => ids.clone(),
    };
    if ids.is_empty() {
        return Ok(vec![None]);
    }
    if ids.len() > 2 {
        return Err(CoreError::Option(format!("at most two P2H plants, got {}", ids.len())));
    }
    if ids.len() == 2 && ids[0] == ids[1] {
        return Err(CoreError::Option(format!("P2H pair needs two distinct buses, got {} twice", ids[0])));
    }
    ids.iter()
        .map(|&id| {
            s.bus_index(id)
                .map(Some)
                .ok_or_else(|| CoreError::Option(format!("P2H bus {id} is not in the scenario")))
        })
        .collect()
}

/// Cost expression of the model: linear terms plus a constant, € over the horizon.
fn cost_terms(s: &Scenario, idx: &VariableIndex, costs: &[PiecewiseCost], capacity_cost: f64) -> (Vec<(ColId, f64)>, f64) {
    let e = &s.economics;
    let tau = &s.profiles.step_hours;
    let mut terms = Vec::with_capacity(idx.len());
    let mut constant = 0.0;
    for (g, pw) in costs.iter().enumerate() {
        for t in 0..idx.horizon() {
            constant += tau[t] * (pw.base_cost + e.emission_price_eur_per_mwh * pw.p_min_mw);
            for (k, seg) in pw.segments.iter().enumerate() {
                let c = tau[t] * (seg.slope + e.emission_price_eur_per_mwh);
                terms.push((idx.id(Var::Segment { gen: g, seg: k, t }), c));
            }
        }
    }
    for b in 0..s.buses.len() {
        for t in 0..idx.horizon() {
            terms.push((idx.id(Var::Shed { bus: b, t }), tau[t] * e.shed_price_eur_per_mwh));
            terms.push((idx.id(Var::Curtail { bus: b, t }), tau[t] * e.curtailment_price_eur_per_mwh));
        }
    }
    for p in 0..idx.num_plants() {
        terms.push((idx.id(Var::Capacity { plant: p }), capacity_cost));
    }
    (terms, constant)
}

/// Assembles the dispatch LP for `s` under `opts`.
pub fn build(s: &Scenario, opts: &FormulationOptions) -> Result<DispatchModel> {
    let violations = crate::scenario::validate(s);
    if !violations.is_empty() {
        return Err(CoreError::Invalid {
            origin: s.name.clone(),
            violations,
        });
    }
    let snsp = opts.snsp_limit.unwrap_or(s.economics.snsp_limit);
    if !(snsp > 0.0 && snsp <= 1.0) {
        return Err(CoreError::Option(format!("SNSP limit {snsp} outside (0, 1]")));
    }
    let h2 = opts.h2_demand_mwh_per_day.unwrap_or(s.economics.h2_demand_mwh_per_day);
    if !(h2.is_finite() && h2 >= 0.0) {
        return Err(CoreError::Option(format!("hydrogen demand {h2} must be >= 0")));
    }
    if let Some(c) = opts.fixed_capacity_mw {
        if !(c.is_finite() && c >= 0.0) {
            return Err(CoreError::Option(format!("fixed capacity {c} must be >= 0")));
        }
    }
    if let Objective::MaxHydrogen { cost_cap } = opts.objective {
        if !cost_cap.is_finite() {
            return Err(CoreError::Option("cost cap must be finite".into()));
        }
    }
    let interconnector = match opts.interconnector_bus {
        Some(id) => Some(
            s.bus_index(id)
                .ok_or_else(|| CoreError::Option(format!("interconnector bus {id} is not in the scenario")))?,
        ),
        None => None,
    };
    let plant_buses = resolve_plants(s, &opts.siting)?;
    let costs = s
        .generators
        .iter()
        .map(|g| linearize(g, opts.segments))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let horizon = s.horizon();
    let nb = s.buses.len();
    let idx = VariableIndex::new(
        horizon,
        costs.iter().map(|c| c.segments.len()).collect(),
        nb,
        s.lines.len(),
        plant_buses.len(),
    );
    let tau = &s.profiles.step_hours;
    let wind_cap = s.wind_capacity_by_bus();
    let days = s.num_days();
    let capacity_cost = s.economics.p2h_investment_eur_per_mw * s.economics.p2h_amortization_per_day * days as f64;

    let bus_name = |b: usize| format!("b{}", s.buses[b].id);
    let mut lp = LpBuilder::new(s.name.clone());

    // columns, in index order
    for (g, pw) in costs.iter().enumerate() {
        let gid = s.generators[g].id;
        for t in 0..horizon {
            for (k, seg) in pw.segments.iter().enumerate() {
                lp.add_col(format!("seg[g{gid},k{},t{}]", k + 1, t + 1), 0.0, seg.width_mw, 0.0)?;
            }
        }
    }
    for b in 0..nb {
        for t in 0..horizon {
            lp.add_col(format!("shed[{},t{}]", bus_name(b), t + 1), 0.0, s.demand(b, t), 0.0)?;
        }
    }
    for family in ["curt", "wind"] {
        for b in 0..nb {
            for t in 0..horizon {
                let avail = s.profiles.wind_availability[t] * wind_cap[b];
                lp.add_col(format!("{family}[{},t{}]", bus_name(b), t + 1), 0.0, avail, 0.0)?;
            }
        }
    }
    let ref_pos = s.bus_index(s.reference_bus).expect("validated reference bus");
    for b in 0..nb {
        let bus = &s.buses[b];
        let (lo, hi) = if b == ref_pos { (0.0, 0.0) } else { (bus.angle_min_rad, bus.angle_max_rad) };
        for t in 0..horizon {
            lp.add_col(format!("ang[{},t{}]", bus_name(b), t + 1), lo, hi, 0.0)?;
        }
    }
    for (l, line) in s.lines.iter().enumerate() {
        for (tag, _) in [(">", Direction::Forward), ("<", Direction::Reverse)] {
            for t in 0..horizon {
                lp.add_col(
                    format!("flow[l{}{tag},t{}]", l + 1, t + 1),
                    -line.thermal_limit_mw,
                    line.thermal_limit_mw,
                    0.0,
                )?;
            }
        }
    }
    let soc_max = s.storage.soc_max_mwh.unwrap_or(f64::INFINITY);
    for family in ["pch", "pdch", "soc"] {
        for &pb in &plant_buses {
            let label = plant_label(s, pb);
            for t in 0..horizon {
                let (lo, hi) = match (family, pb) {
                    ("soc", _) => (0.0, soc_max),
                    (_, None) => (0.0, 0.0),
                    _ => (0.0, f64::INFINITY),
                };
                lp.add_col(format!("{family}[{label},t{}]", t + 1), lo, hi, 0.0)?;
            }
        }
    }
    for &pb in &plant_buses {
        let (lo, hi) = match (pb, opts.fixed_capacity_mw) {
            (None, _) => (0.0, 0.0),
            (Some(_), Some(c)) => (c, c),
            (Some(_), None) => (0.0, f64::INFINITY),
        };
        lp.add_col(format!("xi[{}]", plant_label(s, pb)), lo, hi, 0.0)?;
    }
    debug_assert_eq!(lp.num_cols(), idx.len());

    // objective
    let (terms, constant) = cost_terms(s, &idx, &costs, capacity_cost);
    match opts.objective {
        Objective::MinCost => {
            for &(c, v) in &terms {
                lp.set_cost(c, v);
            }
            lp.add_objective_offset(constant);
        }
        Objective::MaxHydrogen { .. } => {
            for p in 0..plant_buses.len() {
                for t in 0..horizon {
                    lp.set_cost(idx.id(Var::Discharge { plant: p, t }), -tau[t]);
                }
            }
        }
    }

    // nodal balance: generation + wind + shed - load - charging = outgoing flows
    let mut gens_at: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for (g, gen) in s.generators.iter().enumerate() {
        gens_at[s.bus_index(gen.bus).expect("validated bus")].push(g);
    }
    let mut out_flows: Vec<Vec<(usize, Direction)>> = vec![Vec::new(); nb];
    for (l, line) in s.lines.iter().enumerate() {
        out_flows[s.bus_index(line.from_bus).expect("validated bus")].push((l, Direction::Forward));
        out_flows[s.bus_index(line.to_bus).expect("validated bus")].push((l, Direction::Reverse));
    }
    for t in 0..horizon {
        for b in 0..nb {
            let mut row = Vec::new();
            let mut pmin = 0.0;
            for &g in &gens_at[b] {
                pmin += costs[g].p_min_mw;
                for k in 0..idx.segments_of(g) {
                    row.push((idx.id(Var::Segment { gen: g, seg: k, t }), 1.0));
                }
            }
            row.push((idx.id(Var::Wind { bus: b, t }), 1.0));
            row.push((idx.id(Var::Shed { bus: b, t }), 1.0));
            for (p, &pb) in plant_buses.iter().enumerate() {
                if pb == Some(b) {
                    row.push((idx.id(Var::Charge { plant: p, t }), -1.0));
                }
            }
            for &(l, dir) in &out_flows[b] {
                row.push((idx.id(Var::Flow { line: l, dir, t }), -1.0));
            }
            let mut rhs = s.demand(b, t) - pmin;
            if interconnector == Some(b) {
                rhs -= s.profiles.import_mw[t] - s.profiles.export_mw[t];
            }
            lp.add_row(format!("bal[{},t{}]", bus_name(b), t + 1), RowSense::Eq, rhs, &row)?;
        }
    }

    // directed flows: flow - B (angle_from - angle_to) = 0
    for (l, line) in s.lines.iter().enumerate() {
        let b_mw = s.base_mva * line.susceptance_pu;
        let from = s.bus_index(line.from_bus).expect("validated bus");
        let to = s.bus_index(line.to_bus).expect("validated bus");
        for (tag, dir, a, z) in [(">", Direction::Forward, from, to), ("<", Direction::Reverse, to, from)] {
            for t in 0..horizon {
                lp.add_row(
                    format!("flowdef[l{}{tag},t{}]", l + 1, t + 1),
                    RowSense::Eq,
                    0.0,
                    &[
                        (idx.id(Var::Flow { line: l, dir, t }), 1.0),
                        (idx.id(Var::Angle { bus: a, t }), -b_mw),
                        (idx.id(Var::Angle { bus: z, t }), b_mw),
                    ],
                )?;
            }
        }
    }

    // ramps between consecutive steps
    for (g, gen) in s.generators.iter().enumerate() {
        let k = idx.segments_of(g);
        if k == 0 {
            continue;
        }
        for t in 1..horizon {
            let mut up = Vec::with_capacity(2 * k);
            for seg in 0..k {
                up.push((idx.id(Var::Segment { gen: g, seg, t }), 1.0));
                up.push((idx.id(Var::Segment { gen: g, seg, t: t - 1 }), -1.0));
            }
            let down: Vec<_> = up.iter().map(|&(c, v)| (c, -v)).collect();
            lp.add_row(format!("rampup[g{},t{}]", gen.id, t + 1), RowSense::Le, gen.ramp_up_mw_per_h * tau[t], &up)?;
            lp.add_row(format!("rampdn[g{},t{}]", gen.id, t + 1), RowSense::Le, gen.ramp_down_mw_per_h * tau[t], &down)?;
        }
    }

    // storage
    let eta = s.storage.charge_efficiency;
    for (p, &pb) in plant_buses.iter().enumerate() {
        let label = plant_label(s, pb);
        for t in 0..horizon {
            let mut row = vec![
                (idx.id(Var::Soc { plant: p, t }), 1.0),
                (idx.id(Var::Charge { plant: p, t }), -eta * tau[t]),
                (idx.id(Var::Discharge { plant: p, t }), tau[t]),
            ];
            let rhs = if t == 0 {
                s.storage.soc_initial_mwh
            } else {
                row.push((idx.id(Var::Soc { plant: p, t: t - 1 }), -1.0));
                0.0
            };
            lp.add_row(format!("soc[{label},t{}]", t + 1), RowSense::Eq, rhs, &row)?;
        }
        for t in 0..horizon {
            lp.add_row(
                format!("dcap[{label},t{}]", t + 1),
                RowSense::Le,
                0.0,
                &[(idx.id(Var::Discharge { plant: p, t }), 1.0), (idx.id(Var::Capacity { plant: p }), -1.0)],
            )?;
        }
        if opts.charge_limited_by_capacity {
            for t in 0..horizon {
                lp.add_row(
                    format!("ccap[{label},t{}]", t + 1),
                    RowSense::Le,
                    0.0,
                    &[(idx.id(Var::Charge { plant: p, t }), 1.0), (idx.id(Var::Capacity { plant: p }), -1.0)],
                )?;
            }
        }
        if s.storage.cyclic {
            lp.add_row(
                format!("cyc[{label}]"),
                RowSense::Eq,
                s.storage.soc_initial_mwh,
                &[(idx.id(Var::Soc { plant: p, t: horizon - 1 }), 1.0)],
            )?;
        }
    }

    // daily hydrogen coverage by all plants together
    if opts.objective == Objective::MinCost {
        for d in 0..days {
            let row: Vec<_> = s
                .day_steps(d)
                .flat_map(|t| (0..plant_buses.len()).map(move |p| (p, t)))
                .map(|(p, t)| (idx.id(Var::Discharge { plant: p, t }), tau[t]))
                .collect();
            lp.add_row(format!("h2[d{}]", d + 1), RowSense::Ge, h2, &row)?;
        }
    }

    // wind accounting at wind buses
    let closure = match opts.curtailment {
        CurtailmentMode::Equality => RowSense::Eq,
        CurtailmentMode::Inequality => RowSense::Le,
    };
    for b in 0..nb {
        if wind_cap[b] <= 0.0 {
            continue;
        }
        for t in 0..horizon {
            lp.add_row(
                format!("windcl[{},t{}]", bus_name(b), t + 1),
                closure,
                s.profiles.wind_availability[t] * wind_cap[b],
                &[(idx.id(Var::Wind { bus: b, t }), 1.0), (idx.id(Var::Curtail { bus: b, t }), 1.0)],
            )?;
        }
    }

    // SNSP: wind + import <= limit * (load + charging + export)
    for t in 0..horizon {
        let mut row: Vec<_> = (0..nb).map(|b| (idx.id(Var::Wind { bus: b, t }), 1.0)).collect();
        for p in 0..plant_buses.len() {
            row.push((idx.id(Var::Charge { plant: p, t }), -snsp));
        }
        let load: f64 = (0..nb).map(|b| s.demand(b, t)).sum();
        let rhs = snsp * (load + s.profiles.export_mw[t]) - s.profiles.import_mw[t];
        lp.add_row(format!("snsp[t{}]", t + 1), RowSense::Le, rhs, &row)?;
    }

    if let Objective::MaxHydrogen { cost_cap } = opts.objective {
        lp.add_row("costcap", RowSense::Le, cost_cap - constant, &terms)?;
    }

    Ok(DispatchModel {
        lp: lp.build(),
        index: idx,
        costs,
        plant_buses,
        options: opts.clone(),
        snsp_limit: snsp,
        h2_demand_mwh_per_day: h2,
        capacity_cost_per_mw: capacity_cost,
        interconnector,
    })
}

/// A built model, its LP solution and the extracted dispatch when optimal.
#[derive(Debug, Clone)]
pub struct DispatchOutcome {
    pub model: DispatchModel,
    pub lp_solution: LpSolution,
    pub solution: Option<DispatchSolution>,
}

/// Builds, solves and (when optimal) extracts in one call.
pub fn solve_dispatch(s: &Scenario, opts: &FormulationOptions, solver: &SolverOptions) -> Result<DispatchOutcome> {
    let model = build(s, opts)?;
    let lp_solution = p2h_lp::solve(&model.lp, solver);
    let solution = if lp_solution.is_optimal() {
        Some(extract(&model, &lp_solution.x, s)?)
    } else {
        None
    };
    Ok(DispatchOutcome {
        model,
        lp_solution,
        solution,
    })
}
