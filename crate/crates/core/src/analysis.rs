//! KPI reports and the sensitivity studies: P2H location, SNSP level and
//! pairs of P2H buses.
//!
//! Sweep points are independent solves run on a rayon pool; results are
//! collected in request order so output does not depend on scheduling.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use p2h_lp::{SolverOptions, Status};

use crate::aviation::{find_route, hydrogen_equivalent, ConversionMode, FuelPlan};
use crate::error::{CoreError, Result};
use crate::formulation::{
    solve_dispatch, CostBreakdown, DispatchModel, DispatchSolution, FormulationOptions, Objective, Siting,
};
use crate::scenario::Scenario;

/// Environment variable holding the sweep worker count.
pub const WORKERS_ENV: &str = "P2H_WORKERS";
/// Default slack on the stage-one cost in max-hydrogen mode.
pub const DEFAULT_COST_SLACK: f64 = 0.05;

/// Daily figures for one solved dispatch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiReport {
    pub daily_cost_meur: f64,
    pub daily_costs_meur: CostBreakdown,
    pub daily_curtailment_gwh: f64,
    pub daily_power_co2_t: f64,
    pub daily_aviation_co2_t: f64,
    pub capacity_mw: f64,
    pub daily_h2_mwh: f64,
    /// Cost avoided per MWh of required hydrogen against the no-P2H baseline.
    pub h2_benefit_eur_per_mwh: Option<f64>,
}

/// The DUB-LHR plan in paper mode, used for aviation CO₂ by default.
pub fn reference_plan() -> FuelPlan {
    let route = find_route("DUB-LHR").expect("bundled route");
    hydrogen_equivalent(&route.to_spec(ConversionMode::Paper), ConversionMode::Paper).expect("valid bundled route")
}

/// KPIs of `sol`; `baseline` (a no-P2H run) enables the hydrogen benefit.
pub fn kpis(
    model: &DispatchModel,
    sol: &DispatchSolution,
    s: &Scenario,
    plan: &FuelPlan,
    baseline: Option<&KpiReport>,
) -> KpiReport {
    let days = s.num_days() as f64;
    let daily = sol.costs.scaled(1e-6 / days);
    let daily_cost = daily.total();
    let daily_h2 = sol.hydrogen_mwh(s) / days;
    let fuelled_by_hydrogen = model.has_p2h() && daily_h2 > 0.0;
    let demand = model.h2_demand_mwh_per_day;
    let benefit = match baseline {
        Some(b) if model.has_p2h() && demand > 0.0 => Some((b.daily_cost_meur - daily_cost) * 1e6 / demand),
        _ => None,
    };
    KpiReport {
        daily_cost_meur: daily_cost,
        daily_costs_meur: daily,
        daily_curtailment_gwh: sol.curtailed_mwh(s) / days / 1000.0,
        daily_power_co2_t: sol.co2_t(s) / days,
        daily_aviation_co2_t: if fuelled_by_hydrogen { 0.0 } else { plan.daily_co2_t },
        capacity_mw: sol.total_capacity_mw(),
        daily_h2_mwh: daily_h2,
        h2_benefit_eur_per_mwh: benefit,
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Base options; each sweep overrides siting and its own axis.
    pub formulation: FormulationOptions,
    pub solver: SolverOptions,
    /// Parallel solves; 0 uses every core.
    pub workers: usize,
    pub plan: FuelPlan,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            formulation: FormulationOptions::default(),
            solver: SolverOptions::default(),
            workers: workers_from_env(),
            plan: reference_plan(),
        }
    }
}

/// Worker count from `P2H_WORKERS`, 0 (all cores) when unset or invalid.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Location,
    Snsp,
    Pairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Bus(usize),
    Snsp(f64),
    Pair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub axis: Axis,
    pub status: String,
    pub kpi: Option<KpiReport>,
    /// Baseline curtailment minus this point's, GWh/day.
    pub curtailment_reduction_gwh: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnspMode {
    /// Minimum cost with the daily hydrogen demand enforced.
    FixedDemand,
    /// Maximum hydrogen with total cost capped at `(1 + slack)` times the
    /// minimum cost at the lowest requested level.
    MaxHydrogen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairObjective {
    Curtailment,
    Cost,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub baseline: Option<KpiReport>,
    pub points: Vec<SweepPoint>,
    /// Best point by the sweep's criterion, if any point solved.
    pub best: Option<Axis>,
    /// Max-hydrogen SNSP sweeps: horizon cost cap used by every point, €.
    pub cost_cap_eur: Option<f64>,
    /// Max-hydrogen SNSP sweeps: first level from which producible hydrogen stays flat.
    pub plateau_level: Option<f64>,
}

/// Solves one dispatch and reports its KPIs, or its status when not optimal.
pub fn evaluate(
    s: &Scenario,
    opts: &FormulationOptions,
    cfg: &SweepConfig,
    baseline: Option<&KpiReport>,
) -> Result<(Status, Option<KpiReport>, Option<DispatchSolution>)> {
    let out = solve_dispatch(s, opts, &cfg.solver)?;
    let status = out.lp_solution.status;
    match out.solution {
        Some(sol) => {
            let k = kpis(&out.model, &sol, s, &cfg.plan, baseline);
            Ok((status, Some(k), Some(sol)))
        }
        None => Ok((status, None, None)),
    }
}

/// The no-P2H reference: no plant and no hydrogen demand.
pub fn solve_baseline(s: &Scenario, cfg: &SweepConfig) -> Result<KpiReport> {
    let opts = FormulationOptions {
        siting: Siting::None,
        h2_demand_mwh_per_day: Some(0.0),
        fixed_capacity_mw: None,
        objective: Objective::MinCost,
        ..cfg.formulation.clone()
    };
    match evaluate(s, &opts, cfg, None)? {
        (_, Some(k), _) => Ok(k),
        (status, None, _) => Err(CoreError::NotOptimal(status)),
    }
}

fn run_parallel<T: Send, F: Fn(usize) -> T + Sync + Send>(workers: usize, n: usize, f: F) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CoreError::Option(format!("worker pool: {e}")))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
}

fn point(axis: Axis, res: Result<(Status, Option<KpiReport>, Option<DispatchSolution>)>, baseline: Option<&KpiReport>) -> SweepPoint {
    match res {
        Ok((status, kpi, _)) => SweepPoint {
            axis,
            status: status.as_str().to_string(),
            curtailment_reduction_gwh: match (baseline, &kpi) {
                (Some(b), Some(k)) => Some(b.daily_curtailment_gwh - k.daily_curtailment_gwh),
                _ => None,
            },
            kpi,
        },
        Err(e) => SweepPoint {
            axis,
            status: format!("error: {e}"),
            kpi: None,
            curtailment_reduction_gwh: None,
        },
    }
}

fn best_by(points: &[SweepPoint], key: impl Fn(&KpiReport) -> f64) -> Option<Axis> {
    let mut best: Option<(f64, Axis)> = None;
    for p in points {
        if let Some(k) = &p.kpi {
            let v = key(k);
            if best.map_or(true, |(b, _)| v < b) {
                best = Some((v, p.axis));
            }
        }
    }
    best.map(|(_, a)| a)
}

fn check_buses(s: &Scenario, buses: &[usize]) -> Result<()> {
    for &b in buses {
        if s.bus_index(b).is_none() {
            return Err(CoreError::Option(format!("bus {b} is not in the scenario")));
        }
    }
    Ok(())
}

/// One single-plant solve per bus against a shared no-P2H baseline.
pub fn sweep_location(s: &Scenario, buses: &[usize], cfg: &SweepConfig) -> Result<SweepResult> {
    check_buses(s, buses)?;
    let baseline = solve_baseline(s, cfg)?;
    let points = run_parallel(cfg.workers, buses.len(), |i| {
        let opts = FormulationOptions {
            siting: Siting::Buses(vec![buses[i]]),
            ..cfg.formulation.clone()
        };
        point(Axis::Bus(buses[i]), evaluate(s, &opts, cfg, Some(&baseline)), Some(&baseline))
    })?;
    let best = best_by(&points, |k| k.daily_cost_meur);
    Ok(SweepResult {
        kind: SweepKind::Location,
        baseline: Some(baseline),
        points,
        best,
        cost_cap_eur: None,
        plateau_level: None,
    })
}

/// Cost (fixed demand) or producible hydrogen (max-hydrogen) per SNSP level.
pub fn sweep_snsp(s: &Scenario, levels: &[f64], mode: SnspMode, cost_slack: f64, cfg: &SweepConfig) -> Result<SweepResult> {
    if let Some(l) = levels.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
        return Err(CoreError::Option(format!("SNSP level {l} outside (0, 1]")));
    }
    if !(cost_slack.is_finite() && cost_slack >= 0.0) {
        return Err(CoreError::Option(format!("cost slack {cost_slack} must be >= 0")));
    }
    let cost_cap = match mode {
        SnspMode::FixedDemand => None,
        SnspMode::MaxHydrogen => {
            let lowest = levels.iter().copied().fold(f64::INFINITY, f64::min);
            if !lowest.is_finite() {
                return Err(CoreError::Option("no SNSP levels given".into()));
            }
            let opts = FormulationOptions {
                snsp_limit: Some(lowest),
                objective: Objective::MinCost,
                ..cfg.formulation.clone()
            };
            let out = solve_dispatch(s, &opts, &cfg.solver)?;
            if !out.lp_solution.is_optimal() {
                return Err(CoreError::NotOptimal(out.lp_solution.status));
            }
            Some((1.0 + cost_slack) * out.lp_solution.objective)
        }
    };
    let points = run_parallel(cfg.workers, levels.len(), |i| {
        let objective = match cost_cap {
            Some(cap) => Objective::MaxHydrogen { cost_cap: cap },
            None => Objective::MinCost,
        };
        let opts = FormulationOptions {
            snsp_limit: Some(levels[i]),
            objective,
            ..cfg.formulation.clone()
        };
        point(Axis::Snsp(levels[i]), evaluate(s, &opts, cfg, None), None)
    })?;
    let (best, plateau) = match mode {
        SnspMode::FixedDemand => (best_by(&points, |k| k.daily_cost_meur), None),
        SnspMode::MaxHydrogen => {
            let best = best_by(&points, |k| -k.daily_h2_mwh);
            let solved: Vec<(f64, f64)> = points
                .iter()
                .filter_map(|p| match (p.axis, &p.kpi) {
                    (Axis::Snsp(l), Some(k)) => Some((l, k.daily_h2_mwh)),
                    _ => None,
                })
                .collect();
            let (ls, vs): (Vec<f64>, Vec<f64>) = solved.into_iter().unzip();
            (best, plateau_start(&ls, &vs, 1e-6))
        }
    };
    Ok(SweepResult {
        kind: SweepKind::Snsp,
        baseline: None,
        points,
        best,
        cost_cap_eur: cost_cap,
        plateau_level: plateau,
    })
}

/// Every unordered pair of distinct candidates, each bus with its own plant.
pub fn sweep_pairs(s: &Scenario, candidates: &[usize], objective: PairObjective, cfg: &SweepConfig) -> Result<SweepResult> {
    check_buses(s, candidates)?;
    let mut uniq = candidates.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() < 2 {
        return Err(CoreError::Option("pair sweep needs at least two distinct candidate buses".into()));
    }
    let pairs: Vec<(usize, usize)> = uniq
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| uniq[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    let baseline = solve_baseline(s, cfg)?;
    let points = run_parallel(cfg.workers, pairs.len(), |i| {
        let (a, b) = pairs[i];
        let opts = FormulationOptions {
            siting: Siting::Buses(vec![a, b]),
            ..cfg.formulation.clone()
        };
        point(Axis::Pair(a, b), evaluate(s, &opts, cfg, Some(&baseline)), Some(&baseline))
    })?;
    let best = match objective {
        PairObjective::Cost => best_by(&points, |k| k.daily_cost_meur),
        PairObjective::Curtailment => best_by(&points, |k| k.daily_curtailment_gwh),
    };
    Ok(SweepResult {
        kind: SweepKind::Pairs,
        baseline: Some(baseline),
        points,
        best,
        cost_cap_eur: None,
        plateau_level: None,
    })
}

/// First level from which `values` stay within `rel_tol` of each other to the
/// end of the series, provided at least two points are flat.
pub fn plateau_start(levels: &[f64], values: &[f64], rel_tol: f64) -> Option<f64> {
    let n = levels.len().min(values.len());
    if n < 2 {
        return None;
    }
    let last = values[n - 1];
    let flat = |v: f64| (v - last).abs() <= rel_tol * last.abs().max(1.0);
    let mut start = n - 1;
    while start > 0 && flat(values[start - 1]) {
        start -= 1;
    }
    (start < n - 1).then(|| levels[start])
}

/// Evenly spaced levels `start, start + step, ...` up to `end` inclusive.
pub fn level_range(start: f64, step: f64, end: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start.is_finite() && end.is_finite()) || end < start {
        return Err(CoreError::Option(format!("bad range {start}:{step}:{end}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    // round to a fixed number of decimals so 0.55 + 5*0.05 prints as 0.8
    Ok((0..=n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x == 0.0 => "0".into(),
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

/// One CSV row per point; column names carry units.
pub fn write_sweep_csv<W: Write>(r: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let axis_cols: &[&str] = match r.kind {
        SweepKind::Location => &["bus"],
        SweepKind::Snsp => &["snsp_limit"],
        SweepKind::Pairs => &["bus_a", "bus_b"],
    };
    let mut header: Vec<&str> = axis_cols.to_vec();
    header.extend([
        "status",
        "capacity_mw",
        "daily_cost_meur",
        "fuel_meur",
        "emission_meur",
        "shedding_meur",
        "curtailment_meur",
        "investment_meur",
        "curtailment_gwh_per_day",
        "power_co2_t_per_day",
        "aviation_co2_t_per_day",
        "h2_mwh_per_day",
        "h2_benefit_eur_per_mwh",
        "curtailment_reduction_gwh_per_day",
    ]);
    let csv_err = |e: csv::Error| CoreError::Parse {
        origin: "sweep csv".into(),
        msg: e.to_string(),
    };
    w.write_record(&header).map_err(csv_err)?;
    for p in &r.points {
        let mut row: Vec<String> = match p.axis {
            Axis::Bus(b) => vec![b.to_string()],
            Axis::Snsp(l) => vec![format!("{l}")],
            Axis::Pair(a, b) => vec![a.to_string(), b.to_string()],
        };
        row.push(p.status.clone());
        let k = p.kpi.as_ref();
        let c = k.map(|k| k.daily_costs_meur);
        row.extend([
            cell(k.map(|k| k.capacity_mw)),
            cell(k.map(|k| k.daily_cost_meur)),
            cell(c.map(|c| c.fuel)),
            cell(c.map(|c| c.emission)),
            cell(c.map(|c| c.shedding)),
            cell(c.map(|c| c.curtailment)),
            cell(c.map(|c| c.investment)),
            cell(k.map(|k| k.daily_curtailment_gwh)),
            cell(k.map(|k| k.daily_power_co2_t)),
            cell(k.map(|k| k.daily_aviation_co2_t)),
            cell(k.map(|k| k.daily_h2_mwh)),
            cell(k.and_then(|k| k.h2_benefit_eur_per_mwh)),
            cell(p.curtailment_reduction_gwh),
        ]);
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| CoreError::Io {
        path: "sweep csv".into(),
        source,
    })?;
    Ok(())
}

pub fn sweep_summary_json(r: &SweepResult) -> String {
    serde_json::to_string_pretty(r).expect("sweep result serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_detection() {
        let l = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8];
        assert_eq!(plateau_start(&l, &[1.0, 2.0, 3.0, 4.0, 4.0, 4.0], 1e-9), Some(0.7));
        assert_eq!(plateau_start(&l, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 1e-9), None);
        assert_eq!(plateau_start(&l, &[2.0; 6], 1e-9), Some(0.55));
        assert_eq!(plateau_start(&l[..1], &[1.0], 1e-9), None);
    }

    #[test]
    fn level_ranges_are_inclusive_and_clean() {
        let v = level_range(0.55, 0.05, 0.80).unwrap();
        assert_eq!(v, vec![0.55, 0.6, 0.65, 0.7, 0.75, 0.8]);
        assert!(level_range(0.8, 0.05, 0.55).is_err());
        assert!(level_range(0.5, 0.0, 0.6).is_err());
    }

    #[test]
    fn reference_plan_is_dub_lhr() {
        let p = reference_plan();
        assert_eq!(p.daily_jet_fuel_kg, 119800.0);
        assert_eq!(p.daily_co2_t, 412.5);
    }

    #[test]
    fn toy6_kpis_account_for_aviation() {
        let s = Scenario::bundled("toy6").unwrap();
        let cfg = SweepConfig {
            workers: 1,
            ..Default::default()
        };
        let base = solve_baseline(&s, &cfg).unwrap();
        assert_eq!(base.daily_aviation_co2_t, 412.5);
        assert_eq!(base.capacity_mw, 0.0);
        let (status, k, _) = evaluate(&s, &cfg.formulation, &cfg, Some(&base)).unwrap();
        assert_eq!(status, Status::Optimal);
        let k = k.unwrap();
        assert_eq!(k.daily_aviation_co2_t, 0.0);
        let sum = k.daily_costs_meur.total();
        assert!((sum - k.daily_cost_meur).abs() < 1e-12);
        let b = k.h2_benefit_eur_per_mwh.unwrap();
        assert!((b - (base.daily_cost_meur - k.daily_cost_meur) * 1e6 / 600.0).abs() < 1e-9);
    }
}
