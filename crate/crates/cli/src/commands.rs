use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use p2h_core::analysis::{
    self, kpis, level_range, sweep_location, sweep_pairs, sweep_snsp, write_sweep_csv, Axis, KpiReport, PairObjective,
    SnspMode, SweepConfig, SweepResult,
};
use p2h_core::aviation::{
    bundled_routes, equivalent_jet_fuel_price, find_route, hydrogen_equivalent, ConversionMode, FuelPlan, FuelPriceInputs,
    RouteSpec,
};
use p2h_core::formulation::{audit, build, solve_dispatch, CurtailmentMode, FormulationOptions, Siting};
use p2h_core::scenario::{load_scenario, BUNDLED};
use p2h_core::Scenario;
use p2h_lp::mps::{name_map_path, write_mps};
use p2h_lp::SolverOptions;

use crate::output::*;
use crate::{AviationArgs, CurtailmentArg, DispatchArgs, ExportArgs, ModeArg, ModelArgs, PairObjectiveArg, SnspModeArg, SweepCommand, SweepCommon};

const RESIDUAL_TOL: f64 = 1e-6;

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn conversion(mode: ModeArg) -> ConversionMode {
    match mode {
        ModeArg::Paper => ConversionMode::Paper,
        ModeArg::Exact => ConversionMode::Exact,
    }
}

fn load(m: &ModelArgs) -> CmdResult<Scenario> {
    let s = if BUNDLED.contains(&m.scenario.as_str()) {
        Scenario::bundled(&m.scenario)?
    } else {
        let p = Path::new(&m.scenario);
        if !p.exists() {
            return Err(Failure::Data(format!(
                "scenario {:?} is neither a bundled name ({}) nor an existing file",
                m.scenario,
                BUNDLED.join(", ")
            )));
        }
        load_scenario(p)?
    };
    match m.horizon {
        Some(steps) => Ok(s.with_horizon(steps)?),
        None => Ok(s),
    }
}

fn formulation(m: &ModelArgs) -> FormulationOptions {
    FormulationOptions {
        segments: m.segments,
        h2_demand_mwh_per_day: m.h2_demand,
        snsp_limit: m.snsp,
        charge_limited_by_capacity: m.charge_limit,
        curtailment: match m.curtailment {
            CurtailmentArg::Equality => CurtailmentMode::Equality,
            CurtailmentArg::Inequality => CurtailmentMode::Inequality,
        },
        interconnector_bus: m.interconnector_bus,
        fixed_capacity_mw: m.fixed_capacity,
        ..Default::default()
    }
}

fn siting(no_p2h: bool, buses: &[usize]) -> Siting {
    if no_p2h {
        Siting::None
    } else if buses.is_empty() {
        Siting::FromScenario
    } else {
        Siting::Buses(buses.to_vec())
    }
}

#[derive(Serialize)]
struct AviationRecord<'a> {
    route: &'a str,
    mode: &'static str,
    spec: &'a RouteSpec,
    plan: &'a FuelPlan,
    jet_fuel_eur_per_kg: f64,
    /// (offset EUR/kg, equivalent price EUR/MWh)
    price_table: Vec<(f64, f64)>,
}

pub fn aviation(a: &AviationArgs, argv: &[String]) -> CmdResult {
    if a.list {
        println!("{:<10} {:>14} {:>12} {:>8}", "route", "flights/year", "fuel_kg", "seats");
        for r in bundled_routes() {
            println!("{:<10} {:>14} {:>12} {:>8}", r.route, r.flights_per_year, r.fuel_per_journey_kg, r.avg_seats_per_aircraft);
        }
        return Ok(());
    }
    let mode = conversion(a.mode);
    let (label, spec) = match (&a.route, a.flights_per_day, a.fuel_burn_kg) {
        (Some(code), _, _) => {
            let r = find_route(code).map_err(|e| Failure::Data(e.to_string()))?;
            (r.route.clone(), r.to_spec(mode))
        }
        (None, Some(nf), Some(gamma)) => ("custom".to_string(), RouteSpec::new(nf, gamma, a.seats, a.co2_per_pax_kg)),
        _ => return Err(Failure::Data("give --route CODE, or --flights-per-day with --fuel-burn-kg (see --list)".into())),
    };
    let plan = hydrogen_equivalent(&spec, mode).map_err(|e| Failure::Data(e.to_string()))?;
    let mut price_table = Vec::new();
    if plan.daily_h2_mwh > 0.0 {
        for &off in &a.offset {
            let prices = FuelPriceInputs {
                jet_fuel_eur_per_kg: a.jet_fuel_price,
                carbon_offset_eur_per_kg: off,
            };
            let p = equivalent_jet_fuel_price(&plan, &prices).map_err(|e| Failure::Data(e.to_string()))?;
            price_table.push((off, p));
        }
    }

    println!("route                      {label}");
    println!("conversion mode            {}", mode.as_str());
    println!("flights per day            {}", spec.flights_per_day);
    println!("fuel per journey           {} kg", spec.fuel_burn_per_journey_kg);
    println!("daily jet fuel             {} kg", plan.daily_jet_fuel_kg);
    println!("daily CO2                  {} t", plan.daily_co2_t);
    println!("daily hydrogen             {:.1} kg", plan.daily_h2_kg);
    println!("daily hydrogen energy      {:.3} MWh", plan.daily_h2_mwh);
    if price_table.is_empty() {
        println!("equivalent fuel price      undefined (no hydrogen demand)");
    }
    for (off, p) in &price_table {
        println!("equivalent fuel price      {p:.2} EUR/MWh (jet fuel {} EUR/kg, offset {off} EUR/kg)", a.jet_fuel_price);
    }

    if let Some(dir) = &a.out_dir {
        let mut out = OutDir::create(dir)?;
        let rec = AviationRecord {
            route: &label,
            mode: mode.as_str(),
            spec: &spec,
            plan: &plan,
            jet_fuel_eur_per_kg: a.jet_fuel_price,
            price_table,
        };
        out.write_json("aviation.json", &rec)?;
        out.write_manifest(manifest("aviation", argv, &rec))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ModelRecord<'a> {
    formulation: &'a FormulationOptions,
    aviation_route: &'a str,
}

fn plan_for(m: &ModelArgs) -> CmdResult<FuelPlan> {
    let r = find_route(&m.route).map_err(|e| Failure::Data(e.to_string()))?;
    hydrogen_equivalent(&r.to_spec(ConversionMode::Paper), ConversionMode::Paper).map_err(|e| Failure::Data(e.to_string()))
}

fn infeasible_hint(s: &Scenario, opts: &FormulationOptions) -> String {
    let h2 = opts.h2_demand_mwh_per_day.unwrap_or(s.economics.h2_demand_mwh_per_day);
    if h2 > 0.0 && (opts.siting == Siting::None || opts.fixed_capacity_mw == Some(0.0)) {
        format!("hydrogen demand {h2} MWh/day cannot be met without P2H capacity")
    } else {
        "no dispatch satisfies every network, ramp, storage and SNSP constraint".into()
    }
}

fn print_kpis(k: &KpiReport) {
    let c = &k.daily_costs_meur;
    println!("daily cost                 {:.6} MEUR", k.daily_cost_meur);
    println!(
        "  fuel {:.6}, emission {:.6}, shedding {:.6}, curtailment {:.6}, investment {:.6} MEUR",
        c.fuel, c.emission, c.shedding, c.curtailment, c.investment
    );
    println!("daily wind curtailment     {:.4} GWh", k.daily_curtailment_gwh);
    println!("daily power CO2            {:.2} t", k.daily_power_co2_t);
    println!("daily aviation CO2         {:.2} t", k.daily_aviation_co2_t);
    println!("P2H capacity               {:.3} MW", k.capacity_mw);
    println!("daily hydrogen             {:.3} MWh", k.daily_h2_mwh);
    if let Some(b) = k.h2_benefit_eur_per_mwh {
        println!("hydrogen benefit           {b:.2} EUR/MWh");
    }
}

pub fn dispatch(a: &DispatchArgs, argv: &[String]) -> CmdResult {
    let t0 = Instant::now();
    let s = load(&a.model)?;
    let plan = plan_for(&a.model)?;
    let mut opts = formulation(&a.model);
    opts.siting = siting(a.no_p2h, &a.p2h_bus);
    let record = ModelRecord {
        formulation: &opts,
        aviation_route: &a.model.route,
    };
    let mut m = manifest("dispatch", argv, &record);
    m.scenario = Some(ScenarioRecord::new(&s, &a.model.scenario)?);
    m.timings_ms.push(("load".into(), ms(t0)));

    let t1 = Instant::now();
    let solver = SolverOptions::default();
    let out = solve_dispatch(&s, &opts, &solver)?;
    m.timings_ms.push(("solve".into(), ms(t1)));
    m.solver = Some(SolverStats::new(&out.model, &out.lp_solution));
    let Some(sol) = out.solution.as_ref() else {
        let status = out.lp_solution.status;
        let f = Failure::from_status(status, &s.name);
        return Err(match f {
            Failure::Infeasible(msg) => Failure::Infeasible(format!("{msg}: {}", infeasible_hint(&s, &opts))),
            other => other,
        });
    };

    let report = audit(&out.model, sol, &s);
    let cost_scale = out.lp_solution.objective.abs().max(1.0);
    if report.max_residual() > RESIDUAL_TOL || report.cost_decomposition > RESIDUAL_TOL * cost_scale {
        return Err(Failure::Numerical(format!("solution audit failed: {report:?}")));
    }

    let baseline = if out.model.has_p2h() && out.model.h2_demand_mwh_per_day > 0.0 {
        let t2 = Instant::now();
        let cfg = SweepConfig {
            formulation: opts.clone(),
            solver: solver.clone(),
            workers: 1,
            plan: plan.clone(),
        };
        let b = analysis::solve_baseline(&s, &cfg).ok();
        m.timings_ms.push(("baseline".into(), ms(t2)));
        b
    } else {
        None
    };
    let k = kpis(&out.model, sol, &s, &plan, baseline.as_ref());

    println!("scenario                   {} ({} steps)", s.name, s.horizon());
    println!("status                     optimal ({} iterations)", out.lp_solution.iterations);
    for p in &sol.plants {
        if let Some(bus) = p.bus {
            println!("P2H plant                  bus {bus}, {:.3} MW", p.capacity_mw);
        }
    }
    print_kpis(&k);
    if baseline.is_none() && out.model.has_p2h() && out.model.h2_demand_mwh_per_day > 0.0 {
        println!("hydrogen benefit           unavailable (no-P2H baseline did not solve)");
    }

    if let Some(dir) = &a.out_dir {
        let mut o = OutDir::create(dir)?;
        #[derive(Serialize)]
        struct Summary<'a> {
            kpis: &'a KpiReport,
            baseline: Option<&'a KpiReport>,
            audit: &'a p2h_core::formulation::AuditReport,
        }
        o.write_json(
            "kpis.json",
            &Summary {
                kpis: &k,
                baseline: baseline.as_ref(),
                audit: &report,
            },
        )?;
        o.write("generation.csv", &generation_table(&s, sol)?)?;
        o.write("buses.csv", &bus_table(&s, sol)?)?;
        o.write("flows.csv", &flow_table(&s, sol)?)?;
        o.write("p2h.csv", &p2h_table(&s, sol)?)?;
        m.timings_ms.push(("total".into(), ms(t0)));
        o.write_manifest(m)?;
    }
    Ok(())
}

/// Parses `1..35`, `3,5,8..10` and similar into an ordered, de-duplicated list.
pub fn parse_bus_list(text: &str) -> CmdResult<Vec<usize>> {
    let bad = || Failure::Data(format!("bad bus list {text:?} (use e.g. 1..35 or 3,5,8..10)"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if b < a {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|b| seen.insert(*b));
    Ok(out)
}

/// Parses `start:step:end` or a comma list of fractions.
pub fn parse_levels(text: &str) -> CmdResult<Vec<f64>> {
    let bad = |why: String| Failure::Data(format!("bad SNSP levels {text:?}: {why}"));
    let parts: Vec<&str> = text.split(':').collect();
    let levels = if parts.len() == 3 {
        let v: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(e.to_string()))?;
        level_range(v[0], v[1], v[2]).map_err(|e| bad(e.to_string()))?
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?
    };
    if levels.is_empty() {
        return Err(bad("empty".into()));
    }
    Ok(levels)
}

fn sweep_config(c: &SweepCommon) -> CmdResult<SweepConfig> {
    Ok(SweepConfig {
        formulation: formulation(&c.model),
        solver: SolverOptions::default(),
        workers: c.workers.unwrap_or_else(analysis::workers_from_env),
        plan: plan_for(&c.model)?,
    })
}

fn axis_label(a: &Axis) -> String {
    match a {
        Axis::Bus(b) => format!("bus {b}"),
        Axis::Snsp(l) => format!("SNSP {l}"),
        Axis::Pair(a, b) => format!("buses {a}-{b}"),
    }
}

fn print_sweep(r: &SweepResult) {
    if let Some(b) = &r.baseline {
        println!("baseline (no P2H): cost {:.6} MEUR/day, curtailment {:.4} GWh/day", b.daily_cost_meur, b.daily_curtailment_gwh);
    }
    for p in &r.points {
        match &p.kpi {
            Some(k) => {
                let mut line = format!(
                    "{:<14} {:<10} capacity {:>10.3} MW  cost {:.6} MEUR/day  curtailment {:.4} GWh/day  H2 {:.1} MWh/day",
                    axis_label(&p.axis),
                    p.status,
                    k.capacity_mw,
                    k.daily_cost_meur,
                    k.daily_curtailment_gwh,
                    k.daily_h2_mwh
                );
                if let Some(b) = k.h2_benefit_eur_per_mwh {
                    line.push_str(&format!("  benefit {b:.2} EUR/MWh"));
                }
                println!("{line}");
            }
            None => println!("{:<14} {}", axis_label(&p.axis), p.status),
        }
    }
    if let Some(b) = &r.best {
        println!("best: {}", axis_label(b));
    }
    if let Some(cap) = r.cost_cap_eur {
        println!("cost cap: {cap:.2} EUR over the horizon");
    }
    if let Some(l) = r.plateau_level {
        println!("producible hydrogen flat from SNSP {l}");
    }
}

#[derive(Serialize)]
struct SweepRecord<'a> {
    formulation: &'a FormulationOptions,
    aviation_route: &'a str,
    workers: usize,
    axis: String,
    mode: Option<&'static str>,
    cost_slack: Option<f64>,
    objective: Option<&'static str>,
}

pub fn sweep(kind: &SweepCommand, argv: &[String]) -> CmdResult {
    let t0 = Instant::now();
    let common = match kind {
        SweepCommand::Location { common, .. } | SweepCommand::Snsp { common, .. } | SweepCommand::Pairs { common, .. } => common,
    };
    let s = load(&common.model)?;
    let cfg = sweep_config(common)?;
    let all_buses = || s.buses.iter().map(|b| b.id).collect::<Vec<_>>();
    let mut record = SweepRecord {
        formulation: &cfg.formulation,
        aviation_route: &common.model.route,
        workers: cfg.workers,
        axis: String::new(),
        mode: None,
        cost_slack: None,
        objective: None,
    };
    let result = match kind {
        SweepCommand::Location { buses, .. } => {
            let list = match buses {
                Some(t) => parse_bus_list(t)?,
                None => all_buses(),
            };
            record.axis = format!("{list:?}");
            sweep_location(&s, &list, &cfg)?
        }
        SweepCommand::Snsp { levels, mode, cost_slack, .. } => {
            let levels = parse_levels(levels)?;
            record.axis = format!("{levels:?}");
            let mode = match mode {
                SnspModeArg::FixedDemand => SnspMode::FixedDemand,
                SnspModeArg::MaxH2 => SnspMode::MaxHydrogen,
            };
            record.mode = Some(match mode {
                SnspMode::FixedDemand => "fixed-demand",
                SnspMode::MaxHydrogen => "max-h2",
            });
            record.cost_slack = Some(*cost_slack);
            sweep_snsp(&s, &levels, mode, *cost_slack, &cfg)?
        }
        SweepCommand::Pairs { candidates, objective, .. } => {
            let list = match candidates {
                Some(t) => parse_bus_list(t)?,
                None => all_buses(),
            };
            record.axis = format!("{list:?}");
            let objective = match objective {
                PairObjectiveArg::Curtailment => PairObjective::Curtailment,
                PairObjectiveArg::Cost => PairObjective::Cost,
            };
            record.objective = Some(match objective {
                PairObjective::Curtailment => "curtailment",
                PairObjective::Cost => "cost",
            });
            sweep_pairs(&s, &list, objective, &cfg)?
        }
    };
    print_sweep(&result);

    if let Some(dir) = &common.out_dir {
        let mut o = OutDir::create(dir)?;
        let mut csv = Vec::new();
        write_sweep_csv(&result, &mut csv)?;
        o.write("sweep.csv", &csv)?;
        o.write("sweep.json", (analysis::sweep_summary_json(&result) + "\n").as_bytes())?;
        let mut m = manifest("sweep", argv, &record);
        m.scenario = Some(ScenarioRecord::new(&s, &common.model.scenario)?);
        m.timings_ms.push(("total".into(), ms(t0)));
        o.write_manifest(m)?;
    }

    if common.strict {
        let failed: Vec<&analysis::SweepPoint> = result.points.iter().filter(|p| p.status != "optimal").collect();
        if let Some(first) = failed.first() {
            let msg = format!("{} of {} points did not solve (first: {}, {})", failed.len(), result.points.len(), axis_label(&first.axis), first.status);
            return Err(if failed.iter().any(|p| p.status.starts_with("error")) {
                Failure::Data(msg)
            } else if failed.iter().all(|p| p.status == "infeasible") {
                Failure::Infeasible(msg)
            } else {
                Failure::Numerical(msg)
            });
        }
    }
    Ok(())
}

pub fn export(a: &ExportArgs, _argv: &[String]) -> CmdResult {
    let s = load(&a.model)?;
    let mut opts = formulation(&a.model);
    opts.siting = siting(a.no_p2h, &a.p2h_bus);
    let model = build(&s, &opts)?;
    write_mps(&model.lp, &a.out).map_err(|e| Failure::Data(e.to_string()))?;
    println!(
        "wrote {} ({} columns, {} rows) and {}",
        a.out.display(),
        model.lp.num_cols(),
        model.lp.num_rows(),
        name_map_path(&a.out).display()
    );
    Ok(())
}
