use p2h_core::formulation::{audit, solve_dispatch, CurtailmentMode, FormulationOptions, Siting};
use p2h_core::scenario::{Bus, Economics, Generator, Line, Profiles, Storage, WindFarm};
use p2h_core::Scenario;
use p2h_lp::{SolverOptions, Status};

fn gen(id: usize, bus: usize, a: f64, b: f64, c: f64, lo: f64, hi: f64) -> Generator {
    Generator {
        id,
        bus,
        cost_a_eur_per_mw2h: a,
        cost_b_eur_per_mwh: b,
        cost_c_eur_per_h: c,
        p_min_mw: lo,
        p_max_mw: hi,
        ramp_up_mw_per_h: 1e4,
        ramp_down_mw_per_h: 1e4,
        emission_rate_t_per_mwh: Some(0.5),
    }
}

fn bus(id: usize, peak: f64) -> Bus {
    Bus {
        id,
        peak_demand_mw: peak,
        angle_min_rad: -0.5,
        angle_max_rad: 0.5,
        has_p2h: false,
    }
}

fn scenario(buses: Vec<Bus>, lines: Vec<Line>, generators: Vec<Generator>, wind: Vec<WindFarm>, factors: Vec<f64>, avail: Vec<f64>) -> Scenario {
    let n = factors.len();
    Scenario {
        name: "hand".into(),
        description: String::new(),
        reference_bus: buses[0].id,
        base_mva: 100.0,
        buses,
        lines,
        generators,
        wind,
        profiles: Profiles {
            steps_per_day: n,
            step_hours: vec![1.0; n],
            demand_factor: factors,
            wind_availability: avail,
            import_mw: vec![0.0; n],
            export_mw: vec![0.0; n],
        },
        economics: Economics {
            emission_price_eur_per_mwh: 7.0,
            shed_price_eur_per_mwh: 5000.0,
            curtailment_price_eur_per_mwh: 30.0,
            p2h_investment_eur_per_mw: 236000.0,
            p2h_amortization_per_day: 1.0 / 7300.0,
            snsp_limit: 1.0,
            h2_demand_mwh_per_day: 0.0,
            default_emission_rate_t_per_mwh: 0.0,
        },
        storage: Storage::default(),
    }
}

fn no_plant(k: usize) -> FormulationOptions {
    FormulationOptions {
        siting: Siting::None,
        segments: k,
        ..Default::default()
    }
}

fn q(g: &Generator, p: f64) -> f64 {
    g.cost_a_eur_per_mw2h * p * p + g.cost_b_eur_per_mwh * p + g.cost_c_eur_per_h
}

/// Copper-plate merit order over chord segments, €/h: must-run at p_min, then
/// the cheapest remaining segments until `residual` is met.
fn merit_order_cost(gens: &[Generator], k: usize, residual: f64) -> f64 {
    let mut cost: f64 = gens.iter().map(|g| q(g, g.p_min_mw)).sum();
    let mut blocks = Vec::new();
    for g in gens {
        let w = (g.p_max_mw - g.p_min_mw) / k as f64;
        for i in 0..k {
            let (s, e) = (g.p_min_mw + i as f64 * w, g.p_min_mw + (i + 1) as f64 * w);
            blocks.push(((q(g, e) - q(g, s)) / (e - s), w));
        }
    }
    blocks.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut rest = residual;
    for (slope, w) in blocks {
        let take = rest.min(w);
        cost += slope * take;
        rest -= take;
    }
    assert!(rest < 1e-9, "oracle ran out of capacity");
    cost
}

#[test]
fn single_bus_matches_merit_order() {
    let gens = vec![
        gen(1, 1, 0.02, 18.0, 100.0, 50.0, 300.0),
        gen(2, 1, 0.005, 30.0, 40.0, 10.0, 250.0),
    ];
    let factors = vec![0.4, 0.7, 1.0, 0.55];
    let avail = vec![0.5, 0.2, 0.9, 0.0];
    let s = scenario(vec![bus(1, 400.0)], vec![], gens.clone(), vec![WindFarm { bus: 1, capacity_mw: 60.0 }], factors.clone(), avail.clone());
    for k in [1, 3, 8] {
        let out = solve_dispatch(&s, &no_plant(k), &SolverOptions::default()).unwrap();
        assert_eq!(out.lp_solution.status, Status::Optimal);
        let mut expected = 0.0;
        for t in 0..4 {
            let load = 400.0 * factors[t];
            let wind = 60.0 * avail[t];
            let thermal = load - wind;
            let must_run: f64 = gens.iter().map(|g| g.p_min_mw).sum();
            expected += merit_order_cost(&gens, k, thermal - must_run) + 7.0 * thermal;
        }
        let got = out.lp_solution.objective;
        assert!((got - expected).abs() <= 1e-7 * expected, "K={k}: {got} vs {expected}");
        let sol = out.solution.unwrap();
        assert!(sol.curtail_mw[0].iter().all(|c| c.abs() < 1e-7));
        assert!(audit(&out.model, &sol, &s).passes(1e-6));
    }
}

#[test]
fn congested_line_splits_dispatch() {
    let gens = vec![gen(1, 1, 0.0, 20.0, 10.0, 0.0, 500.0), gen(2, 2, 0.0, 50.0, 5.0, 0.0, 500.0)];
    let line = Line {
        from_bus: 1,
        to_bus: 2,
        susceptance_pu: 10.0,
        thermal_limit_mw: 100.0,
    };
    let s = scenario(vec![bus(1, 0.0), bus(2, 300.0)], vec![line], gens, vec![], vec![1.0], vec![0.0]);
    let out = solve_dispatch(&s, &no_plant(2), &SolverOptions::default()).unwrap();
    let sol = out.solution.unwrap();
    assert!((sol.generation_mw[0][0] - 100.0).abs() < 1e-7);
    assert!((sol.generation_mw[1][0] - 200.0).abs() < 1e-7);
    assert!((sol.flow_forward_mw[0][0] - 100.0).abs() < 1e-7);
    assert!((sol.flow_reverse_mw[0][0] + 100.0).abs() < 1e-7);
    // flow = B (theta_from - theta_to) with B = 100 MVA * 10 pu
    assert!((sol.angle_rad[1][0] + 0.1).abs() < 1e-9);
    let expected = 20.0 * 100.0 + 10.0 + 50.0 * 200.0 + 5.0 + 7.0 * 300.0;
    assert!((out.lp_solution.objective - expected).abs() < 1e-6);
}

#[test]
fn toy6_audit_is_clean_for_every_option_set() {
    let s = Scenario::bundled("toy6").unwrap();
    let variants = [
        FormulationOptions { segments: 2, ..Default::default() },
        FormulationOptions { charge_limited_by_capacity: true, ..Default::default() },
        FormulationOptions { curtailment: CurtailmentMode::Inequality, ..Default::default() },
        FormulationOptions { siting: Siting::Buses(vec![2, 6]), ..Default::default() },
        FormulationOptions { interconnector_bus: Some(1), ..Default::default() },
    ];
    for opts in variants {
        let out = solve_dispatch(&s, &opts, &SolverOptions::default()).unwrap();
        assert_eq!(out.lp_solution.status, Status::Optimal, "{opts:?}");
        let sol = out.solution.as_ref().unwrap();
        let r = audit(&out.model, sol, &s);
        assert!(r.passes(1e-6), "{opts:?}: {r:?}");
        assert!((sol.costs.total() - out.lp_solution.objective).abs() <= 1e-6 * out.lp_solution.objective);
    }
}

#[test]
fn inequality_closure_never_pays_for_curtailment() {
    let s = Scenario::bundled("toy6").unwrap();
    let opts = FormulationOptions {
        curtailment: CurtailmentMode::Inequality,
        ..Default::default()
    };
    let sol = solve_dispatch(&s, &opts, &SolverOptions::default()).unwrap().solution.unwrap();
    assert!(sol.costs.curtailment.abs() < 1e-9);
}

#[test]
fn feasibility_logic() {
    let s = Scenario::bundled("toy6").unwrap();
    let solver = SolverOptions::default();
    let closed = FormulationOptions {
        fixed_capacity_mw: Some(0.0),
        ..Default::default()
    };
    assert_eq!(solve_dispatch(&s, &closed, &solver).unwrap().lp_solution.status, Status::Infeasible);
    let none = FormulationOptions {
        siting: Siting::None,
        ..Default::default()
    };
    assert_eq!(solve_dispatch(&s, &none, &solver).unwrap().lp_solution.status, Status::Infeasible);

    let idle = FormulationOptions {
        h2_demand_mwh_per_day: Some(0.0),
        ..Default::default()
    };
    let out = solve_dispatch(&s, &idle, &solver).unwrap();
    assert_eq!(out.lp_solution.status, Status::Optimal);
    assert!(out.solution.unwrap().total_capacity_mw().abs() < 1e-6);
}

#[test]
fn expensive_shedding_is_never_used() {
    let mut s = Scenario::bundled("toy6").unwrap();
    let max_marginal = s
        .generators
        .iter()
        .map(|g| 2.0 * g.cost_a_eur_per_mw2h * g.p_max_mw + g.cost_b_eur_per_mwh)
        .fold(0.0, f64::max);
    s.economics.shed_price_eur_per_mwh = 10.0 * (max_marginal + s.economics.emission_price_eur_per_mwh);
    let sol = solve_dispatch(&s, &FormulationOptions::default(), &SolverOptions::default())
        .unwrap()
        .solution
        .unwrap();
    let shed: f64 = sol.shed_mw.iter().flatten().sum();
    assert!(shed.abs() < 1e-9, "{shed}");
}

#[test]
fn zero_load_runs_everything_at_minimum() {
    // no load and no wind: must-run output has nowhere to go but the electrolyser
    let mut s = Scenario::bundled("toy6").unwrap();
    s.profiles.demand_factor = vec![0.0; 24];
    s.profiles.wind_availability = vec![0.0; 24];
    let out = solve_dispatch(&s, &FormulationOptions::default(), &SolverOptions::default()).unwrap();
    assert_eq!(out.lp_solution.status, Status::Optimal);
    let sol = out.solution.as_ref().unwrap();
    let must_run: f64 = s.generators.iter().map(|g| g.p_min_mw).sum();
    for (g, p) in s.generators.iter().zip(&sol.generation_mw) {
        assert!(p.iter().all(|x| (x - g.p_min_mw).abs() < 1e-7));
    }
    for t in 0..24 {
        assert!((sol.charge_at(t) - must_run).abs() < 1e-7);
    }
    let xi = sol.total_capacity_mw();
    assert!((xi - 600.0 / 24.0).abs() < 1e-7, "{xi}");
    let e = &s.economics;
    let expected: f64 = 24.0 * s.generators.iter().map(|g| q(g, g.p_min_mw) + e.emission_price_eur_per_mwh * g.p_min_mw).sum::<f64>()
        + xi * e.p2h_investment_eur_per_mw * e.p2h_amortization_per_day;
    assert!((out.lp_solution.objective - expected).abs() < 1e-6 * expected);
    assert!(audit(&out.model, sol, &s).passes(1e-6));
}

#[test]
fn two_plants_share_the_daily_demand() {
    let s = Scenario::bundled("toy6").unwrap();
    let opts = FormulationOptions {
        siting: Siting::Buses(vec![3, 5]),
        ..Default::default()
    };
    let sol = solve_dispatch(&s, &opts, &SolverOptions::default()).unwrap().solution.unwrap();
    assert_eq!(sol.plants.len(), 2);
    assert_eq!(sol.plants[0].bus, Some(3));
    assert!(sol.hydrogen_mwh(&s) >= 600.0 - 1e-6);
}

#[test]
fn ramp_limits_bind_across_steps() {
    let mut s = Scenario::bundled("toy6").unwrap();
    for g in &mut s.generators {
        g.ramp_up_mw_per_h = 15.0;
        g.ramp_down_mw_per_h = 15.0;
    }
    let out = solve_dispatch(&s, &FormulationOptions::default(), &SolverOptions::default()).unwrap();
    let sol = out.solution.as_ref().unwrap();
    for p in &sol.generation_mw {
        for w in p.windows(2) {
            assert!((w[1] - w[0]).abs() <= 15.0 + 1e-7);
        }
    }
    assert!(audit(&out.model, sol, &s).passes(1e-6));
}
