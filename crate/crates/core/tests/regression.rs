//! Drift tests against values pinned from the bundled scenarios.
//!
//! Run with `P2H_BLESS=1` to rewrite `snapshots/regression.json` after an
//! intentional model change.

use std::collections::BTreeMap;
use std::path::PathBuf;

use p2h_core::analysis::{kpis, reference_plan, KpiReport};
use p2h_core::formulation::{solve_dispatch, FormulationOptions, Siting};
use p2h_core::Scenario;
use p2h_lp::SolverOptions;

const REL_TOL: f64 = 1e-6;

fn snapshot_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots/regression.json")
}

fn run(s: &Scenario, opts: FormulationOptions) -> KpiReport {
    let out = solve_dispatch(s, &opts, &SolverOptions::default()).unwrap();
    let sol = out.solution.expect("optimal");
    kpis(&out.model, &sol, s, &reference_plan(), None)
}

fn figures(prefix: &str, k: &KpiReport, into: &mut BTreeMap<String, f64>) {
    into.insert(format!("{prefix}.daily_cost_meur"), k.daily_cost_meur);
    into.insert(format!("{prefix}.daily_curtailment_gwh"), k.daily_curtailment_gwh);
    into.insert(format!("{prefix}.daily_power_co2_t"), k.daily_power_co2_t);
    into.insert(format!("{prefix}.capacity_mw"), k.capacity_mw);
}

fn current() -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    let no_p2h = || FormulationOptions {
        siting: Siting::None,
        h2_demand_mwh_per_day: Some(0.0),
        ..Default::default()
    };
    let toy = Scenario::bundled("toy6").unwrap();
    figures("toy6.base", &run(&toy, FormulationOptions::default()), &mut m);
    figures("toy6.no_p2h", &run(&toy, no_p2h()), &mut m);
    let k2 = FormulationOptions {
        segments: 2,
        ..Default::default()
    };
    figures("toy6.k2", &run(&toy, k2), &mut m);
    let ire = Scenario::bundled("ireland35").unwrap().with_horizon(24).unwrap();
    figures("ireland35_t24.base", &run(&ire, FormulationOptions::default()), &mut m);
    figures("ireland35_t24.no_p2h", &run(&ire, no_p2h()), &mut m);
    m
}

#[test]
fn bundled_scenarios_match_snapshots() {
    let now = current();
    let path = snapshot_path();
    if std::env::var_os("P2H_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&now).unwrap() + "\n").unwrap();
        return;
    }
    let pinned: BTreeMap<String, f64> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(pinned.keys().collect::<Vec<_>>(), now.keys().collect::<Vec<_>>());
    for (key, want) in &pinned {
        let got = now[key];
        assert!(
            (got - want).abs() <= REL_TOL * want.abs().max(1.0),
            "{key}: {got} drifted from {want}"
        );
    }
}
