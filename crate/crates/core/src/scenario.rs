//! Scenario schema: network, generators, wind, time series and economics.
//!
//! A scenario is a TOML document. Profiles are either inline arrays or a
//! sibling CSV file named by `profiles.file`. See `docs/scenario-format.md`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

const TOY6_TOML: &str = include_str!("../data/scenarios/toy6.toml");
const IRELAND35_TOML: &str = include_str!("../data/scenarios/ireland35/scenario.toml");
const IRELAND35_PROFILES: &str = include_str!("../data/scenarios/ireland35/profiles.csv");

pub const BUNDLED: [&str; 2] = ["toy6", "ireland35"];

pub const DEFAULT_ANGLE_LIMIT_RAD: f64 = 0.5;
/// Daily share of the capital cost over a 20-year plant life.
pub const DEFAULT_AMORTIZATION_PER_DAY: f64 = 1.0 / (20.0 * 365.0);

fn default_angle_min() -> f64 {
    -DEFAULT_ANGLE_LIMIT_RAD
}
fn default_angle_max() -> f64 {
    DEFAULT_ANGLE_LIMIT_RAD
}
fn default_base_mva() -> f64 {
    100.0
}
fn default_amortization() -> f64 {
    DEFAULT_AMORTIZATION_PER_DAY
}
fn default_steps_per_day() -> usize {
    24
}
fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bus {
    pub id: usize,
    #[serde(default)]
    pub peak_demand_mw: f64,
    #[serde(default = "default_angle_min")]
    pub angle_min_rad: f64,
    #[serde(default = "default_angle_max")]
    pub angle_max_rad: f64,
    #[serde(default)]
    pub has_p2h: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Line {
    pub from_bus: usize,
    pub to_bus: usize,
    pub susceptance_pu: f64,
    pub thermal_limit_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub id: usize,
    pub bus: usize,
    pub cost_a_eur_per_mw2h: f64,
    pub cost_b_eur_per_mwh: f64,
    pub cost_c_eur_per_h: f64,
    pub p_min_mw: f64,
    pub p_max_mw: f64,
    pub ramp_up_mw_per_h: f64,
    pub ramp_down_mw_per_h: f64,
    /// Falls back to `economics.default_emission_rate_t_per_mwh`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission_rate_t_per_mwh: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindFarm {
    pub bus: usize,
    pub capacity_mw: f64,
}

/// Per-step series; every vector has the horizon length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profiles {
    pub steps_per_day: usize,
    pub step_hours: Vec<f64>,
    pub demand_factor: Vec<f64>,
    pub wind_availability: Vec<f64>,
    pub import_mw: Vec<f64>,
    pub export_mw: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Economics {
    pub emission_price_eur_per_mwh: f64,
    pub shed_price_eur_per_mwh: f64,
    pub curtailment_price_eur_per_mwh: f64,
    pub p2h_investment_eur_per_mw: f64,
    #[serde(default = "default_amortization")]
    pub p2h_amortization_per_day: f64,
    pub snsp_limit: f64,
    pub h2_demand_mwh_per_day: f64,
    #[serde(default)]
    pub default_emission_rate_t_per_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Storage {
    #[serde(default)]
    pub soc_initial_mwh: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soc_max_mwh: Option<f64>,
    /// Require the final state of charge to return to the initial one.
    #[serde(default)]
    pub cyclic: bool,
    #[serde(default = "one")]
    pub charge_efficiency: f64,
}

impl Default for Storage {
    fn default() -> Self {
        Storage {
            soc_initial_mwh: 0.0,
            soc_max_mwh: None,
            cyclic: false,
            charge_efficiency: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub reference_bus: usize,
    pub base_mva: f64,
    pub buses: Vec<Bus>,
    pub lines: Vec<Line>,
    pub generators: Vec<Generator>,
    pub wind: Vec<WindFarm>,
    pub profiles: Profiles,
    pub economics: Economics,
    pub storage: Storage,
}

/// Step duration as written in a file: one value for all steps, or one per step.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StepHours {
    Uniform(f64),
    PerStep(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfilesFile {
    file: Option<String>,
    #[serde(default = "default_steps_per_day")]
    steps_per_day: usize,
    step_hours: Option<StepHours>,
    demand_factor: Option<Vec<f64>>,
    wind_availability: Option<Vec<f64>>,
    import_mw: Option<Vec<f64>>,
    export_mw: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default)]
    description: String,
    reference_bus: usize,
    #[serde(default = "default_base_mva")]
    base_mva: f64,
    buses: Vec<Bus>,
    #[serde(default)]
    lines: Vec<Line>,
    #[serde(default)]
    generators: Vec<Generator>,
    #[serde(default)]
    wind: Vec<WindFarm>,
    profiles: ProfilesFile,
    economics: Economics,
    #[serde(default)]
    storage: Storage,
}

#[derive(Debug, Deserialize)]
struct ProfileRow {
    #[allow(dead_code)]
    step: usize,
    demand_factor: f64,
    wind_availability: f64,
    #[serde(default)]
    import_mw: f64,
    #[serde(default)]
    export_mw: f64,
    step_hours: Option<f64>,
}

fn parse_profile_csv(text: &str, origin: &str) -> Result<Vec<ProfileRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<ProfileRow>, _>>()
        .map_err(|e| CoreError::Parse {
            origin: origin.to_string(),
            msg: e.to_string(),
        })
}

fn resolve_profiles(
    p: ProfilesFile,
    origin: &str,
    read_file: &dyn Fn(&str) -> Result<String>,
) -> Result<Profiles> {
    let parse_err = |msg: String| CoreError::Parse {
        origin: origin.to_string(),
        msg,
    };
    let (demand, wind, import, export, csv_hours) = if let Some(file) = &p.file {
        if p.demand_factor.is_some() || p.wind_availability.is_some() {
            return Err(parse_err("profiles: give either `file` or inline series, not both".into()));
        }
        let rows = parse_profile_csv(&read_file(file)?, file)?;
        let hours: Option<Vec<f64>> = rows.iter().map(|r| r.step_hours).collect();
        (
            rows.iter().map(|r| r.demand_factor).collect::<Vec<_>>(),
            rows.iter().map(|r| r.wind_availability).collect::<Vec<_>>(),
            rows.iter().map(|r| r.import_mw).collect::<Vec<_>>(),
            rows.iter().map(|r| r.export_mw).collect::<Vec<_>>(),
            hours,
        )
    } else {
        let demand = p
            .demand_factor
            .ok_or_else(|| parse_err("profiles: missing `demand_factor`".into()))?;
        let wind = p
            .wind_availability
            .ok_or_else(|| parse_err("profiles: missing `wind_availability`".into()))?;
        let n = demand.len();
        (
            demand,
            wind,
            p.import_mw.unwrap_or_else(|| vec![0.0; n]),
            p.export_mw.unwrap_or_else(|| vec![0.0; n]),
            None,
        )
    };
    let n = demand.len();
    let step_hours = match (p.step_hours, csv_hours) {
        (Some(StepHours::Uniform(h)), _) => vec![h; n],
        (Some(StepHours::PerStep(v)), _) => v,
        (None, Some(v)) => v,
        (None, None) => vec![1.0; n],
    };
    Ok(Profiles {
        steps_per_day: p.steps_per_day,
        step_hours,
        demand_factor: demand,
        wind_availability: wind,
        import_mw: import,
        export_mw: export,
    })
}

/// Parses scenario text; `read_file` supplies sibling files named inside it.
pub fn parse_scenario_with(
    text: &str,
    origin: &str,
    read_file: &dyn Fn(&str) -> Result<String>,
) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| CoreError::Parse {
        origin: origin.to_string(),
        msg: e.to_string(),
    })?;
    let profiles = resolve_profiles(file.profiles, origin, read_file)?;
    let s = Scenario {
        name: file.name,
        description: file.description,
        reference_bus: file.reference_bus,
        base_mva: file.base_mva,
        buses: file.buses,
        lines: file.lines,
        generators: file.generators,
        wind: file.wind,
        profiles,
        economics: file.economics,
        storage: file.storage,
    };
    let violations = validate(&s);
    if violations.is_empty() {
        Ok(s)
    } else {
        Err(CoreError::Invalid {
            origin: origin.to_string(),
            violations,
        })
    }
}

/// Parses scenario text whose profile files (if any) live in `base_dir`.
pub fn parse_scenario(text: &str, origin: &str, base_dir: Option<&Path>) -> Result<Scenario> {
    let read = |name: &str| -> Result<String> {
        let path = base_dir.map(|d| d.join(name)).unwrap_or_else(|| name.into());
        std::fs::read_to_string(&path).map_err(|source| CoreError::Io { path, source })
    };
    parse_scenario_with(text, origin, &read)
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| CoreError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, &path.display().to_string(), path.parent())
}

/// Canonical text form: every field explicit, profiles inline.
pub fn to_toml_string(s: &Scenario) -> Result<String> {
    toml::to_string(s).map_err(|e| CoreError::Parse {
        origin: s.name.clone(),
        msg: e.to_string(),
    })
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<()> {
    std::fs::write(path, to_toml_string(s)?).map_err(|source| CoreError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Lists every violated invariant; empty when the scenario is usable.
pub fn validate(s: &Scenario) -> Vec<String> {
    let mut v = Vec::new();
    let finite = |x: f64| x.is_finite();

    let mut ids = HashSet::new();
    for b in &s.buses {
        if !ids.insert(b.id) {
            v.push(format!("bus {}: duplicate id", b.id));
        }
        if !(finite(b.angle_min_rad) && finite(b.angle_max_rad)) || b.angle_min_rad > b.angle_max_rad {
            v.push(format!(
                "bus {}: angle limits [{}, {}] are not an interval",
                b.id, b.angle_min_rad, b.angle_max_rad
            ));
        }
        if !(finite(b.peak_demand_mw) && b.peak_demand_mw >= 0.0) {
            v.push(format!("bus {}: peak demand {} must be >= 0", b.id, b.peak_demand_mw));
        }
    }
    if !ids.contains(&s.reference_bus) {
        v.push(format!("reference bus {}: unknown bus", s.reference_bus));
    } else if let Some(b) = s.buses.iter().find(|b| b.id == s.reference_bus) {
        if b.angle_min_rad > 0.0 || b.angle_max_rad < 0.0 {
            v.push(format!("reference bus {}: angle limits exclude 0", b.id));
        }
    }
    if !(finite(s.base_mva) && s.base_mva > 0.0) {
        v.push(format!("base_mva {} must be > 0", s.base_mva));
    }

    for (i, l) in s.lines.iter().enumerate() {
        let tag = format!("line {} ({}-{})", i + 1, l.from_bus, l.to_bus);
        for end in [l.from_bus, l.to_bus] {
            if !ids.contains(&end) {
                v.push(format!("{tag}: unknown bus {end}"));
            }
        }
        if l.from_bus == l.to_bus {
            v.push(format!("{tag}: connects a bus to itself"));
        }
        if !(finite(l.thermal_limit_mw) && l.thermal_limit_mw > 0.0) {
            v.push(format!("{tag}: thermal limit {} must be > 0", l.thermal_limit_mw));
        }
        if !finite(l.susceptance_pu) || l.susceptance_pu == 0.0 {
            v.push(format!("{tag}: susceptance must be nonzero"));
        }
    }

    let mut gen_ids = HashSet::new();
    for g in &s.generators {
        let tag = format!("generator g{}", g.id);
        if !gen_ids.insert(g.id) {
            v.push(format!("{tag}: duplicate id"));
        }
        if !ids.contains(&g.bus) {
            v.push(format!("{tag}: unknown bus {}", g.bus));
        }
        let all = [
            g.cost_a_eur_per_mw2h,
            g.cost_b_eur_per_mwh,
            g.cost_c_eur_per_h,
            g.p_min_mw,
            g.p_max_mw,
            g.ramp_up_mw_per_h,
            g.ramp_down_mw_per_h,
        ];
        if !all.iter().all(|x| finite(*x)) {
            v.push(format!("{tag}: non-finite parameter"));
            continue;
        }
        if g.p_min_mw < 0.0 || g.p_max_mw < g.p_min_mw {
            v.push(format!("{tag}: need 0 <= p_min ({}) <= p_max ({})", g.p_min_mw, g.p_max_mw));
        }
        if g.cost_a_eur_per_mw2h < 0.0 {
            v.push(format!("{tag}: quadratic cost coefficient {} makes the cost non-convex", g.cost_a_eur_per_mw2h));
        }
        if g.ramp_up_mw_per_h <= 0.0 || g.ramp_down_mw_per_h <= 0.0 {
            v.push(format!("{tag}: ramp limits must be > 0"));
        }
        if let Some(e) = g.emission_rate_t_per_mwh {
            if !(finite(e) && e >= 0.0) {
                v.push(format!("{tag}: emission rate {e} must be >= 0"));
            }
        }
    }

    let mut wind_buses = HashSet::new();
    for w in &s.wind {
        let tag = format!("wind farm at bus {}", w.bus);
        if !ids.contains(&w.bus) {
            v.push(format!("{tag}: unknown bus {}", w.bus));
        }
        if !wind_buses.insert(w.bus) {
            v.push(format!("{tag}: more than one farm on the bus"));
        }
        if !(finite(w.capacity_mw) && w.capacity_mw > 0.0) {
            v.push(format!("{tag}: capacity {} must be > 0", w.capacity_mw));
        }
    }

    let p = &s.profiles;
    let t = p.demand_factor.len();
    if t == 0 {
        v.push("profiles: empty horizon".into());
    }
    for (name, len) in [
        ("step_hours", p.step_hours.len()),
        ("wind_availability", p.wind_availability.len()),
        ("import_mw", p.import_mw.len()),
        ("export_mw", p.export_mw.len()),
    ] {
        if len != t {
            v.push(format!("profiles: {name} has {len} steps, demand_factor has {t}"));
        }
    }
    if p.steps_per_day == 0 {
        v.push("profiles: steps_per_day must be > 0".into());
    } else if t % p.steps_per_day != 0 {
        v.push(format!(
            "profiles: horizon of {t} steps is not a whole number of {}-step days",
            p.steps_per_day
        ));
    }
    let check = |v: &mut Vec<String>, name: &str, xs: &[f64], ok: &dyn Fn(f64) -> bool, what: &str| {
        if let Some((i, x)) = xs.iter().enumerate().find(|(_, x)| !ok(**x)) {
            v.push(format!("profiles: {name}[{}] = {x} {what}", i + 1));
        }
    };
    check(&mut v, "step_hours", &p.step_hours, &|x| finite(x) && x > 0.0, "must be > 0");
    check(&mut v, "demand_factor", &p.demand_factor, &|x| finite(x) && x >= 0.0, "must be >= 0");
    check(&mut v, "wind_availability", &p.wind_availability, &|x| (0.0..=1.0).contains(&x), "must lie in [0, 1]");
    check(&mut v, "import_mw", &p.import_mw, &|x| finite(x) && x >= 0.0, "must be >= 0");
    check(&mut v, "export_mw", &p.export_mw, &|x| finite(x) && x >= 0.0, "must be >= 0");

    let e = &s.economics;
    for (name, x) in [
        ("emission_price_eur_per_mwh", e.emission_price_eur_per_mwh),
        ("shed_price_eur_per_mwh", e.shed_price_eur_per_mwh),
        ("curtailment_price_eur_per_mwh", e.curtailment_price_eur_per_mwh),
        ("p2h_investment_eur_per_mw", e.p2h_investment_eur_per_mw),
        ("p2h_amortization_per_day", e.p2h_amortization_per_day),
        ("h2_demand_mwh_per_day", e.h2_demand_mwh_per_day),
        ("default_emission_rate_t_per_mwh", e.default_emission_rate_t_per_mwh),
    ] {
        if !(finite(x) && x >= 0.0) {
            v.push(format!("economics: {name} = {x} must be >= 0"));
        }
    }
    if !(e.snsp_limit > 0.0 && e.snsp_limit <= 1.0) {
        v.push(format!("economics: snsp_limit = {} must lie in (0, 1]", e.snsp_limit));
    }

    let st = &s.storage;
    if !(finite(st.soc_initial_mwh) && st.soc_initial_mwh >= 0.0) {
        v.push(format!("storage: soc_initial_mwh = {} must be >= 0", st.soc_initial_mwh));
    }
    if let Some(m) = st.soc_max_mwh {
        if !(finite(m) && m >= st.soc_initial_mwh) {
            v.push(format!("storage: soc_max_mwh = {m} must be >= soc_initial_mwh"));
        }
    }
    if !(st.charge_efficiency > 0.0 && st.charge_efficiency <= 1.0) {
        v.push(format!("storage: charge_efficiency = {} must lie in (0, 1]", st.charge_efficiency));
    }

    if ids.contains(&s.reference_bus) {
        for id in unreachable_buses(s) {
            v.push(format!("bus {id}: unreachable from reference"));
        }
    }
    v
}

fn unreachable_buses(s: &Scenario) -> Vec<usize> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for l in &s.lines {
        adj.entry(l.from_bus).or_default().push(l.to_bus);
        adj.entry(l.to_bus).or_default().push(l.from_bus);
    }
    let mut seen = HashSet::from([s.reference_bus]);
    let mut queue = VecDeque::from([s.reference_bus]);
    while let Some(b) = queue.pop_front() {
        for &n in adj.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    let mut out: Vec<usize> = s.buses.iter().map(|b| b.id).filter(|id| !seen.contains(id)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Sum of bus peak demands, MW.
pub fn peak_demand_total(s: &Scenario) -> f64 {
    s.buses.iter().map(|b| b.peak_demand_mw).sum()
}

impl Scenario {
    /// One of the scenarios shipped with the crate: `toy6` or `ireland35`.
    pub fn bundled(name: &str) -> Result<Scenario> {
        match name {
            "toy6" => parse_scenario_with(TOY6_TOML, "bundled:toy6", &|f| {
                Err(CoreError::Parse {
                    origin: "bundled:toy6".into(),
                    msg: format!("no bundled file {f}"),
                })
            }),
            "ireland35" => parse_scenario_with(IRELAND35_TOML, "bundled:ireland35", &|f| {
                if f == "profiles.csv" {
                    Ok(IRELAND35_PROFILES.to_string())
                } else {
                    Err(CoreError::Parse {
                        origin: "bundled:ireland35".into(),
                        msg: format!("no bundled file {f}"),
                    })
                }
            }),
            other => Err(CoreError::UnknownScenario(other.to_string())),
        }
    }

    pub fn horizon(&self) -> usize {
        self.profiles.demand_factor.len()
    }

    pub fn num_days(&self) -> usize {
        self.horizon() / self.profiles.steps_per_day.max(1)
    }

    /// Step indices belonging to day `d` (0-based).
    pub fn day_steps(&self, d: usize) -> std::ops::Range<usize> {
        let n = self.profiles.steps_per_day;
        d * n..(d + 1) * n
    }

    /// Keeps only the first `steps` steps; `steps` must be a whole number of days.
    pub fn with_horizon(&self, steps: usize) -> Result<Scenario> {
        if steps == 0 || steps > self.horizon() {
            return Err(CoreError::Option(format!(
                "horizon {steps} outside 1..={}",
                self.horizon()
            )));
        }
        let mut s = self.clone();
        let p = &mut s.profiles;
        for series in [
            &mut p.step_hours,
            &mut p.demand_factor,
            &mut p.wind_availability,
            &mut p.import_mw,
            &mut p.export_mw,
        ] {
            series.truncate(steps);
        }
        let violations = validate(&s);
        if violations.is_empty() {
            Ok(s)
        } else {
            Err(CoreError::Invalid {
                origin: format!("{} truncated to {steps} steps", self.name),
                violations,
            })
        }
    }

    pub fn bus_index(&self, id: usize) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    /// Load at bus index `b` in step `t`, MW.
    pub fn demand(&self, b: usize, t: usize) -> f64 {
        self.profiles.demand_factor[t] * self.buses[b].peak_demand_mw
    }

    /// Installed wind per bus index (zero where there is no farm).
    pub fn wind_capacity_by_bus(&self) -> Vec<f64> {
        let mut cap = vec![0.0; self.buses.len()];
        for w in &self.wind {
            if let Some(b) = self.bus_index(w.bus) {
                cap[b] += w.capacity_mw;
            }
        }
        cap
    }

    pub fn emission_rate(&self, g: &Generator) -> f64 {
        g.emission_rate_t_per_mwh
            .unwrap_or(self.economics.default_emission_rate_t_per_mwh)
    }

    /// Bus ids flagged as hosting a P2H plant.
    pub fn p2h_buses(&self) -> Vec<usize> {
        self.buses.iter().filter(|b| b.has_p2h).map(|b| b.id).collect()
    }

    /// Generator counts per bus id, for summaries.
    pub fn generators_by_bus(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for g in &self.generators {
            *m.entry(g.bus).or_insert(0) += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_validate() {
        for name in BUNDLED {
            let s = Scenario::bundled(name).unwrap();
            assert!(validate(&s).is_empty(), "{name}");
        }
        assert!(matches!(Scenario::bundled("nope"), Err(CoreError::UnknownScenario(_))));
    }

    #[test]
    fn ireland35_matches_published_tables() {
        let s = Scenario::bundled("ireland35").unwrap();
        assert_eq!(s.buses.len(), 35);
        assert_eq!(s.generators.len(), 32);
        assert_eq!(s.wind.len(), 7);
        let wind: f64 = s.wind.iter().map(|w| w.capacity_mw).sum();
        assert!((wind - 4200.0).abs() <= 5.0, "wind {wind}");
        assert!((peak_demand_total(&s) - 5400.0).abs() <= 1.0);
        let thermal: f64 = s.generators.iter().map(|g| g.p_max_mw).sum();
        assert_eq!(thermal, 5960.0);
        for zero in [8, 14, 18, 24, 34] {
            let b = &s.buses[s.bus_index(zero).unwrap()];
            assert_eq!(b.peak_demand_mw, 0.0);
        }
        assert_eq!(s.horizon(), 240);
        assert_eq!(s.num_days(), 10);
    }

    #[test]
    fn toy6_totals() {
        let s = Scenario::bundled("toy6").unwrap();
        assert_eq!(s.buses.len(), 6);
        assert_eq!(peak_demand_total(&s), 500.0);
        assert_eq!(s.horizon(), 24);
    }

    #[test]
    fn violations_are_reported_by_name() {
        let mut s = Scenario::bundled("toy6").unwrap();
        s.generators[0].bus = 99;
        s.generators[0].id = 5;
        assert_eq!(validate(&s), vec!["generator g5: unknown bus 99".to_string()]);

        let mut s = Scenario::bundled("toy6").unwrap();
        s.buses.push(Bus {
            id: 12,
            peak_demand_mw: 0.0,
            angle_min_rad: -0.5,
            angle_max_rad: 0.5,
            has_p2h: false,
        });
        assert_eq!(validate(&s), vec!["bus 12: unreachable from reference".to_string()]);

        let mut s = Scenario::bundled("toy6").unwrap();
        s.buses[2].id = s.buses[1].id;
        assert!(validate(&s).iter().any(|m| m.contains("duplicate id")));

        let mut s = Scenario::bundled("toy6").unwrap();
        s.generators[1].cost_a_eur_per_mw2h = -0.1;
        assert!(validate(&s).iter().any(|m| m.contains("non-convex")));
    }

    #[test]
    fn empty_bus_set_has_zero_peak() {
        let mut s = Scenario::bundled("toy6").unwrap();
        s.buses.clear();
        assert_eq!(peak_demand_total(&s), 0.0);
    }

    #[test]
    fn canonical_text_round_trips() {
        for name in BUNDLED {
            let s = Scenario::bundled(name).unwrap();
            let text = to_toml_string(&s).unwrap();
            let back = parse_scenario(&text, "round-trip", None).unwrap();
            assert_eq!(back, s);
            assert_eq!(to_toml_string(&back).unwrap(), text);
        }
    }

    #[test]
    fn truncation_keeps_whole_days() {
        let s = Scenario::bundled("ireland35").unwrap();
        let short = s.with_horizon(24).unwrap();
        assert_eq!(short.horizon(), 24);
        assert_eq!(short.num_days(), 1);
        assert!(s.with_horizon(30).is_err());
        assert!(s.with_horizon(0).is_err());
    }

    #[test]
    fn malformed_text_names_the_problem() {
        let err = parse_scenario("name = 3", "inline", None).unwrap_err();
        assert!(matches!(err, CoreError::Parse { .. }));
        assert!(err.to_string().contains("inline"));
    }
}
