#!/usr/bin/env python3
"""Regenerates the bundled ireland35 scenario.

Published data: generator capacities and buses, bus peak demands, wind farm
sizes, SNSP 70 %, hydrogen demand 2353.1 MWh/day, P2H capital cost 236000 EUR/MW.
Everything else (cost coefficients, ramps, network parameters, hourly profiles)
is synthetic and produced deterministically below.

usage: python3 scripts/gen_ireland35.py [output-dir]
"""
import math
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "crates/core/data/scenarios/ireland35"

GENERATORS = [  # (capacity MW, bus)
    (90, 1), (90, 1), (431, 1), (405, 22), (61, 19), (118, 17), (58, 17), (58, 17),
    (431, 6), (342, 23), (408, 23), (17, 32), (91, 21), (285, 14), (285, 14), (285, 14),
    (104, 27), (230, 22), (230, 22), (52, 16), (52, 16), (81, 15), (81, 15), (54, 9),
    (54, 9), (241, 9), (241, 9), (52, 10), (52, 10), (400, 8), (137, 13), (444, 2),
]

PEAK = {
    1: 175.65, 2: 7.75, 3: 224.74, 4: 61.12, 5: 220.42, 6: 28.31, 7: 110.21, 9: 74.05,
    10: 190.30, 11: 87.22, 12: 144.65, 13: 15.07, 15: 269.50, 16: 188.55, 17: 51.66,
    19: 348.70, 20: 346.98, 21: 229.03, 22: 567.41, 23: 60.27, 25: 242.81, 26: 224.74,
    27: 219.56, 28: 292.75, 29: 103.31, 30: 256.57, 31: 222.99, 32: 172.19, 33: 124.85,
    35: 138.64,
}

WIND = [(12, 611), (14, 648), (15, 666), (25, 537), (27, 629), (29, 537), (30, 574)]

# technology class by unit size: (a, b, c, pmin share, ramp share per hour, tCO2/MWh)
CLASSES = [
    (400, "combined cycle", 0.0008, 34.0, 900.0, 0.40, 0.50, 0.37),
    (200, "steam (coal/peat)", 0.0012, 41.0, 600.0, 0.35, 0.30, 0.95),
    (80, "open cycle gas", 0.004, 62.0, 150.0, 0.0, 1.0, 0.60),
    (0, "distillate peaker", 0.01, 85.0, 60.0, 0.0, 1.0, 0.75),
]


def tech(cap):
    for floor, *rest in CLASSES:
        if cap >= floor:
            return rest
    raise ValueError(cap)


def grid_lines():
    """Buses on a 7 x 5 grid (row-major, bus 1 top-left): all horizontal links,
    vertical links on alternate columns, plus a few diagonals."""
    pos = lambda b: divmod(b - 1, 5)
    bus = lambda r, c: r * 5 + c + 1
    lines = []
    for r in range(7):
        for c in range(4):
            lines.append((bus(r, c), bus(r, c + 1)))
    for r in range(6):
        for c in (0, 2, 4):
            lines.append((bus(r, c), bus(r + 1, c)))
    for a, b in [(2, 8), (7, 13), (12, 18), (17, 23), (22, 28), (27, 33), (9, 15), (24, 30), (29, 35)]:
        lines.append((a, b))
    out = []
    wind_buses = {b for b, _ in WIND}
    for i, (a, b) in enumerate(lines):
        susceptance = 40.0 + 20.0 * (i * 7 % 4)
        if a in wind_buses or b in wind_buses:
            limit = 450.0
        elif 22 in (a, b) or 18 in (a, b):
            limit = 1100.0
        else:
            limit = 700.0
        out.append((a, b, susceptance, limit))
    return out


def profiles():
    shape = [0.62, 0.60, 0.60, 0.61, 0.64, 0.70, 0.78, 0.86, 0.90, 0.91, 0.92, 0.92,
             0.91, 0.90, 0.89, 0.90, 0.94, 1.00, 0.99, 0.95, 0.88, 0.80, 0.72, 0.66]
    rows = []
    for t in range(240):
        d, h = divmod(t, 24)
        demand = shape[h] * (0.93 + 0.07 * math.cos(2 * math.pi * d / 7))
        wind = 0.52 + 0.33 * math.sin(2 * math.pi * t / 83 + 0.6) + 0.08 * math.sin(2 * math.pi * t / 19)
        wind = min(0.95, max(0.05, wind))
        imp = max(0.0, 220 + 180 * math.sin(2 * math.pi * (t + 5) / 31))
        exp = max(0.0, 120 + 140 * math.cos(2 * math.pi * t / 47))
        rows.append((t + 1, round(demand, 4), round(wind, 4), round(imp, 1), round(exp, 1)))
    return rows


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    w = []
    w.append('name = "ireland35"')
    w.append('description = "35-bus representation of the Irish transmission system. Generator capacities and buses, bus peak demands, '
             'wind farm sizes, SNSP limit, hydrogen demand and P2H capital cost are published values; cost coefficients, ramp rates, '
             'emission rates, line parameters and the 240-step profiles are synthetic (see scripts/gen_ireland35.py). '
             'Buses 8, 14, 18, 24 and 34 have no published demand and are zero-demand buses."')
    w.append("reference_bus = 18")
    w.append("base_mva = 100.0")
    w.append("")
    for b in range(1, 36):
        w.append("[[buses]]")
        w.append(f"id = {b}")
        w.append(f"peak_demand_mw = {PEAK.get(b, 0.0)!r}")
        if b == 22:
            w.append("has_p2h = true")
        w.append("")
    for a, b, s, lim in grid_lines():
        w.append("[[lines]]")
        w.append(f"from_bus = {a}")
        w.append(f"to_bus = {b}")
        w.append(f"susceptance_pu = {s!r}")
        w.append(f"thermal_limit_mw = {lim!r}")
        w.append("")
    for i, (cap, bus) in enumerate(GENERATORS, start=1):
        name, a, b, c, pmin, ramp, er = tech(cap)
        w.append(f"# {name}")
        w.append("[[generators]]")
        w.append(f"id = {i}")
        w.append(f"bus = {bus}")
        w.append(f"cost_a_eur_per_mw2h = {a!r}")
        w.append(f"cost_b_eur_per_mwh = {round(b + 0.25 * (i % 5), 2)!r}")
        w.append(f"cost_c_eur_per_h = {c!r}")
        w.append(f"p_min_mw = {round(pmin * cap, 1)!r}")
        w.append(f"p_max_mw = {float(cap)!r}")
        w.append(f"ramp_up_mw_per_h = {round(ramp * cap, 1)!r}")
        w.append(f"ramp_down_mw_per_h = {round(ramp * cap, 1)!r}")
        w.append(f"emission_rate_t_per_mwh = {er!r}")
        w.append("")
    for bus, cap in WIND:
        w.append("[[wind]]")
        w.append(f"bus = {bus}")
        w.append(f"capacity_mw = {float(cap)!r}")
        w.append("")
    w.append("[profiles]")
    w.append('file = "profiles.csv"')
    w.append("steps_per_day = 24")
    w.append("step_hours = 1.0")
    w.append("")
    w.append("[economics]")
    w.append("emission_price_eur_per_mwh = 15.0")
    w.append("shed_price_eur_per_mwh = 3000.0")
    w.append("curtailment_price_eur_per_mwh = 60.0")
    w.append("p2h_investment_eur_per_mw = 236000.0")
    w.append("# daily share of the capital cost over a 20-year life, 1 / (20 * 365)")
    w.append(f"p2h_amortization_per_day = {1 / (20 * 365)!r}")
    w.append("snsp_limit = 0.7")
    w.append("h2_demand_mwh_per_day = 2353.1")
    w.append("default_emission_rate_t_per_mwh = 0.6")
    w.append("")
    w.append("[storage]")
    w.append("soc_initial_mwh = 0.0")
    w.append("cyclic = false")
    w.append("charge_efficiency = 1.0")
    (OUT / "scenario.toml").write_text("\n".join(w) + "\n")

    lines = ["step,demand_factor,wind_availability,import_mw,export_mw"]
    lines += [",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in profiles()]
    (OUT / "profiles.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
