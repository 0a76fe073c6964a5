#!/usr/bin/env python3
"""Writes the synthetic scenario bundles under data/scenarios.

Every bundle is generated from a fixed seed, so rerunning the script
reproduces the shipped files byte for byte.
"""

import argparse
import json
import math
import random
from pathlib import Path

HOURS = 24
D_THIN, P_REF, SUPPLY, PEAK = 0.9, 48.0, 7.5, 850.0

# Typical winter weekday, peak at 18:00 (hour 19).
LOAD_SHAPE = [0.78, 0.74, 0.72, 0.71, 0.72, 0.76, 0.84, 0.92, 0.95, 0.95, 0.94, 0.93,
              0.92, 0.91, 0.91, 0.93, 0.97, 1.00, 1.00, 0.97, 0.93, 0.88, 0.84, 0.80]
SOLAR_SHAPE = [0, 0, 0, 0, 0, 0, 0, 0.05, 0.18, 0.35, 0.5, 0.58,
               0.6, 0.55, 0.42, 0.25, 0.08, 0, 0, 0, 0, 0, 0, 0]


def r(x, nd=3):
    return round(float(x), nd)


def series(unit, values):
    return {"unit": unit, "values": [r(v) for v in values]}


def pipe(pid, a, b, length_km, d, friction=0.01):
    return {"id": pid, "from_node": a, "to_node": b, "length": length_km * 1000.0,
            "diameter": d, "friction": friction, "area": math.pi * d * d / 4.0, "height_change": 0.0}


def gen(gid, bus, tech, p_max, cost, p_min=0.0, ramp=None, min_up=1, min_down=1, startup=0.0):
    ramp = p_max if ramp is None else ramp
    g = {"id": gid, "bus": bus, "tech": tech, "p_max": r(p_max), "p_min_stable": r(p_min),
         "ramp_up": r(ramp), "ramp_down": r(ramp), "min_up": min_up, "min_down": min_down,
         "cost_energy": r(cost), "cost_startup": r(startup), "cost_shutdown": 0.0,
         "gfpp_flag": tech in ("OCGT", "CCGT")}
    if tech == "Pumped storage":
        g["pump_capacity"] = r(p_max)
        g["reservoir"] = r(4 * p_max)
    return g


def write_bundle(root, name, electric, gas, scenario, shares, split):
    d = root / name
    d.mkdir(parents=True, exist_ok=True)
    scenario = {"pathway": scenario.pop("pathway", name), "year": scenario.pop("year", 2025), "hours": HOURS,
                "electric_network": "electric.json", "gas_network": "gas.json", **scenario}
    files = {
        "electric.json": electric,
        "gas.json": gas,
        "scenario.json": scenario,
        "load_snapshot.json": {"unit": "fraction", "shares": normalise(shares)},
        "gas_demand_split.json": {"unit": "fraction", "fractions": normalise(split)},
    }
    for fname, doc in files.items():
        (d / fname).write_text(json.dumps(doc, indent=1) + "\n")


def normalise(weights):
    keys = list(weights)
    total = sum(weights.values())
    out = {k: round(weights[k] / total, 12) for k in keys}
    # Put the rounding residue on the last entry so the fractions sum to one.
    out[keys[-1]] = round(1.0 - sum(out[k] for k in keys[:-1]), 12)
    return out


def gas_doc(nodes, pipes, compressors, injectors, reference, coupling, p_min=38.0, p_max=95.0):
    return {
        "properties": {"sound_speed": 350.0, "gas_constant_b": 0.0, "gravity": 9.81,
                       "temperature": 288.15, "standard_density": 0.7165},
        "nodes": [{"id": n, "p_min": p_min, "p_max": p_max, "elevation": 0.0} for n in nodes],
        "pipes": pipes,
        "compressors": compressors,
        "injectors": injectors,
        "reference": {"node": reference[0], "pressure": reference[1]},
        "coupling": coupling,
    }


def compressor(cid, a, b, ratio, drive="gas", bus=None):
    c = {"id": cid, "from_node": a, "to_node": b, "pressure_ratio": ratio, "rated_power": 50.0, "drive": drive}
    if bus:
        c["electric_bus"] = bus
    return c


def kgs_to_mcmd(kgs):
    return kgs * 86400.0 / (1e6 * 0.7165)


# ---------------------------------------------------------------------------


def gas10(root):
    """Ten-node network with a loop, one compressor, a terminal and a storage."""
    nodes = [f"N{i}" for i in range(1, 11)]
    pipes = [
        pipe("P1", "N1", "N2", 60, 0.9), pipe("P2", "N2", "N3", 50, 0.9), pipe("P3", "N3", "N4", 40, 0.75),
        pipe("P4", "N2", "N5", 45, 0.75), pipe("P5", "N5", "N4", 35, 0.6), pipe("P6", "N6", "N7", 55, 0.75),
        pipe("P7", "N7", "N8", 40, 0.6), pipe("P8", "N7", "N9", 30, 0.6), pipe("P9", "N9", "N10", 25, 0.6),
    ]
    comps = [compressor("K1", "N4", "N6", 1.15)]
    inj = [{"id": "T1", "node": "N1", "kind": "terminal", "nominal_capacity": 160.0, "scheduled_rate": 120.0},
           {"id": "S1", "node": "N5", "kind": "storage", "nominal_capacity": 60.0, "scheduled_rate": 40.0}]
    coupling = [{"generator": "G1", "gas_node": "N8", "efficiency": 0.55, "hhv": 50e6},
                {"generator": "G2", "gas_node": "N10", "efficiency": 0.38, "hhv": 50e6}]
    gas = gas_doc(nodes, pipes, comps, inj, ("N1", 70.0), coupling)
    electric = {"base_mva": 100.0, "buses": [{"id": "B1", "reference": True}], "lines": [],
                "generators": [gen("G1", "B1", "CCGT", 800, 30, p_min=200, ramp=400),
                               gen("G2", "B1", "OCGT", 300, 70),
                               gen("G3", "B1", "Nuclear", 600, 8, p_min=600, ramp=0)],
                "clusters": [{"id": "W1", "bus": "B1", "kind": "Wind", "capacity": 400.0,
                              "curtailment_cost": 0.0, "resource_weight": 0.0}],
                "interconnectors": []}
    # Firm demand 120 kg/s of the 160 injected; the GFPPs burn the rest on average.
    firm = 120.0
    scenario = {
        "capacity": {"unit": "MW", "values": {}},
        "load": series("MW", [1500 * s for s in LOAD_SHAPE]),
        "wind": series("MW", [200 + 100 * math.sin(2 * math.pi * t / 24) for t in range(HOURS)]),
        "solar": series("MW", [0] * HOURS),
        "gas_demand": {"unit": "mcm/d", "value": r(kgs_to_mcmd(firm), 6)},
        "reserve": {"unit": "MW", "value": 100.0},
    }
    split = {"N3": 2, "N4": 1, "N5": 1, "N8": 2, "N9": 1, "N10": 1}
    write_bundle(root, "gas10", electric, gas, scenario, {"B1": 1.0}, split)


def tight_gas(root):
    """Gas-fired plants in one low-friction zone whose daily burn exceeds the
    terminal's supply, so linepack drains toward minimum pressure by evening
    unless some gas-fired output moves to coal."""
    nodes = ["N1", "N2", "N3", "N4"]
    pipes = [pipe("P1", "N1", "N2", 40, D_THIN), pipe("P2", "N2", "N3", 40, D_THIN),
             pipe("P3", "N3", "N4", 40, D_THIN)]
    comps = []
    inj = [{"id": "T1", "node": "N1", "kind": "terminal", "nominal_capacity": 40.0, "scheduled_rate": SUPPLY}]
    coupling = [{"generator": "G1", "gas_node": "N3", "efficiency": 0.5, "hhv": 50e6},
                {"generator": "G2", "gas_node": "N4", "efficiency": 0.4, "hhv": 50e6}]
    gas = gas_doc(nodes, pipes, comps, inj, ("N1", P_REF), coupling)
    electric = {"base_mva": 100.0,
                "buses": [{"id": "B1", "reference": True}, {"id": "B2", "reference": False},
                          {"id": "B3", "reference": False}],
                "lines": [{"id": "L1", "from_bus": "B1", "to_bus": "B2", "rating": 800.0, "reactance": 0.1},
                          {"id": "L2", "from_bus": "B2", "to_bus": "B3", "rating": 800.0, "reactance": 0.1},
                          {"id": "L3", "from_bus": "B1", "to_bus": "B3", "rating": 800.0, "reactance": 0.1}],
                "generators": [gen("G1", "B1", "CCGT", 500, 20), gen("G2", "B2", "OCGT", 200, 60),
                               gen("G3", "B3", "Coal", 400, 45), gen("G4", "B3", "Nuclear", 400, 8, p_min=400, ramp=0),
                               gen("G5", "B2", "Oil", 200, 90)],
                "clusters": [], "interconnectors": []}
    scenario = {
        "capacity": {"unit": "MW", "values": {}},
        "load": series("MW", [PEAK * s for s in LOAD_SHAPE]),
        "wind": series("MW", [0] * HOURS),
        "solar": series("MW", [0] * HOURS),
        "gas_demand": {"unit": "kg/s", "value": 1.0},
        "reserve": {"unit": "MW", "value": 0.0},
    }
    write_bundle(root, "tight_gas", electric, gas, scenario, {"B1": 0.3, "B2": 0.3, "B3": 0.4}, {"N2": 1.0})


def security_small(root):
    """Six-bus ring with a radial spur, coupled to a seven-node gas system."""
    buses = [f"B{i}" for i in range(1, 8)]
    lines = []
    ring = [("B1", "B2"), ("B2", "B3"), ("B3", "B4"), ("B4", "B5"), ("B5", "B6"), ("B6", "B1"), ("B2", "B5")]
    for i, (a, b) in enumerate(ring, 1):
        lines.append({"id": f"L{i}", "from_bus": a, "to_bus": b, "rating": 900.0, "reactance": 0.1})
    lines.append({"id": "L8", "from_bus": "B4", "to_bus": "B7", "rating": 400.0, "reactance": 0.2})
    gens = [gen("G1", "B1", "Nuclear", 900, 8, p_min=700, ramp=100),
            gen("G2", "B2", "CCGT", 600, 28, p_min=150, min_up=2, min_down=2, startup=6000),
            gen("G3", "B3", "CCGT", 450, 31, p_min=120, min_up=2, min_down=2, startup=5000),
            gen("G4", "B5", "Coal", 500, 45, p_min=150, min_up=3, min_down=3, startup=9000),
            gen("G5", "B6", "OCGT", 200, 80, startup=500),
            gen("G6", "B6", "Hydro", 250, 5),
            gen("G7", "B7", "Oil", 100, 120),
            gen("G8", "B4", "Bio/Lignite", 200, 40, p_min=60)]
    clusters = [{"id": "W1", "bus": "B1", "kind": "Wind", "capacity": 600.0, "curtailment_cost": 0.0, "resource_weight": 0.0},
                {"id": "W2", "bus": "B5", "kind": "Wind", "capacity": 400.0, "curtailment_cost": 0.0, "resource_weight": 0.0},
                {"id": "S1", "bus": "B3", "kind": "Solar", "capacity": 300.0, "curtailment_cost": 0.0, "resource_weight": 0.0}]
    electric = {"base_mva": 100.0, "buses": [{"id": b, "reference": b == "B1"} for b in buses],
                "lines": lines, "generators": gens, "clusters": clusters,
                "interconnectors": [{"id": "IC1", "bus": "B6"}]}
    nodes = [f"N{i}" for i in range(1, 8)]
    pipes = [pipe("P1", "N1", "N2", 50, 0.75), pipe("P2", "N2", "N3", 50, 0.6), pipe("P3", "N2", "N4", 40, 0.6),
             pipe("P4", "N5", "N6", 40, 0.6), pipe("P5", "N6", "N7", 30, 0.5)]
    comps = [compressor("K1", "N4", "N5", 1.2, drive="electric", bus="B3"), compressor("K2", "N3", "N7", 1.1)]
    inj = [{"id": "T1", "node": "N1", "kind": "terminal", "nominal_capacity": 80.0, "scheduled_rate": 60.0}]
    coupling = [{"generator": "G2", "gas_node": "N3", "efficiency": 0.52, "hhv": 50e6},
                {"generator": "G3", "gas_node": "N6", "efficiency": 0.5, "hhv": 50e6},
                {"generator": "G5", "gas_node": "N4", "efficiency": 0.36, "hhv": 50e6}]
    gas = gas_doc(nodes, pipes, comps, inj, ("N1", 70.0), coupling)
    peak = 3500.0
    scenario = {
        "capacity": {"unit": "MW", "values": {}},
        "load": series("MW", [peak * s for s in LOAD_SHAPE]),
        "wind": series("MW", [500 + 150 * math.cos(2 * math.pi * (t - 3) / 24) for t in range(HOURS)]),
        "solar": series("MW", [300 * s for s in SOLAR_SHAPE]),
        "interconnectors": {"unit": "MW", "series": {"IC1": [r(150 * math.sin(2 * math.pi * t / 24)) for t in range(HOURS)]}},
        "gas_demand": {"unit": "kg/s", "value": 20.0},
        "reserve": {"unit": "MW", "value": 300.0},
    }
    shares = {"B1": 0.1, "B2": 0.2, "B3": 0.15, "B4": 0.15, "B5": 0.2, "B6": 0.12, "B7": 0.08}
    write_bundle(root, "security_small", electric, gas, scenario, shares, {"N2": 0.5, "N7": 0.5})


def desk30(root, rng):
    """Thirty units on a twelve-bus grid and a thirty-pipe gas network."""
    buses = [f"B{i}" for i in range(1, 13)]
    lines = []
    pairs = [(i, i + 1) for i in range(1, 12)] + [(1, 5), (3, 8), (6, 10), (9, 12), (2, 11), (4, 7)]
    for k, (a, b) in enumerate(pairs, 1):
        lines.append({"id": f"L{k}", "from_bus": f"B{a}", "to_bus": f"B{b}",
                      "rating": r(1200 + 600 * rng.random(), 0), "reactance": r(0.05 + 0.1 * rng.random(), 4)})
    fleet = ([("Nuclear", 1000, 7, 0.8)] * 3 + [("CCGT", 600, 30, 0.35)] * 10 + [("OCGT", 200, 75, 0.0)] * 5
             + [("Coal", 500, 45, 0.4)] * 5 + [("Hydro", 300, 4, 0.0)] * 2 + [("Bio/Lignite", 250, 38, 0.3)] * 2
             + [("Oil", 150, 110, 0.0)] * 2 + [("Pumped storage", 400, 3, 0.0)])
    gens = []
    for k, (tech, size, cost, pmin) in enumerate(fleet, 1):
        p = size * (0.8 + 0.4 * rng.random())
        c = cost * (0.9 + 0.2 * rng.random())
        slow = tech in ("Nuclear", "Coal", "Bio/Lignite")
        gens.append(gen(f"G{k}", buses[(k * 5) % 12], tech, p, c, p_min=pmin * p,
                        ramp=p * (0.3 if tech == "Nuclear" else 1.0),
                        min_up=3 if slow else 1, min_down=3 if slow else 1,
                        startup=r(8 * p if tech != "Hydro" else 0, 0)))
    clusters = []
    for k in range(1, 6):
        clusters.append({"id": f"W{k}", "bus": buses[(3 * k) % 12], "kind": "Wind", "capacity": r(800 + 800 * rng.random(), 0),
                         "curtailment_cost": 0.0, "resource_weight": 0.0})
    for k in range(1, 4):
        clusters.append({"id": f"S{k}", "bus": buses[(4 * k + 1) % 12], "kind": "Solar", "capacity": 600.0,
                         "curtailment_cost": 0.0, "resource_weight": 0.0})
    electric = {"base_mva": 100.0, "buses": [{"id": b, "reference": b == "B1"} for b in buses], "lines": lines,
                "generators": gens, "clusters": clusters, "interconnectors": [{"id": "IC1", "bus": "B12"}]}

    # Gas: a trunk N1..N14 with branches; compressors split it into four zones.
    nodes = [f"N{i}" for i in range(1, 27)]
    edges = [(i, i + 1) for i in range(1, 14) if i not in (5, 9)]
    edges += [(2, 15), (15, 16), (16, 3), (4, 17), (17, 18), (18, 5),
              (7, 19), (19, 20), (20, 8), (8, 21), (21, 9),
              (11, 22), (22, 23), (23, 13), (12, 24), (24, 14), (13, 25), (25, 26), (26, 14)]
    pipes = []
    for k, (a, b) in enumerate(edges, 1):
        trunk = b == a + 1
        pipes.append(pipe(f"P{k}", f"N{a}", f"N{b}", r(25 + 35 * rng.random(), 1), 1.2 if trunk else 0.9))
    assert len(pipes) == 30, len(pipes)
    comps = [compressor("K1", "N5", "N6", 1.08), compressor("K2", "N9", "N10", 1.08, drive="electric", bus="B9")]
    inj = [{"id": "T1", "node": "N1", "kind": "terminal", "nominal_capacity": 450.0, "scheduled_rate": 300.0},
           {"id": "T2", "node": "N10", "kind": "terminal", "nominal_capacity": 250.0, "scheduled_rate": 140.0},
           {"id": "S1", "node": "N17", "kind": "storage", "nominal_capacity": 120.0, "scheduled_rate": 50.0}]
    gas_nodes = ["N3", "N6", "N8", "N12", "N14", "N16", "N18", "N20", "N22", "N24"]
    coupling = []
    for g in gens:
        if g["gfpp_flag"]:
            coupling.append({"generator": g["id"], "gas_node": gas_nodes[len(coupling) % len(gas_nodes)],
                             "efficiency": 0.52 if g["tech"] == "CCGT" else 0.36, "hhv": 50e6})
    gas = gas_doc(nodes, pipes, comps, inj, ("N1", 72.0), coupling)
    peak = 0.93 * sum(g["p_max"] for g in gens if g["tech"] != "Pumped storage")
    wind_cap = sum(c["capacity"] for c in clusters if c["kind"] == "Wind")
    scenario = {
        "capacity": {"unit": "MW", "values": {}},
        "load": series("MW", [peak * s for s in LOAD_SHAPE]),
        "wind": series("MW", [wind_cap * (0.25 + 0.1 * math.sin(2 * math.pi * t / 24)) for t in range(HOURS)]),
        "solar": series("MW", [1800 * 0.7 * s for s in SOLAR_SHAPE]),
        "interconnectors": {"unit": "MW", "series": {"IC1": [r(300 + 200 * math.cos(2 * math.pi * t / 24)) for t in range(HOURS)]}},
        "gas_demand": {"unit": "kg/s", "value": 250.0},
        "gas_export": {"unit": "kg/s", "value": 20.0, "node": "N26"},
        "reserve": {"unit": "MW", "value": 1500.0},
    }
    shares = {b: 0.5 + rng.random() for b in buses}
    split = {n: 0.5 + rng.random() for n in ["N2", "N4", "N7", "N9", "N11", "N13", "N15", "N19", "N23", "N26"]}
    write_bundle(root, "desk30", electric, gas, scenario, shares, split)


def uk_skeleton(root, rng):
    """29-bus, UK-shaped topology sized for the N-1 element counts.

    99 circuits, 60 conventional plants, 9 solar clusters, 14 wind clusters
    and 21 compressor stations. It is a skeleton for enumeration and
    validation rather than a calibrated model.
    """
    nb = 29
    buses = [f"B{i}" for i in range(1, nb + 1)]
    # North to south ladder with cross links; parallel circuits fill up to 99.
    corridors = [(i, i + 1) for i in range(1, nb)] + [(i, i + 2) for i in range(1, nb - 1, 2)]
    corridors += [(i, i + 3) for i in range(2, nb - 2, 4)]
    lines = []
    k = 0
    while len(lines) < 99:
        a, b = corridors[k % len(corridors)]
        circuit = k // len(corridors) + 1
        lines.append({"id": f"L{len(lines) + 1}", "from_bus": f"B{a}", "to_bus": f"B{b}",
                      "rating": r(1500 + 2500 * rng.random(), 0), "reactance": r(0.01 + 0.04 * rng.random(), 4),
                      **({"circuit": circuit} if False else {})})
        k += 1
    mix = ([("CCGT", 850, 32)] * 22 + [("OCGT", 300, 80)] * 6 + [("Nuclear", 1200, 8)] * 8 + [("Coal", 1000, 48)] * 5
           + [("Bio/Lignite", 600, 40)] * 4 + [("Hydro", 200, 4)] * 6 + [("Pumped storage", 500, 3)] * 4
           + [("Oil", 200, 120)] * 5)
    assert len(mix) == 60
    gens = []
    for i, (tech, size, cost) in enumerate(mix, 1):
        p = size * (0.7 + 0.6 * rng.random())
        gens.append(gen(f"G{i}", buses[rng.randrange(nb)], tech, p, cost * (0.9 + 0.2 * rng.random()),
                        p_min=0.3 * p if tech in ("CCGT", "Coal", "Nuclear") else 0.0))
    clusters = []
    north = buses[:10]
    south = buses[14:]
    for i in range(1, 15):
        clusters.append({"id": f"W{i}", "bus": north[(i * 3) % len(north)] if i <= 10 else buses[10 + i % 4],
                         "kind": "Wind", "capacity": r(600 + 2400 * rng.random(), 0),
                         "curtailment_cost": 0.0, "resource_weight": 0.0})
    for i in range(1, 10):
        clusters.append({"id": f"S{i}", "bus": south[(i * 2) % len(south)], "kind": "Solar", "capacity": 1500.0,
                         "curtailment_cost": 0.0, "resource_weight": 0.0})
    electric = {"base_mva": 100.0, "buses": [{"id": b, "reference": b == "B15"} for b in buses], "lines": lines,
                "generators": gens, "clusters": clusters,
                "interconnectors": [{"id": "IFA", "bus": "B29"}, {"id": "BritNed", "bus": "B27"},
                                    {"id": "Moyle", "bus": "B6"}]}

    # Gas: a north-south spine of 22 nodes with 21 compressor stations between
    # consecutive pipeline sections, plus laterals to the gas-fired plants.
    spine = 22
    nodes = []
    pipes = []
    comps = []
    for s in range(1, spine + 1):
        a, b = f"A{s}", f"B{s}"
        nodes += [a, b]
        pipes.append(pipe(f"P{len(pipes) + 1}", a, b, r(40 + 40 * rng.random(), 1), 1.2))
        if s > 1:
            comps.append(compressor(f"K{s - 1}", f"B{s - 1}", a, 1.05))
    laterals = []
    for i, g in enumerate(gg for gg in gens if gg["gfpp_flag"]):
        n = f"D{i + 1}"
        nodes.append(n)
        host = f"B{1 + (i * 7) % spine}"
        pipes.append(pipe(f"P{len(pipes) + 1}", host, n, r(10 + 30 * rng.random(), 1), 0.6))
        laterals.append((g["id"], n))
    assert len(comps) == 21
    inj = [{"id": "StFergus", "node": "A1", "kind": "terminal", "nominal_capacity": 1400.0, "scheduled_rate": 1100.0},
           {"id": "Easington", "node": "A8", "kind": "terminal", "nominal_capacity": 900.0, "scheduled_rate": 700.0},
           {"id": "Bacton", "node": "A15", "kind": "terminal", "nominal_capacity": 800.0, "scheduled_rate": 600.0},
           {"id": "MilfordHaven", "node": "A20", "kind": "terminal", "nominal_capacity": 900.0, "scheduled_rate": 650.0},
           {"id": "RoughStorage", "node": "B9", "kind": "storage", "nominal_capacity": 400.0, "scheduled_rate": 200.0}]
    coupling = [{"generator": g, "gas_node": n, "efficiency": 0.5, "hhv": 50e6} for g, n in laterals]
    gas = gas_doc(nodes, pipes, comps, inj, ("A1", 80.0), coupling)

    wind_cap = sum(c["capacity"] for c in clusters if c["kind"] == "Wind")
    conventional = sum(g["p_max"] for g in gens)
    scenario = {
        "pathway": "uk-skeleton",
        "capacity": {"unit": "MW", "values": {}},
        "load": series("MW", [0.82 * conventional * s for s in LOAD_SHAPE]),
        "wind": series("MW", [0.3 * wind_cap] * HOURS),
        "solar": series("MW", [13500 * 0.5 * s for s in SOLAR_SHAPE]),
        "interconnectors": {"unit": "MW", "series": {"IFA": [1000.0] * HOURS, "BritNed": [500.0] * HOURS,
                                                      "Moyle": [-250.0] * HOURS}},
        "gas_demand": {"unit": "mcm/d", "value": 341.4},
        "gas_export": {"unit": "mcm/d", "value": 36.7, "node": "B22"},
        "reserve": {"unit": "MW", "value": 8000.0},
    }
    shares = {b: 0.5 + rng.random() for b in buses}
    split = {f"B{s}": 0.5 + rng.random() for s in range(2, spine + 1, 2)}
    write_bundle(root, "uk_skeleton", electric, gas, scenario, shares, split)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "scenarios")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    gas10(args.out)
    tight_gas(args.out)
    security_small(args.out)
    desk30(args.out, random.Random(30))
    uk_skeleton(args.out, random.Random(2025))


if __name__ == "__main__":
    main()
