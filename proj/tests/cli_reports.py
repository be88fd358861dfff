"""End-to-end checks of the hgf command line: exit codes, report schema,
example outputs and byte-identical reruns.

usage: cli_reports.py HGF_BINARY SCHEMA_JSON WORK_DIR
"""

import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

HGF, SCHEMA, WORK = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
validator = jsonschema.Draft202012Validator(json.loads(SCHEMA.read_text()))
failures = []


def hgf(*args, env=None, expect=0):
    full_env = dict(os.environ)
    full_env.update(env or {})
    p = subprocess.run([HGF, *map(str, args)], capture_output=True, text=True, env=full_env, cwd=WORK)
    if p.returncode != expect:
        failures.append(f"{' '.join(map(str, args))}: exit {p.returncode}, wanted {expect}\n{p.stderr}")
    return p


def report(*args, expect=0, env=None):
    p = hgf(*args, expect=expect, env=env)
    try:
        doc = json.loads(p.stdout)
    except json.JSONDecodeError:
        failures.append(f"{' '.join(map(str, args))}: stdout is not JSON")
        return {}
    errors = sorted(validator.iter_errors(doc), key=lambda e: e.path)
    for e in errors:
        failures.append(f"{' '.join(map(str, args))}: schema: {e.message} at {list(e.path)}")
    return doc


def check(cond, what):
    if not cond:
        failures.append(what)


if WORK.exists():
    shutil.rmtree(WORK)
WORK.mkdir(parents=True)

# catalog
cat = report("catalog")
check(len(cat.get("results", {}).get("cases", [])) == 13, "catalog lists 13 cases")
check({"fisher", "tf63", "tf65"} <= {f["key"] for f in cat.get("results", {}).get("families", [])},
      "catalog lists the closed-form families")

# eval example: Fisher front at the origin, only u defined
p = hgf("eval", "--family", "fisher", "--t", "0", "--xmin", "0", "--xmax", "0", "--n", "1")
check(p.stdout == "t,x,u,v,w\n0,0,0.25,,\n", f"fisher eval row: {p.stdout!r}")
hgf("eval", "--family", "tf65", "--xmin", "-1", "--xmax", "1", "--n", "5", "--out", "tf65.csv")
rows = (WORK / "tf65.csv").read_text().splitlines()
check(len(rows) == 6 and all(len(r.split(",")) == 5 for r in rows), "eval --out writes 5 full rows")

# residual with refinement
res = report("residual", "--family", "tf63", "--a1", "0.1", "--delta", "0.35", "--a3", "1", "--d3", "3", "--refine")
order = res.get("residual", {}).get("order") or [0, 0, 0]
check(all(abs(o - 2.0) <= 0.2 for o in order), f"tf63 refinement order {order}")
check(len(res.get("residual", {}).get("levels", [])) == 3, "three refinement levels")

# flags win over config, with a warning
(WORK / "tf65.json").write_text(json.dumps({"family": {"key": "tf65", "d": 1.0}}))
res = report("residual", "--config", "tf65.json", "--d", "1.5")
check(res.get("inputs", {}).get("family", {}).get("values", {}).get("d") == 1.5, "flag overrides config value")
check(any("overrides" in w for w in res.get("warnings", [])), "override warning present")

# symmetry
(WORK / "generic.json").write_text(json.dumps(
    {"a1": 0.3, "a2": 0.7, "a3": 1.2, "a4": 0.4, "a5": 0.9, "d1": 1, "d2": 2, "d3": 3}))
sl = report("symmetry", "list", "--params", "generic.json")
check(sl.get("results", {}).get("operators") == ["Pt", "Px"], "generic coefficients admit only translations")
sv = report("symmetry", "verify", "--op", "Q1", "--eps", "0.3", "--family", "fam40-i",
            "--a1", "0.1", "--a4", "0.5", "--delta1", "2", "--delta2", "0.5")
check(sv.get("results", {}).get("passed") is True, "Q1 maps the fam40 solution to a solution")

# reduce with oracle and residual check
rd = report("reduce", "--system", "R38", "--case", "i", "--a1", "0.1", "--a4", "0.5", "--delta1", "2",
            "--delta2", "0.5", "--verify", "--out", "r38.csv")
check(rd.get("results", {}).get("passed") is True, "R38 reduction verifies")
check((WORK / "r38.csv").read_text().startswith("t,U,V,W\n"), "R38 trajectory table header")

# simulate + speed
sim_cfg = {"family": {"key": "tf63", "a1": 0.1, "delta": 0.35, "a3": 1, "d3": 3},
           "grid": {"x_min": -40, "x_max": 60, "n": 401},
           "time": {"t0": 0, "t_end": 4, "snapshot_every": 100},
           "bc": {"kind": "dirichlet"}}
(WORK / "sim.json").write_text(json.dumps(sim_cfg))
sim = report("simulate", "--config", "sim.json", "--out", "run")
check(json.loads((WORK / "run" / "report.json").read_text()) == sim, "report.json matches stdout")
check((WORK / "run" / "snapshots.csv").read_text().startswith("t,x,u,v,w\n"), "snapshot header")
sp = report("speed", "--run", "run", "--component", "w", "--level", "0.5")
speed = sp.get("speed", {}).get("speed", 0.0)
check(abs(speed - 2.05742) / 2.05742 < 0.05, f"coarse w-front speed {speed}")

# identical inputs give identical bytes, for any worker count
big = dict(sim_cfg, grid={"x_min": -40, "x_max": 60, "n": 20001}, time={"t_end": 0.002, "snapshot_every": 50})
(WORK / "big.json").write_text(json.dumps(big))
outputs = []
for threads in ("1", "3", "8"):
    p = hgf("simulate", "--config", "big.json", "--out", f"big{threads}", env={"HGF_THREADS": threads})
    outputs.append((p.stdout.replace(f"big{threads}", "DIR"), (WORK / f"big{threads}" / "snapshots.csv").read_bytes()))
check(all(o == outputs[0] for o in outputs), "simulate output independent of HGF_THREADS")

# error paths
(WORK / "unknown.json").write_text(json.dumps({"grid": {"x_min": 0, "x_max": 1, "n": 5}, "extra": 1}))
p = hgf("simulate", "--config", "unknown.json", "--out", "x", expect=1)
check("extra" in p.stderr, "unknown config key is named")
p = hgf("eval", "--family", "fam40-i", "--delta1", "0.5", expect=1)
check("delta1" in p.stderr, "violated restriction is named")
hgf("eval", "--family", "nosuch", expect=1)
hgf("frobnicate", expect=1)
hgf("--help", expect=0)
(WORK / "blow.json").write_text(json.dumps({
    "params": {"a1": 0.3, "a2": 0.7, "a3": 1.2, "a4": 0.4, "a5": 0.9, "d1": 1, "d2": 2, "d3": 3},
    "grid": {"x_min": 0, "x_max": 1, "n": 3}, "time": {"t_end": 1, "snapshot_every": 1},
    "initial": {"u": [1e200, 1e200, 1e200], "v": [0, 0, 0], "w": [0, 0, 0]}}))
blow = report("simulate", "--config", "blow.json", "--out", "blow", expect=2)
check("blow_up" in blow.get("results", {}), "blow-up recorded in the report")
check((WORK / "blow" / "snapshots.csv").exists(), "partial snapshots written on blow-up")
(WORK / "flat.json").write_text(json.dumps({
    "params": {"a1": 0.3, "a2": 0.7, "a3": 1.2, "a4": 0.4, "a5": 0.9, "d1": 1, "d2": 2, "d3": 3},
    "grid": {"x_min": 0, "x_max": 1, "n": 5}, "time": {"t_end": 0.1, "snapshot_every": 10},
    "initial": {"u": [0.5] * 5, "v": [0.1] * 5, "w": [0.2] * 5}}))
report("simulate", "--config", "flat.json", "--out", "flat")
hgf("speed", "--run", "flat", "--component", "u", "--level", "0.9", expect=2)

for f in failures:
    print("FAIL:", f)
print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
