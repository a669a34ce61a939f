#!/usr/bin/env python3
"""End-to-end checks of the lorcap command line: examples, exit codes,
determinism, and schema validation of every emitted JSON file."""

import csv
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

LORCAP, SCHEMAS, WORK = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def lorcap(*args):
    return subprocess.run([LORCAP, *map(str, args)], capture_output=True, text=True)


def load_schemas():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


registry = load_schemas()


def validate(doc, schema_name, what):
    schema = registry.contents(schema_name)
    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    errors = list(validator.iter_errors(doc))
    check(not errors, f"{what} matches {schema_name}" + (f": {errors[0].message}" if errors else ""))


shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)

# examples
prof = WORK / "prof.json"
prof.write_text(json.dumps([{"value": 2, "mass": 1}, {"value": 1, "mass": 3}]))
validate(json.loads(prof.read_text()), "profile.schema.json", "example profile")
r = lorcap("norm", "--profile", prof, "--p", 2, "--q", 1)
check(r.returncode == 0 and r.stdout.strip() == "6.0", f"norm example prints 6.0 (got {r.stdout.strip()!r})")

r = lorcap("hausdorff", "--variant", "harmonic", "--n", 2, "--p", 1.5, "--d", 0.5, "--k", 4)
check(r.returncode == 0 and r.stdout.strip() == "0.5", f"critical harmonic sum prints 0.5 (got {r.stdout.strip()!r})")

table = WORK / "t.csv"
r = lorcap("testfn", "--n", 2, "--p", 1.5, "--variant", "uniform", "--q", 2, "--j", "2..10", "-o", table)
check(r.returncode == 0, "testfn table runs")
with table.open() as f:
    col = [float(row["norm_Df"]) for row in csv.DictReader(f)]
check(len(col) == 9 and all(a > b for a, b in zip(col, col[1:])), "norm_Df column strictly decreasing")

r = lorcap("cantor", "--n", 2, "--p", "3/2", "--generations", 3, "--locate", "0.9,0.1", "-o", WORK / "loc.json")
check(r.returncode == 0, "locate runs")
validate(json.loads((WORK / "loc.json").read_text()), "location.schema.json", "locate output")

for mode, schema in (("mass", "mass_bound.schema.json"), ("dimension", "dimension_estimate.schema.json")):
    out = WORK / f"{mode}.json"
    r = lorcap("hausdorff", "--n", 2, "--p", 1.5, "--d", 0.6, "--k", 10, "--depth", 10, "--mode", mode, "-o", out)
    check(r.returncode == 0, f"hausdorff {mode} runs")
    validate(json.loads(out.read_text()), schema, f"hausdorff {mode}")

problem = {"dim": 2, "p": 1.5, "q": 1, "variant": "variational", "box": 1.0, "h": 0.25,
           "target_cube": {"half_side": 0.25}, "domain_cube": {"half_side": 0.75}}
pfile = WORK / "problem.json"
pfile.write_text(json.dumps(problem))
validate(problem, "capacity_problem.schema.json", "capacity problem")
r = lorcap("capacity", "--problem", pfile, "--minimizer-output", WORK / "u.json", "-o", WORK / "cap.json")
check(r.returncode == 0, "capacity minimize runs")
validate(json.loads((WORK / "cap.json").read_text()), "capacity_result.schema.json", "capacity minimize")
validate(json.loads((WORK / "u.json").read_text()), "grid_function.schema.json", "minimizer grid")

# exit codes
r = lorcap("norm", "--profile", prof, "--p", 0.5, "--q", 1)
check(r.returncode == 1 and "/params/p" in r.stderr, f"bad p exits 1 with a pointer (stderr {r.stderr.strip()!r})")
bad = WORK / "bad.json"
bad.write_text(json.dumps({"command": "norm", "params": {"p": 2, "q": 1, "profile": [{"value": 1, "mass": -1}]}}))
r = lorcap("run", "--config", bad)
check(r.returncode == 1 and "/params/profile/0" in r.stderr, "bad profile in config exits 1 with a pointer")
r = lorcap("report", WORK / "absent.csv")
check(r.returncode == 1, "report with a missing artifact exits 1")
r = lorcap("report", "-o", WORK / "empty_summary.json")
check(r.returncode == 0, "empty report exits 0")
validate(json.loads((WORK / "empty_summary.json").read_text()), "summary.schema.json", "empty summary")
r = lorcap("norm", "--profile", prof, "--p", 2, "--q", 1, "--seed", 99, "-o", WORK / "n99.json")
r = lorcap("norm", "--profile", prof, "--p", 2, "--q", 1, "--seed", 1, "-o", WORK / "n1.json")
r = lorcap("report", WORK / "n99.json", WORK / "n1.json", "-o", WORK / "conflict.json")
check(r.returncode == 1, "report with conflicting hashes exits 1")
validate(json.loads((WORK / "conflict.json").read_text()), "summary.schema.json", "conflict summary")

# run --config reproduces the direct command
cfg = {"command": "norm", "params": {"profile_file": str(prof), "p": 2, "q": 1}, "seed": 0}
validate(cfg, "config.schema.json", "example config")
cfile = WORK / "cfg.json"
cfile.write_text(json.dumps(cfg))
r = lorcap("run", "--config", cfile)
check(r.returncode == 0 and r.stdout.strip() == "6.0", "run --config prints 6.0")

# suite: determinism and schemas
a, b = WORK / "suite_a", WORK / "suite_b"
for d in (a, b):
    r = lorcap("suite", "--seed", 7, "--out-dir", d)
    check(r.returncode == 0, f"suite into {d.name} exits 0")
names = sorted(p.name for p in a.iterdir())
check(names == sorted(p.name for p in b.iterdir()), "suite runs produce the same file set")
check(all((a / n).read_bytes() == (b / n).read_bytes() for n in names), "suite runs are byte-identical")

summary = json.loads((a / "summary.json").read_text())
validate(summary, "summary.schema.json", "suite summary")
check(summary["all_invariants_passed"] is True, "suite invariants all pass")
for meta_path in sorted(a.glob("*.meta.json")):
    meta = json.loads(meta_path.read_text())
    validate(meta, "meta.schema.json", meta_path.name)
    check(meta["seed"] == 7 and meta["config_hash"] == summary["config_hash"], f"{meta_path.name} seed and hash")
    artifact = a / meta["artifact"]
    check(artifact.exists(), f"{meta['artifact']} exists")
    if meta["schema"]:
        validate(json.loads(artifact.read_text()), meta["schema"], meta["artifact"])
    else:
        with artifact.open() as f:
            header = next(csv.reader(f))
        check(header == meta["csv_header"], f"{meta['artifact']} header matches sidecar")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
