"""Runs the mixexp binary, validates JSON output against the shipped schemas,
checks CSV headers, exit codes and byte-identical repeat runs."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

BINARY = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

JSON_RUNS = [
    ("moments", ["moments", "--preset", "phillips", "--n", "10", "--mmax", "4"]),
    ("moments", ["moments", "--family", "catalan", "--n", "5", "--mmax", "3"]),
    ("moments", ["moments", "--triple", "arctan", "--n", "6", "--k", "3", "--mmax", "4"]),
    ("moments", ["moments", "--family", "negative_binomial", "--triple", "gauss", "--n", "8"]),
    ("eval", ["eval", "--preset", "szasz_baskakov", "--n", "12", "--function", "sin"]),
    ("converge", ["converge", "--preset", "bernstein_durrmeyer", "--n-list", "8,16,32",
                  "--function", "abs:0.5"]),
    ("converge", ["converge", "--preset", "phillips", "--n-list", "8,16", "--function", "t2"]),
    ("bounds", ["bounds", "--preset", "durrmeyer_beta", "--n", "16", "--function", "clip:1:0.5"]),
    ("check", ["check", "--preset", "phillips", "--n", "20", "--x", "0.5", "--samples",
               "20000", "--seed", "3"]),
]

CSV_HEADERS = {
    "moments": "m,x,value,polynomial",
    "eval": "x,value,f,error",
    "converge": "n,sup_error,theorem2_bound,specialized_bound",
    "bounds": "n,x,general_bound,specialized_bound,empirical_error,dominated",
}

failures = []


def run(args):
    return subprocess.run([BINARY, *args], capture_output=True, check=False)


for schema_name, args in JSON_RUNS:
    schema = json.loads((SCHEMAS / f"{schema_name}.schema.json").read_text())
    result = run([*args, "--format", "json"])
    if result.returncode != 0:
        failures.append(f"{args}: exit {result.returncode}: {result.stderr.decode()}")
        continue
    try:
        jsonschema.validate(json.loads(result.stdout), schema)
    except jsonschema.ValidationError as e:
        failures.append(f"{args}: schema violation: {e.message}")

for schema_name, args in JSON_RUNS:
    if schema_name not in CSV_HEADERS or "--triple" in args and "--family" not in args:
        continue
    result = run(args)
    header = result.stdout.decode().splitlines()[0] if result.stdout else ""
    if result.returncode != 0 or header != CSV_HEADERS[schema_name]:
        failures.append(f"{args}: CSV header {header!r}, exit {result.returncode}")

with tempfile.TemporaryDirectory() as tmp:
    for i, (_, args) in enumerate(JSON_RUNS):
        paths = [pathlib.Path(tmp) / f"{i}_{r}.out" for r in range(2)]
        for p in paths:
            run([*args, "--out", str(p)])
        if paths[0].read_bytes() != paths[1].read_bytes():
            failures.append(f"{args}: repeated runs differ")

    config = pathlib.Path(tmp) / "run.cfg"
    config.write_text("preset=phillips\nn=10\nmmax=2\nx-count=2\n")
    from_file = run(["moments", "--config", str(config)])
    overridden = run(["moments", "--config", str(config), "--n", "20"])
    if from_file.returncode != 0 or "1/100 + 1/5*x" not in from_file.stdout.decode():
        failures.append("config file not applied")
    if overridden.returncode != 0 or "1/400 + 1/10*x" not in overridden.stdout.decode():
        failures.append("flags do not override the config file")

EXIT_CODES = [
    (["moments", "--family", "binomial"], 2),
    (["moments", "--preset", "nosuch", "--n", "3"], 2),
    (["converge", "--preset", "szasz_baskakov", "--n-list", "2,8", "--function", "abs:1"], 2),
    (["converge", "--preset", "phillips", "--n-list", "16,8", "--function", "one"], 2),
    (["check", "--preset", "phillips", "--n", "50", "--samples", "0"], 2),
    (["eval", "--preset", "bernstein_durrmeyer", "--n", "4", "--function", "t", "--x-max", "2"], 2),
    (["eval", "--preset", "phillips", "--n", "5000", "--function", "one", "--x-min", "2",
      "--x-count", "1"], 3),
    (["bogus"], 2),
]
for args, expected in EXIT_CODES:
    result = run(args)
    if result.returncode != expected:
        failures.append(f"{args}: exit {result.returncode}, expected {expected}")
    if expected == 2 and "Usage" not in result.stderr.decode() and "error" not in result.stderr.decode():
        failures.append(f"{args}: no diagnostic on stderr")

missing = run(["moments", "--family", "binomial"])
if "Usage:" not in missing.stderr.decode():
    failures.append("missing --n prints no usage text")

for line in failures:
    print("FAIL", line)
print(f"{len(JSON_RUNS)} JSON runs, {len(EXIT_CODES)} exit-code cases, {len(failures)} failures")
sys.exit(1 if failures else 0)
