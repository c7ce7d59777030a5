#!/usr/bin/env python3
"""Run the CLI and validate every JSON document it emits against docs/schemas."""
import json
import pathlib
import subprocess
import sys

import jsonschema

CASES = [
    ("gamma", ["gamma"], 0),
    ("gamma", ["gamma", "--family", "sat-x", "--a", "0.5"], 0),
    ("gamma", ["gamma", "--f-plus", "k*sin(theta)*exp(-k)", "--n-k", "32"], 0),
    ("spectrum", ["spectrum", "--angular", "--lambda", "-1", "--m", "1"], 0),
    ("spectrum", ["spectrum", "--radial", "--count", "2"], 0),
    ("spectrum", ["spectrum", "--gamma-table", "--max-n", "2"], 0),
    ("baseline-ho", ["baseline-ho"], 0),
    ("baseline-ho", ["baseline-ho", "--level", "1"], 0),
    ("synthesize", ["synthesize", "--points", "2", "--format", "json",
                    "--n-theta", "24", "--n-phi", "24"], 0),
    ("synthesize", ["synthesize", "--points", "2", "--format", "json",
                    "--source", "closed-form"], 0),
    ("residual", ["residual"], 0),
    ("residual", ["residual", "--gamma", "5", "--lambda", "-1"], 0),
    ("verify", ["verify"], 0),
    ("error", ["gamma", "--f-plus", "k*("], 2),
    ("error", ["gamma", "--no-such-flag"], 2),
    ("error", ["gamma", "--f-plus", "0*k"], 3),
    ("error", ["gamma", "--f-plus", "k/(theta-theta)"], 4),
]


def main() -> int:
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text())
               for p in schema_dir.glob("*.schema.json")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)
    failures = 0
    for name, args, code in CASES:
        proc = subprocess.run([cli, *args], capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode != code:
            print(f"FAIL {label}: exit {proc.returncode}, expected {code}")
            failures += 1
            continue
        stream = proc.stderr if name == "error" else proc.stdout
        try:
            jsonschema.validate(json.loads(stream), schemas[name],
                                cls=jsonschema.Draft202012Validator)
            print(f"ok   {label}")
        except (ValueError, jsonschema.ValidationError) as e:
            print(f"FAIL {label}: {e}")
            failures += 1
    # Warnings are one JSON object per stderr line.
    proc = subprocess.run([cli, "synthesize", "--points", "2", "--side", "70",
                           "--n-theta", "8", "--n-phi", "8", "--format", "json"],
                          capture_output=True, text=True)
    lines = [l for l in proc.stderr.splitlines() if l.strip()]
    if proc.returncode != 0 or not lines:
        print("FAIL warning lines missing")
        failures += 1
    for line in lines:
        try:
            jsonschema.validate(json.loads(line), schemas["warning"])
        except (ValueError, jsonschema.ValidationError) as e:
            print(f"FAIL warning: {e}")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
