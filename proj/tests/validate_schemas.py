"""Validate CLI json payloads against the schemas in schemas/."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from jsonschema import Draft202012Validator

INVOCATIONS = [
    ["pell", "--e", "13", "--t", "-3", "--list", "40"],
    ["pell", "--e", "8", "--t", "5"],
    ["pell", "--e", "9", "--t", "1"],
    ["lattice", "--n", "3", "--gamma", "2", "--isometries"],
    ["lattice", "--n", "5"],
    ["heegner", "--n", "1", "--gamma", "1", "--e", "1"],
    ["heegner", "--n", "12", "--gamma", "1", "--e", "12"],
    ["heegner", "--n", "3", "--gamma", "2", "--e", "3"],
    ["period-image", "--n", "1", "--gamma", "1"],
    ["period-image", "--n", "55"],
    ["cones", "--e", "5", "--bound", "20"],
    ["cones", "--n", "3", "--e-prime", "2"],
    ["aut", "--e", "29"],
    ["aut", "--n", "3", "--e-prime", "2"],
    ["aut", "--n", "1", "--gamma", "1"],
    ["hilb", "--n", "3", "--e", "13"],
    ["hilb", "--n", "15", "--e", "1"],
    ["maps", "--n", "3", "--e-prime", "11", "--m", "3"],
    ["epw", "--e", "13"],
    ["epw", "--e", "2"],
    ["epw", "--n", "3", "--e-prime", "11"],
    ["families", "--n", "1", "--kind", "1"],
    ["families", "--n", "3", "--kind", "epw", "--count", "5"],
    ["sweep", "heegner", "--n", "1..5", "--e", "1..10"],
    ["sweep", "pell", "--e", "1..5", "--t", "-3..3"],
    ["sweep", "hilb", "--e", "1..10"],
    ["sweep", "special", "--n", "3..11", "--e-prime", "2..5"],
    ["sweep", "period-image", "--n", "1..10"],
]


def main() -> int:
    cli, schema_dir = sys.argv[1], Path(sys.argv[2])
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        runs = INVOCATIONS + [["regen-fixtures", "--n", "1..3", "--e", "1..5", "--out", tmp]]
        for args in runs:
            proc = subprocess.run([cli, *args], capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL {' '.join(args)}: exit {proc.returncode} {proc.stderr.strip()}")
                failures += 1
                continue
            payload = json.loads(proc.stdout)
            schema = json.loads((schema_dir / f"{args[0]}.schema.json").read_text())
            errors = sorted(Draft202012Validator(schema).iter_errors(payload), key=str)
            if args[0] == "sweep":
                cols = payload["columns"]
                errors += [f"row keys {list(r)} != columns" for r in payload["rows"] if list(r) != cols]
            if errors:
                failures += 1
                print(f"FAIL {' '.join(args)}: {errors[0]}")
            else:
                print(f"ok   {' '.join(args)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
