"""Runs each CLI command and validates its JSON report against the schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

RUNS = [
    ("model", ["model", "--model", "quantum", "--d", "2"]),
    ("model", ["model", "--model", "square_bit"]),
    ("axioms", ["axioms", "--model", "ball", "--k", "3", "--samples", "10"]),
    ("axioms", ["axioms", "--model", "bipyramid", "--samples", "10"]),
    ("entropy", ["entropy", "--model", "quantum", "--d", "2", "--state", "[0.75,0.25,0,0]", "--budget", "20"]),
    ("entropy", ["entropy", "--model", "classical", "--n", "3", "--base", "2"]),
    ("majorize", ["majorize", "--model", "classical", "--n", "4", "--trials", "20"]),
    ("expand", ["expand", "--model", "classical", "--n", "4", "--element", "[3,3,1,0]"]),
    ("expand", ["expand", "--model", "quantum", "--d", "2", "--state", "[0.5,-0.5,0,0]"]),
    ("perfection", ["perfection", "--model", "quantum", "--d", "2", "--samples", "50"]),
    ("perfection", ["perfection", "--model", "square_bit"]),
    ("vonneumann", ["vonneumann", "--model", "quantum", "--d", "2", "--state", "[0.75,0.25,0,0]"]),
]


def main():
    binary, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        square = pathlib.Path(tmp) / "square.json"
        square.write_text(json.dumps({"points": [[1, 1], [1, -1], [-1, -1], [-1, 1]]}))
        runs = RUNS + [("polytope_analyze", ["polytope", "analyze", str(square)])]
        for schema_name, args in runs:
            schema = json.loads((schema_dir / f"{schema_name}.json").read_text())
            proc = subprocess.run([binary, *args, "--seed", "7"], capture_output=True, text=True)
            label = " ".join(args)
            if proc.returncode not in (0, 1):
                print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            try:
                jsonschema.validate(json.loads(proc.stdout), schema)
            except (json.JSONDecodeError, jsonschema.ValidationError) as e:
                print(f"FAIL {label}: {e}")
                failures += 1
                continue
            print(f"ok   {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
