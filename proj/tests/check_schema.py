"""Runs the berg binary on a few requests and validates the JSON reports."""
import json
import subprocess
import sys

import jsonschema

berg, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as fh:
    schema = json.load(fh)
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

requests = [
    ["sweep", "--domain", "ball:1", "--F", "log:A=1,c=1", "--grid", "-0.7:0.7:8"],
    ["sweep", "--domain", "flat:1", "--F", "exp:c=1", "--grid", "-0.5:0.5:4"],
    ["sweep", "--domain", "cartan:III:2", "--mu", "2", "--random", "3", "--paths", "oracle"],
    ["sweep", "--domain", "ball:2", "--F", "log", "--grid", "-2:2:3"],
    ["eval", "--domain", "ball:2", "--F", "log", "--points", "[[0.1, [0.2, 0.1], 0.3]]"],
    ["eval", "--domain", "ball:1", "--points", "[[0.5]]", "--paths", "closed"],
]
for args in requests:
    proc = subprocess.run([berg, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode}: {proc.stderr}")
    validator.validate(json.loads(proc.stdout))
    print("ok:", " ".join(args))
