"""usage: validate_reports.py <schema.json> <report.json>..."""

import json
import sys

import jsonschema

validator = jsonschema.Draft202012Validator(json.load(open(sys.argv[1])))
bad = 0
for path in sys.argv[2:]:
    errors = list(validator.iter_errors(json.load(open(path))))
    print(f"{path}: {len(errors)} error(s)")
    for e in errors[:5]:
        print("   ", "/".join(map(str, e.absolute_path)), e.message[:200])
    bad += bool(errors)
sys.exit(1 if bad else 0)
