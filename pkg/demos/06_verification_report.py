"""The verification suite as a library call; the CLI ``cmray verify`` wraps it.

Run with ``python3 demos/06_verification_report.py``.
"""

import json

import jsonschema

from cmray.suite import REPORT_SCHEMA, report_passed, run_suite

report = run_suite(-7, 5, suite="identities", prec=256)
jsonschema.validate(report, REPORT_SCHEMA)
for check in report["checks"]:
    print(f"{check['name']:26s} {check['status']:5s} residual {check['residual']:>12s} margin {check['margin']}")
print("all passed:", report_passed(report))
print(json.dumps(report["checks"][0], indent=2))
