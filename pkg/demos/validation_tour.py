"""
Checking closed forms against the oracle
========================================

Every closed form has a brute-force counterpart in ``oracle``. Printed
expressions that disagree with the defining sums come out as
documented deviations instead of failures.
"""

from casimir_thermo.oracle import summarize, validate_all
from casimir_thermo.validation import p_factor_cases, ribbon_cases, scalar3d_cases

reports = validate_all(ribbon_cases() + scalar3d_cases() + p_factor_cases())
print(summarize(reports))
for r in reports:
    if r.status != "pass":
        print(f"{r.scenario:28s} {r.quantity:18s} {r.relative_deviation:9.2e}  {r.note}")
