"""One check per acceptance criterion, each driven by its property suite.

Every criterion prints a PASS/FAIL line (collected in the terminal summary)
and fails if the suite finds a counterexample or overruns its time limit.
"""

from __future__ import annotations

import pytest

from conftest import ACCEPTANCE_LINES
from netcode.suites import ACCEPTANCE, run_suite

# criterion -> runtime limit in seconds
LIMITS = {1: 10, 2: 30, 3: 300, 4: 300, 5: 600, 6: 300, 7: 120, 8: 10, 9: 300, 10: 900, 11: 900, 12: 300}


# the acceptance suites run in criterion order; the searched instance completes criterion 11
NAMES = [*ACCEPTANCE, "example4"]
IDS = [f"criterion{i:02d}" for i in range(1, len(ACCEPTANCE) + 1)] + ["criterion11-instance"]


@pytest.mark.slow
@pytest.mark.parametrize("name", NAMES, ids=IDS)
def test_criterion(name):
    res = run_suite(name)
    assert name == "example4" or res.criterion == NAMES.index(name) + 1
    limit = LIMITS[res.criterion]
    in_time = res.seconds <= limit
    verdict = "PASS" if res.passed and in_time else "FAIL"
    line = (
        f"[{verdict}] criterion {res.criterion:>2} {name}: {res.description} "
        f"({res.checked} checks, {res.seconds:.1f} s of {limit} s)"
    )
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert res.passed, res.counterexamples[:3]
    assert in_time, f"{name} took {res.seconds:.1f} s, limit {limit} s"

