"""Acceptance criteria 1 to 12, each run at its stated tolerance.

Every criterion maps to one verification suite.  The test records a single
pass/fail line that is printed immediately and again in the session summary.
"""
import pytest
from conftest import ACCEPTANCE_LINES

from qfourier.verify import CRITERIA, SuiteConfig, run_suite

CONFIG = SuiteConfig()


def _summary(k: int, checks) -> str:
    failed = [c for c in checks if not c.passed]
    status = "PASS" if not failed else "FAIL"
    head = f"CRITERION {k:2d} {status}  {CRITERIA[k]}: {len(checks) - len(failed)} of {len(checks)} checks passed"
    if failed:
        head += "; failing: " + ", ".join(c.name for c in failed)
    return head


@pytest.mark.parametrize("k", sorted(CRITERIA), ids=lambda k: f"{k:02d}-{CRITERIA[k]}")
def test_acceptance(k):
    checks = run_suite(CRITERIA[k], CONFIG)
    assert checks, "suite produced no checks"
    line = _summary(k, checks)
    ACCEPTANCE_LINES[k] = line
    print(line)
    for c in checks:
        print("   ", c.line())
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)
