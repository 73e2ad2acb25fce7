"""Acceptance criteria at full size, one test per criterion.

Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are repeated in
the terminal summary.  Run ``python3 tests/test_acceptance.py`` to get just
the report.
"""
import sys

import pytest

from gentle.suite import CHECKS, CheckResult

REPORT = []


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{n:02d}_{fn.__name__[6:]}" for n, fn in
                                               enumerate(CHECKS, 1)])
def test_criterion(check):
    result: CheckResult = check("full")
    REPORT.append(result.line())
    print(result.line())
    assert result.passed, result.detail


def main() -> int:
    results = [check("full") for check in CHECKS]
    for r in results:
        print(r.line(), flush=True)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
