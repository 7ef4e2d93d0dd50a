"""The ten acceptance criteria at their stated sample sizes and time limits.

Each test prints one PASS/FAIL line.  Run this file directly to get just the
report: ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import sys

import pytest

from outerspine.verify import SUITES


@pytest.mark.parametrize("name", list(SUITES))
def test_criterion(name, capsys):
    result = SUITES[name]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.details
    assert result.within_limit, f"{result.seconds:.1f}s exceeds {result.limit}s"


if __name__ == "__main__":
    ok = True
    for f in SUITES.values():
        r = f()
        print(r.line(), flush=True)
        ok = ok and r.passed and r.within_limit
    sys.exit(0 if ok else 1)
