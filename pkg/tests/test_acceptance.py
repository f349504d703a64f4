"""Acceptance criteria AC1-AC10, one pass/fail line each.

The full suite runs once per session; each criterion is then its own test
so a failure names the criterion and the checks behind it.
"""

import pytest

from curvelink import suites
from curvelink.report import Report

CRITERIA = [f"AC{i}" for i in range(1, 11)]


@pytest.fixture(scope="module")
def report():
    rep = Report(["acceptance"])
    rep.checks = suites.acceptance(quick=False, seed=0, timing=rep.timing)
    groups = rep.groups()
    print()
    for g in CRITERIA:
        ok = all(c.passed for c in groups[g])
        print(f"{g}: {'PASS' if ok else 'FAIL'}  {suites.CRITERIA[g]}  ({rep.timing[g]:.1f} s)")
    return rep


def test_every_criterion_reported(report):
    assert list(report.groups()) == CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA)
def test_criterion(report, criterion):
    checks = report.groups()[criterion]
    failed = [f"{c.name}: value {c.value!r}, reference {c.reference!r}, tol {c.tol!r}"
              for c in checks if not c.passed]
    line = f"{criterion}: {'FAIL' if failed else 'PASS'}  {suites.CRITERIA[criterion]}"
    print(line)
    assert not failed, "\n".join([line] + failed)
