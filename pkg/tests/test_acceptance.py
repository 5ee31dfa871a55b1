"""The acceptance suite: one test per criterion, each printing its verdict
line.  Run with -s to see the lines as they pass."""

import time

import pytest

from fillcalc.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    started = time.monotonic()
    result = run_criterion(name)
    elapsed = time.monotonic() - started
    mark = "pass" if result.passed else "FAIL"
    print(f"[{mark}] {name}: {result.detail} ({elapsed:.1f}s)")
    assert result.passed, f"{name}: {result.detail}"


def test_square_area_law_runtime_budget():
    started = time.monotonic()
    result = run_criterion("z2-area-law")
    assert result.passed
    assert time.monotonic() - started < 60.0


def test_bb_runtime_budget():
    started = time.monotonic()
    result = run_criterion("bb-complexes")
    assert result.passed
    assert time.monotonic() - started < 300.0
