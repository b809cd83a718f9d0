"""Acceptance suite: one test per reproduction criterion.

Each test prints a single PASS/FAIL line. Criteria 1, 3 and 12 fail on
purpose; the blocking analysis lives in the project decisions notes.
"""
import pytest

from pairwalk.reproduction import CRITERIA, run_criterion
from pairwalk.tolerances import DEFAULT

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", [k for k, _, _ in CRITERIA], ids=[f"criterion_{k:02d}" for k, _, _ in CRITERIA])
def test_criterion(number):
    res = run_criterion(number, DEFAULT)
    print(res.line())
    ACCEPTANCE_LINES.append(res.line())
    assert res.passed, res.line()
