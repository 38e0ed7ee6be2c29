import pytest

from digraphs.algebra import TermTable
from digraphs.checks import CHECKS, CheckResult, parity_table, run_checks
from digraphs.errors import DomainError
from digraphs.settings import Settings
from test_utils import read_fixture

QUICK_CHECKS = [
    "gallery",
    "chain-meet",
    "fig3",
    "z2-witness",
    "free-extreme",
    "olsak",
    "d-retract",
    "negative-control",
]


@pytest.mark.parametrize("name", QUICK_CHECKS)
def test_quick_checks_pass(name):
    [result] = run_checks(only=[name])
    assert result.name == name
    assert result.passed, result.detail


def test_corrupted_fig3_is_detected():
    [result] = run_checks(only=["fig3"], fig3_text=read_fixture("fig3_corrupted.dg"))
    assert not result.passed
    assert "matches stored digraph" in result.detail


def test_negative_control_reports_dropped_edge():
    [result] = run_checks(only=["negative-control"])
    assert result.detail == "dropped edge 0->1"


def test_budget_limited_check_fails_with_reason():
    [result] = run_checks(Settings(free_budget=2), only=["free-extreme"])
    assert not result.passed
    assert result.detail.startswith("budget-limited")


def test_unknown_check_is_rejected():
    with pytest.raises(DomainError):
        run_checks(only=["gallery", "nope"])


def test_result_lines():
    assert CheckResult("gallery", True).line() == "PASS gallery"
    assert CheckResult("rho", False, "2 incompatible").line() == "FAIL rho: 2 incompatible"


def test_parity_table():
    assert parity_table((0,)) == TermTable.projection(2, 6, 0)
    assert parity_table(()) == TermTable(2, 6, (0,) * 64)


@pytest.mark.slow
def test_full_suite_passes():
    results = run_checks()
    assert [r.name for r in results] == list(CHECKS)
    failed = [r.line() for r in results if not r.passed]
    assert not failed, failed
