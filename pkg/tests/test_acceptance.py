"""Acceptance criteria at full scale with seed 7.

Run ``pytest tests/test_acceptance.py -v`` for one line per criterion; the
suite's own PASS/FAIL lines are repeated in the terminal summary.
"""
import pytest

from wmcs.acceptance import CRITERIA, DETERMINISM_BOUND, run_suite

SEED = 7
LINES: list[str] = []
KEYS = [f"C{c.number:02d}.{c.slug}" for c in CRITERIA] + ["C13.determinism"]


@pytest.fixture(scope="module")
def suite():
    first = run_suite("acceptance", SEED, echo=LINES.append)
    return first


@pytest.fixture(scope="module")
def second_run():
    return run_suite("acceptance", SEED)


class TestAcceptance:
    """Every criterion passes within its time bound."""

    @pytest.mark.parametrize("key", KEYS)
    def test_criterion(self, suite, key):
        v = suite.get(key)
        assert v is not None, f"{key} did not run"
        assert v.passed, suite.witnesses.get(key)

    def test_bounds_recorded(self, suite):
        assert DETERMINISM_BOUND == 600
        for key in KEYS:
            assert "over_time_bound" not in suite.witnesses[key]

    def test_separate_invocations_identical(self, suite, second_run):
        assert suite.to_json() == second_run.to_json()
        assert suite.to_dict()["summary"] == {"asserted": 13, "failed": 0}
