"""Acceptance run: every criterion on the ``full`` profile, one printed line each.

The two nabla pairings of criterion 9 disagree with their matrices because
the nabla rule set cannot derive ``p |- #p``; that outcome is asserted as
the documented state and reported as an expected failure.  If those pairings
ever start agreeing the test fails, so the record has to be revisited.
"""

import os

import pytest

from islogic.harness import run_paper_checks

pytestmark = pytest.mark.slow

# criterion -> wall-clock bound in seconds (None: "minutes" on the full profile)
BOUNDS = {1: 1, 2: 1, 3: 5, 4: 1, 5: 2, 6: 2, 7: 2, 8: 60, 9: None, 10: None, 11: 120, 12: 1}
KNOWN_RED = {"crosscheck-B-nabla", "crosscheck-K-nabla"}
SEED = 0


@pytest.fixture(scope="module")
def report():
    return run_paper_checks("ALL", seed=SEED, profile="full", jobs=os.cpu_count() or 1)


def _line(n, results, seconds, ok):
    parts = [f"{r.name}={'PASS' if r.passed else 'FAIL'}" for r in results]
    return f"CRITERION {n:2d} {'PASS' if ok else 'FAIL'} {seconds:.2f}s " + " ".join(parts)


@pytest.mark.parametrize("n", sorted(BOUNDS))
def test_criterion(n, report, capsys):
    results = [r for r in report.results if r.criterion == n]
    assert results, f"no checks registered for criterion {n}"
    seconds = sum(r.seconds for r in results)
    ok = all(r.passed for r in results)
    bound = BOUNDS[n]
    in_time = bound is None or seconds < bound
    with capsys.disabled():
        print("\n" + _line(n, results, seconds, ok and in_time))
        for r in results:
            if not r.passed or "flagged" in r.detail:
                print(f"    {r.name}: {r.detail}")
    assert in_time, f"criterion {n} took {seconds:.1f}s, bound {bound}s"
    failing = {r.name for r in results if not r.passed}
    if n == 9:
        assert failing <= KNOWN_RED, f"unexpected failures: {sorted(failing - KNOWN_RED)}"
        assert failing == KNOWN_RED, "nabla pairings now agree; revisit the recorded incompleteness"
        pytest.xfail("nabla rule set misses p |- #p; see the decision record")
    assert not failing, "; ".join(f"{r.name}: {r.detail}" for r in results if not r.passed)
