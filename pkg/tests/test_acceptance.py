"""One test per acceptance criterion, each at its stated tolerance and time limit.

Every run prints a single ``[PASS]`` or ``[FAIL]`` line per criterion; the lines
are also collected into the terminal summary.
"""

import pytest

from noisyrec.verification import CRITERIA, VerifyOptions, run_check

from . import conftest


@pytest.mark.parametrize("check_id", list(CRITERIA))
def test_criterion(check_id):
    result = run_check(check_id, VerifyOptions())
    line = result.line()
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.numeric_ok, line
    assert result.within_time, f"{check_id} took {result.elapsed:.2f}s, limit {result.time_limit}s"
