"""The nine acceptance criteria, one test each.

Every test prints its ``[PASS]``/``[FAIL]`` line; the lines are repeated in
an "acceptance criteria" section at the end of the pytest run.
"""
import pytest

from pairmodel.acceptance import CRITERIA, run_all

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    (result,) = run_all([number])
    line = result.line()
    print(line)
    for k, v in result.details.items():
        print(f"    {k}: {v}")
    ACCEPTANCE_LINES.append(line)
    assert result.passed, result.details
