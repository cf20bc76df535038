"""The eleven acceptance criteria, one test each.

The summary lines are printed at the end of the pytest run (see conftest).
"""

import pytest

from rickard.acceptance import CRITERIA

RESULTS = {}


@pytest.mark.parametrize("check", CRITERIA, ids=[fn.__name__ for fn in CRITERIA])
def test_criterion(check):
    res = check()
    RESULTS[res.number] = res
    print(res.line())
    assert res.passed, "\n".join(res.failures[:10])
