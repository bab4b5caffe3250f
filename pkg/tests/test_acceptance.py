"""Acceptance criteria 1-13.  Each test prints one PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary.
"""

import pytest

from dendrokit.checks import CRITERIA


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i + 1:02d}" for i in range(len(CRITERIA))])
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    import sys

    failed = 0
    for check in CRITERIA:
        r = check()
        print(r.line(), flush=True)
        failed += not r.passed
    sys.exit(1 if failed else 0)
