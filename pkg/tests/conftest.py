import pytest

ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record a criterion outcome: ``acceptance(k, title, passed, detail)``."""

    def record(k, title, passed, detail=""):
        ACCEPTANCE[k] = (title, bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        tr.write_line(line)
