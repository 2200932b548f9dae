import pytest

_LINES = []


@pytest.fixture
def criterion():
    """record(number, title, ok, elapsed, limit, detail="") appends one
    PASS/FAIL line; a criterion passes only if it holds within its limit."""

    def record(number, title, ok, elapsed, limit, detail=""):
        timely = elapsed < limit
        status = "PASS" if ok and timely else "FAIL"
        line = f"{status} criterion {number:2d}: {title} [{elapsed:.1f}s / {limit}s]"
        if not timely:
            line += " (over time)"
        if detail:
            line += f": {detail}"
        _LINES.append(line)
        print(line)
        return ok and timely

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
