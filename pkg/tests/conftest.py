import pytest

ACCEPTANCE = {}


@pytest.fixture
def acceptance_record():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, name, seconds, limit, detail = ACCEPTANCE[num]
        line = f"criterion {num} {'PASS' if ok else 'FAIL'}  {name}  ({seconds:.1f} s, limit {limit} s)"
        if not ok and detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
