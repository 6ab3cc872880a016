import pytest

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title)`` returns a recorder."""

    def start(number: int, title: str):
        _ACCEPTANCE[number] = (title, False, "did not finish")

        def finish(ok: bool, detail: str = ""):
            _ACCEPTANCE[number] = (title, ok, detail)

        return finish

    return start


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}  {detail}")
