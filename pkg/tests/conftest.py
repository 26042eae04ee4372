import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


class AcceptanceLog:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title

    def report(self, ok: bool, detail: str) -> None:
        line = f"criterion {self.number} {'PASS' if ok else 'FAIL'}: {self.title} ({detail})"
        _RESULTS[self.number] = (ok, line)
        print(line)
        assert ok, line


@pytest.fixture
def criterion():
    return AcceptanceLog


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[number][1])
