import pytest

_ACCEPTANCE: list = []


@pytest.fixture
def criterion():
    """Register ``(id, text, passed, detail)`` for the acceptance summary."""

    def record(cid: str, text: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((cid, text, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, text, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        extra = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {cid}: {status} - {text}{extra}")
