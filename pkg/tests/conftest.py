import pytest

from keycast.graph import make_instance

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def line():
    # s -> v -> d, edges 0 and 1
    return make_instance([("s", "v"), ("v", "d")], "s", [{"d"}])


@pytest.fixture
def diamond():
    return make_instance([("s", "u"), ("s", "w"), ("u", "t"), ("w", "t")], "s", [{"t"}])


@pytest.fixture
def two_set_line():
    # both terminals hang off v, so the single edge (s, v) is everybody's cut
    return make_instance([("s", "v"), ("v", "d1"), ("v", "d2")], "s", [{"d1"}, {"d2"}])


@pytest.fixture
def acceptance():
    """Record a criterion's verdict for the end-of-run summary."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE[name] = (ok, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s[2:].split()[0])):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
