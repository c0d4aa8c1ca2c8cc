import pytest

_ACCEPTANCE: dict[str, list[tuple[str, bool]]] = {}


@pytest.fixture
def criterion(request):
    """Record sub-checks of an acceptance criterion for the end-of-run summary."""
    key = request.node.get_closest_marker("criterion").args[0]

    def check(label, ok):
        _ACCEPTANCE.setdefault(key, []).append((label, bool(ok)))
        return bool(ok)

    return check


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test implements")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split()[0])):
        checks = _ACCEPTANCE[key]
        ok = all(passed for _, passed in checks)
        detail = "; ".join(("" if passed else "FAILED ") + label for label, passed in checks)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
