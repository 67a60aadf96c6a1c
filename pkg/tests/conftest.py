import numpy as np
import pytest

acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record(request):
    """Collect one verdict line per acceptance check for the terminal summary."""
    lines = request.config.stash.setdefault(acceptance_key, [])

    def _record(criterion, ok, detail):
        verdict = "info" if ok is None else ("PASS" if ok else "FAIL")
        lines.append(f"criterion {criterion}: {verdict}  {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
