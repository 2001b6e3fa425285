import pytest

from tpa.squeezed import SqueezedParams, clear_cache
from tpa.sweeps import PAPER_AREA

from helpers import OMEGA_E, WBAR


@pytest.fixture
def sq_beam():
    """Paper-default band, vacuum state (cross-sections do not depend on beta0)."""
    return SqueezedParams(WBAR, OMEGA_E, 0.0, PAPER_AREA)


@pytest.fixture
def fresh_cache():
    clear_cache()
    yield
    clear_cache()


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
