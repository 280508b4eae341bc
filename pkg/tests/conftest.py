import pytest

from rungepairs import corpus
from rungepairs.domain import rasterize


@pytest.fixture(scope="session")
def fixture_grids():
    """The named fixture pairs rasterized at 129."""
    return {name: (rasterize(D, None, 129), rasterize(D1, None, 129))
            for name, (D, D1) in corpus.fixture_pairs().items()}


def grid(spec, resolution=129, box=None):
    return rasterize(spec, box, resolution)



def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.TITLES):
        terminalreporter.write_line(verdicts.get(n, f"criterion {n}: NOT RUN  {mod.TITLES[n]}"))
