import time

import pytest

from optomech_rabi.config import preset
from optomech_rabi.engine import integrate
from optomech_rabi.hilbert import build_hamiltonian, excitation_number, initial_state

# One line per acceptance criterion, echoed in the terminal summary so the
# outcome is visible without -s.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class FigureRuns:
    """Figure-preset runs shared by the acceptance tests, computed on first use."""

    def __init__(self):
        self._cache = {}

    def get(self, name, d_m=None):
        key = (name, d_m)
        if key not in self._cache:
            cfg = preset(name)
            if d_m is not None:
                cfg = cfg.with_(d_m=d_m)
            p = cfg.params()
            H = build_hamiltonian(p)
            extra = {"n_exc": excitation_number(p), "energy": H}
            start = time.perf_counter()
            series = integrate(initial_state(p), cfg.evolution_spec(), extra=extra, H=H,
                               eigensolver=cfg.eigensolver)
            elapsed = time.perf_counter() - start
            self._cache[key] = (cfg, series, elapsed)
        return self._cache[key]


@pytest.fixture(scope="session")
def figure_runs():
    return FigureRuns()
