"""Shared fixtures: expensive benchmark solves are computed once per session."""

import numpy as np
import pytest

from specschrod import anharmonic, coffey_evans, coulomb_decay, harmonic, hydrogen
from specschrod.eig import EigConfig
from specschrod.solve import assemble_and_solve

_ACCEPTANCE_LINES = []


def record_criterion(number, name, passed, detail=""):
    line = f"criterion {number} [{name}]: {'PASS' if passed else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def solved():
    """Memoized ``(pot_name, n, extra, backend, vectors) -> (op, sol, seconds)``."""
    import time

    cache = {}
    factories = {
        "coffey_evans": (coffey_evans, {}),
        "hydrogen": (hydrogen, {"c": 2.0}),
        "coulomb_decay": (coulomb_decay, {"c": 2.0}),
        "anharmonic": (anharmonic, {"h": 0.1}),
        "harmonic": (harmonic, {"h": 0.2}),
    }

    def get(name, n, backend="reference", vectors=True):
        key = (name, n, backend, vectors)
        if key not in cache:
            factory, kw = factories[name]
            cfg = EigConfig(backend=backend, compute_vectors=vectors)
            t0 = time.perf_counter()
            op, sol = assemble_and_solve(factory(), n, cfg, **kw)
            cache[key] = (op, sol, time.perf_counter() - t0)
        return cache[key]

    return get
