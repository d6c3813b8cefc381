from __future__ import annotations

import pytest

from accelmc.solver import Session, SolverConfig, SolverError


@pytest.fixture(scope="session")
def solver_pool():
    """One solver process for the whole test run; ~0.7 s of startup per
    process makes per-test processes painful."""
    try:
        s = Session(SolverConfig())
    except SolverError as e:  # pragma: no cover - solver is installed in CI
        pytest.skip(f"no solver available: {e}")
    yield s
    s.close()


@pytest.fixture
def session(solver_pool):
    solver_pool.reset()
    return solver_pool
