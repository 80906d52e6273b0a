import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load cached) jitted kernels once so timings exclude JIT."""
    from qrank import kernels

    basis = np.array([[1], [2]], dtype=np.uint64)
    empty = np.zeros(0, dtype=np.int64)
    kernels.gray_scan(basis, 2, np.uint64(1), 0, 4, empty, empty)
    kernels.gray_scan(basis, 2, np.uint64(1), 0, 4, np.zeros(2, np.int64), np.zeros(2, np.int64))
    kernels.batch_rank(np.zeros((2, 2), dtype=np.uint64), 4)
    w = np.array([[3], [1]], dtype=np.uint64)
    kernels.rref_inplace(w, 2)
    g = kernels.build_symplectic(np.ones((1, 1), dtype=np.uint64), np.zeros(1, dtype=np.uint64), 2)
    kernels.simulate_batch(g[None, :, :].repeat(2, axis=1), np.zeros((1, 2, 1), np.uint64), np.ones((1, 2), np.bool_), 2)
    yield


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """``criterion(id, ok, detail)`` records one PASS/FAIL line and asserts."""

    def record(ident: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {ident}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
