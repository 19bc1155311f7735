import numpy as np
import pytest

from wkern import annulus, assemble, disk, sample_weight
from wkern.weights import constant

ACCEPTANCE = []


@pytest.fixture(scope="session")
def disk256():
    return disk(256)


@pytest.fixture(scope="session")
def annulus256():
    return annulus(0.5, 256)


@pytest.fixture(scope="session")
def disk_system(disk256):
    return assemble(disk256, sample_weight(constant(1.0), disk256))


@pytest.fixture(scope="session")
def annulus_system(annulus256):
    return assemble(annulus256, sample_weight(constant(1.0), annulus256))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def accept():
    """Record one acceptance line: accept(criterion, label, value, tolerance, ok=None)."""

    def record(criterion, label, value, tolerance, ok=None, relation="<="):
        if ok is None:
            ok = bool(np.isfinite(value) and value <= tolerance)
        ACCEPTANCE.append((criterion, label, float(value), float(tolerance), relation, bool(ok)))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit, label, value, tol, rel, ok in sorted(ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {crit:>2}: {label}: {value:.3e} (need {rel} {tol:.1e})")
