import numpy as np
import pytest

from nitsche_bands import PRESETS, Circle, Flower, LatticeSpec, PhononicCrystal

ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Collects one verdict line per acceptance criterion for the run summary."""
    def _record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lattice():
    return LatticeSpec.square(1.0)


@pytest.fixture(scope="session")
def au_circle(lattice):
    return PhononicCrystal(lattice, PRESETS["epoxy"], PRESETS["aurum"], Circle((0.5, 0.5), 0.25))


@pytest.fixture(scope="session")
def al_circle(lattice):
    return PhononicCrystal(lattice, PRESETS["epoxy"], PRESETS["aluminium"], Circle((0.5, 0.5), 0.25))


@pytest.fixture(scope="session")
def au_flower(lattice):
    return PhononicCrystal(lattice, PRESETS["epoxy"], PRESETS["aurum"], Flower.scaled(0.5))


@pytest.fixture(scope="session")
def epoxy_only(lattice):
    return PhononicCrystal(lattice, PRESETS["epoxy"], PRESETS["epoxy"], None)


@pytest.fixture(scope="session")
def au16(au_circle):
    return au_circle.discretize(16)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
