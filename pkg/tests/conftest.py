"""Shared fixtures: the default solver configuration and catalog models."""

import pytest

from qhjlab import harmonic, morse, polynomial, quartic
from qhjlab.potentials import SolverConfig


@pytest.fixture(scope="session")
def cfg():
    return SolverConfig()


@pytest.fixture(scope="session")
def catalog():
    """One representative instance per potential kind."""
    return {
        "harmonic": harmonic(1.0, 1.0),
        "morse": morse(8.0, 1.0, 0.0),
        "quartic": quartic(1.0, 1.0),
        "polynomial": polynomial((0.0, 0.0, 0.5, 0.1, 0.1)),
    }
