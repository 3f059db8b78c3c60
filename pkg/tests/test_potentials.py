"""Catalog construction, complex evaluation, and closed-form spectra."""

import math

import numpy as np
import pytest

from qhjlab import closed_form_energy, eval_F, eval_potential, harmonic, morse, polynomial, quartic
from qhjlab.errors import AnalyticDomainError, ConfigError, NoBoundStateError
from qhjlab.potentials import (
    PotentialModel,
    SolverConfig,
    energy_ceiling,
    eval_dF,
    eval_gradient,
    morse_level_capacity,
    well_minimum,
)


def test_harmonic_values():
    m = harmonic(2.0, 3.0)
    assert eval_potential(m, 1.0) == pytest.approx(0.5 * 2.0 * 9.0)
    assert eval_potential(m, 0.0) == 0.0


def test_morse_values():
    m = morse(8.0, 1.0, 0.5)
    assert eval_potential(m, 0.5) == 0.0
    assert eval_potential(m, 50.0) == pytest.approx(8.0, rel=1e-12)


def test_quartic_and_polynomial_agree():
    q = quartic(1.0, 0.7)
    p = polynomial((0.0, 0.0, 0.5, 0.0, 0.7))
    xs = np.linspace(-2.0, 2.0, 41)
    np.testing.assert_allclose(eval_potential(q, xs), eval_potential(p, xs), rtol=1e-14)


@pytest.mark.parametrize("factory,args", [
    (harmonic, (1.0, 1.0)),
    (morse, (8.0, 1.0, 0.3)),
    (quartic, (1.0, 1.0)),
    (polynomial, ((0.0, 0.1, 0.5, 0.1, 0.1),)),
])
def test_gradient_matches_finite_difference(factory, args):
    m = factory(*args)
    h = 1e-6
    for z in (0.4, -1.1, 0.3 + 0.2j):
        fd = (eval_potential(m, z + h) - eval_potential(m, z - h)) / (2 * h)
        assert eval_gradient(m, z) == pytest.approx(fd, rel=1e-7, abs=1e-9)


def test_eval_F_and_dF_consistency():
    m = quartic(1.5, 0.3)
    z = 0.7 - 0.1j
    E = 2.0
    assert eval_F(m, E, z) == pytest.approx(2.0 * 1.5 * (E - eval_potential(m, z)))
    assert eval_dF(m, E, z) == pytest.approx(-2.0 * 1.5 * eval_gradient(m, z))


def test_complex_array_evaluation():
    m = harmonic(1.0, 1.0)
    zs = np.array([1.0 + 1.0j, -0.5j, 2.0])
    np.testing.assert_allclose(eval_potential(m, zs), 0.5 * zs * zs, rtol=1e-15)


def test_analytic_domain_enforced():
    m = PotentialModel("harmonic", 1.0, {"omega": 1.0}, analytic_halfwidth=0.5)
    eval_potential(m, 0.2 + 0.4j)
    with pytest.raises(AnalyticDomainError):
        eval_potential(m, 0.2 + 0.6j)


@pytest.mark.parametrize("bad", [
    lambda: PotentialModel("unknown", 1.0, {}),
    lambda: PotentialModel("harmonic", -1.0, {"omega": 1.0}),
    lambda: PotentialModel("harmonic", 1.0, {"omega": -2.0}),
    lambda: PotentialModel("harmonic", 1.0, {}),
    lambda: PotentialModel("harmonic", 1.0, {"omega": 1.0, "junk": 2.0}),
    lambda: PotentialModel("morse", 1.0, {"D": -8.0, "a": 1.0}),
    lambda: PotentialModel("quartic", 1.0, {"lam": -0.1}),
    lambda: polynomial((0.0, 1.0, 0.0, 1.0)),          # odd degree
    lambda: polynomial((0.0, 0.0, -1.0)),              # downward parabola
])
def test_invalid_models_rejected(bad):
    with pytest.raises(ConfigError):
        bad()


def test_well_minimum():
    assert well_minimum(harmonic(1.0, 1.0)) == (0.0, 0.0)
    assert well_minimum(morse(8.0, 1.0, 0.7)) == (0.7, 0.0)
    x, v = well_minimum(polynomial((1.0, -2.0, 1.0)))  # (x-1)^2
    assert x == pytest.approx(1.0, abs=1e-6)
    assert v == pytest.approx(0.0, abs=1e-12)


def test_energy_ceiling():
    assert energy_ceiling(morse(8.0, 1.0)) == 8.0
    assert math.isinf(energy_ceiling(harmonic(1.0, 1.0)))


def test_morse_capacity():
    # sqrt(2 m D)/(a hbar) = 4, so n + 1/2 < 4 admits n = 0..3.
    assert morse_level_capacity(morse(8.0, 1.0)) == 3
    assert morse_level_capacity(morse(8.0, 1.0), hbar=2.0) == 1


def test_closed_forms():
    h = harmonic(1.0, 2.0)
    assert closed_form_energy(h, 3) == pytest.approx(7.0)
    m = morse(8.0, 1.0)
    # hbar*w = 4, E_n = 4(n+1/2) - [4(n+1/2)]^2/32.
    assert closed_form_energy(m, 0) == pytest.approx(1.875)
    assert closed_form_energy(m, 3) == pytest.approx(7.875)
    assert closed_form_energy(quartic(1.0, 1.0), 0) is None
    with pytest.raises(NoBoundStateError):
        closed_form_energy(m, 4)


def test_solver_config_validation():
    assert SolverConfig().h == pytest.approx(2.0 * math.pi)
    assert SolverConfig(hbar=0.5).h == pytest.approx(math.pi)
    for kwargs in ({"hbar": 0.0}, {"energy_tol": -1.0}, {"contour_margin": 1.0},
                   {"contour_nodes": 32}, {"max_iterations": 0}):
        with pytest.raises(ConfigError):
            SolverConfig(**kwargs)
