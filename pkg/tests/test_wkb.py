"""Semiclassical expansion terms, the residue identity, and WKB energies."""

import math

import numpy as np
import pytest

from qhjlab import (
    build_contour,
    expansion_terms,
    first_order_qmf_on_path,
    harmonic,
    morse,
    quartic,
    residue_identity_check,
    turning_points,
    wkb_energy,
)
from qhjlab.errors import LevelCapacityError, TurningPointSingularityError
from qhjlab.potentials import SolverConfig, eval_F


def test_expansion_terms_values():
    m = harmonic(1.0, 1.0)
    z = 3.0 + 0.5j
    E = 0.5
    t = expansion_terms(m, E, z, hbar=1.0)
    F = complex(eval_F(m, E, z))
    assert t.q0 == pytest.approx(np.sqrt(F))
    assert t.p_first_order == pytest.approx(t.q0 + t.q1)


def test_expansion_singular_at_turning_point():
    m = harmonic(1.0, 1.0)
    with pytest.raises(TurningPointSingularityError):
        expansion_terms(m, 0.5, 1.0)  # x = 1 is the turning point at E = 1/2


def test_first_order_branch_continuity():
    # A path over the upper half plane crosses both turning-point cuts.
    m = harmonic(1.0, 1.0)
    E = 2.0
    th = np.linspace(0.0, np.pi, 400)
    zs = 3.0 * np.cos(th) + 1.0j * np.sin(th)
    p = first_order_qmf_on_path(m, E, zs, hbar=1.0)
    steps = np.abs(np.diff(p))
    assert np.max(steps) < 0.1  # no branch flips mid-path


@pytest.mark.parametrize("model,E", [
    (harmonic(1.0, 1.0), 0.7),
    (harmonic(1.0, 1.0), 5.5),
    (quartic(1.0, 1.0), 3.3),
    (morse(8.0, 1.0), 4.0),
])
def test_residue_identity(model, E, cfg):
    contour = build_contour(model, turning_points(model, E), cfg)
    rep = residue_identity_check(model, E, contour, cfg)
    assert rep.passed
    assert rep.target == pytest.approx(-math.pi)
    assert rep.deviation <= 1e-8 * cfg.h


def test_residue_identity_scales_with_hbar():
    c = SolverConfig(hbar=0.25)
    m = harmonic(1.0, 1.0)
    contour = build_contour(m, turning_points(m, 0.5), c)
    rep = residue_identity_check(m, 0.5, contour, c)
    assert rep.value.real == pytest.approx(-0.25 * math.pi, rel=1e-12)


def test_wkb_exact_for_harmonic(cfg):
    m = harmonic(1.0, 2.0)
    for n in range(6):
        assert wkb_energy(m, n, cfg) == pytest.approx((n + 0.5) * 2.0, abs=1e-8)


def test_wkb_exact_for_morse(cfg):
    m = morse(8.0, 1.0)
    for n, exact in enumerate((1.875, 4.875, 6.875, 7.875)):
        assert wkb_energy(m, n, cfg) == pytest.approx(exact, abs=1e-7)


def test_wkb_morse_capacity(cfg):
    with pytest.raises(LevelCapacityError):
        wkb_energy(morse(8.0, 1.0), 4, cfg)
    with pytest.raises(LevelCapacityError):
        wkb_energy(harmonic(1.0, 1.0), -1, cfg)


def test_wkb_memoized(cfg):
    m = quartic(1.0, 1.0)
    assert wkb_energy(m, 2, cfg) == wkb_energy(quartic(1.0, 1.0), 2, cfg)
