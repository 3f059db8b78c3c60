"""Torus-loop quantization of separable systems."""

import pytest

from qhjlab import (
    QuantumNumbers,
    SeparableSystem,
    build_loops,
    ebk_spectrum,
    harmonic,
    loop_action,
    qhj_energy,
)
from qhjlab.errors import ConfigError, OffShellLoopError


@pytest.fixture(scope="module")
def osc2d():
    return SeparableSystem((("x", harmonic(1.0, 1.0)), ("y", harmonic(1.0, 2.0))))


def test_system_validation():
    with pytest.raises(ConfigError):
        SeparableSystem((("x", harmonic(1.0, 1.0)),))
    with pytest.raises(ConfigError):
        QuantumNumbers((0, -1))


def test_dimension_mismatch(osc2d, cfg):
    with pytest.raises(ConfigError):
        ebk_spectrum(osc2d, QuantumNumbers((1, 1, 1)), cfg)


def test_build_loops_geometry(osc2d, cfg):
    loops = build_loops(osc2d, (0.5, 1.0), cfg)
    assert len(loops) == 2
    for i, loop in enumerate(loops):
        assert loop.coordinate_index == i
        assert len(loop.fixed_points) == 1
        assert loop.contour.semi_axis_real > 0


def test_loop_action_off_shell(osc2d, cfg):
    loops = build_loops(osc2d, (0.8, 1.0), cfg)
    with pytest.raises(OffShellLoopError):
        loop_action(osc2d, (0.8, 1.0), loops[0], cfg)  # 0.8 is not a level of omega=1


def test_ground_torus(osc2d, cfg):
    r = ebk_spectrum(osc2d, QuantumNumbers((0, 0)), cfg)
    assert r.total_energy == pytest.approx(1.5, abs=1e-8)
    for act in r.loop_actions:
        assert abs(act.J.real) <= 1e-6
    for s, n in zip(r.semiclassical_actions, (0, 0)):
        assert s == pytest.approx((n + 0.5) * cfg.h, abs=1e-6 * cfg.h)


def test_excited_torus(osc2d, cfg):
    r = ebk_spectrum(osc2d, QuantumNumbers((2, 1)), cfg)
    assert r.total_energy == pytest.approx(2.5 + 3.0, abs=1e-8)
    assert [a.n_est for a in r.loop_actions] == [2, 1]
    assert r.coordinate_energies[0] == pytest.approx(2.5, abs=1e-8)
    assert r.coordinate_energies[1] == pytest.approx(3.0, abs=1e-8)


def test_three_coordinates(cfg):
    sys3 = SeparableSystem((
        ("x", harmonic(1.0, 1.0)),
        ("y", harmonic(1.0, 1.0)),
        ("z", harmonic(1.0, 2.0)),
    ))
    r = ebk_spectrum(sys3, QuantumNumbers((1, 0, 0)), cfg)
    assert r.total_energy == pytest.approx(1.5 + 0.5 + 1.0, abs=1e-8)
    assert len(r.loops) == 3
    assert all(len(loop.fixed_points) == 2 for loop in r.loops)


def test_loop_matches_1d_action(osc2d, cfg):
    E, act1d = qhj_energy(harmonic(1.0, 1.0), 1, cfg)
    loops = build_loops(osc2d, (E, 1.0), cfg)
    act = loop_action(osc2d, (E, 1.0), loops[0], cfg)
    assert act.J.real == pytest.approx(act1d.J.real, abs=1e-8)
