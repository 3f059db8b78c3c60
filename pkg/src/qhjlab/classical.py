"""Classical-limit quantities: turning points, momentum, loop action."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ForbiddenRegionError,
    MultipleClassicalRegionsError,
    NoClassicalRegionError,
    NonlinearTurningPointError,
    QuadratureFailureError,
)
from .potentials import (
    PotentialModel,
    energy_ceiling,
    eval_dF,
    eval_F,
    well_minimum,
)


@dataclass(frozen=True)
class TurningPair:
    """The two simple real turning points bracketing the classical region."""

    x1: float
    x2: float

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def center(self) -> float:
        return 0.5 * (self.x1 + self.x2)


def _f_real(model, E, x):
    return np.real(eval_F(model, E, x))


def turning_points(model: PotentialModel, E: float, grid: int = 2048) -> TurningPair:
    """Locate the unique turning pair at energy E.

    Scans a geometrically grown bracketing box on a uniform grid, then
    refines each sign change with Brent's method.
    """
    x_min, v_min = well_minimum(model)
    if E <= v_min:
        raise NoClassicalRegionError(f"E={E} at or below well minimum {v_min}")
    if E >= energy_ceiling(model):
        raise NoClassicalRegionError(f"E={E} at or above the dissociation ceiling")

    L = max(1.0, abs(x_min) + 1.0)
    while _f_real(model, E, x_min - L) >= 0 or _f_real(model, E, x_min + L) >= 0:
        L *= 2.0
        if L > 1e9:
            raise NoClassicalRegionError("classical region not bounded")

    n = grid
    while True:
        xs = np.linspace(x_min - L, x_min + L, n)
        fs = _f_real(model, E, xs)
        idx = np.nonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) < 0)[0]
        if len(idx) >= 2 or n >= 32 * grid:
            break
        n *= 4

    roots = []
    for i in idx:
        r = brentq(lambda x: _f_real(model, E, x), xs[i], xs[i + 1], xtol=1e-15, rtol=8.9e-16)
        roots.append(float(r))

    if len(roots) < 2:
        raise NoClassicalRegionError("no classical region found at this energy")
    if len(roots) > 2:
        raise MultipleClassicalRegionsError(
            f"{len(roots)} turning points at E={E}: multiple classical regions"
        )

    ftol = 1e-12 * max(1.0, abs(E))
    scale = 2.0 * model.mass * max(1.0, abs(E))
    for r in roots:
        df = np.real(eval_dF(model, E, r))
        if abs(df) < 1e-8 * scale:
            raise NonlinearTurningPointError(f"non-linear turning point at x={r}")
        # Newton polish until |F| is within the root tolerance.
        for _ in range(4):
            f = _f_real(model, E, r)
            if abs(f) <= ftol:
                break
            r -= f / np.real(eval_dF(model, E, r))
    x1, x2 = sorted(roots)
    return TurningPair(x1, x2)


def classical_momentum(model: PotentialModel, E: float, x: float) -> float:
    """q0(x) = sqrt(2m(E - V(x))), nonnegative real branch."""
    f = float(_f_real(model, E, x))
    if f < -1e-12 * max(1.0, abs(E)):
        raise ForbiddenRegionError(f"classically forbidden point x={x}")
    return math.sqrt(max(f, 0.0))


def _tanh_sinh_sum(g, h: float, t_max: float) -> float:
    """Equal-weight double-exponential sum of g over nodes k*h in [-t_max, t_max]."""
    ks = np.arange(-int(t_max / h), int(t_max / h) + 1)
    ts = ks * h
    return float(np.sum(g(ts)) * h)


def classical_action(
    model: PotentialModel,
    E: float,
    quadrature_tol: float = 1e-11,
    max_iterations: int = 12,
) -> float:
    """S(E) = 2 * integral of sqrt(F) over the classical region.

    The interval is mapped through a tanh-sinh change of variable so the
    inverse-square-root-integrable endpoint behaviour converges
    geometrically under mesh halving.
    """
    tp = turning_points(model, E)
    c, w = tp.center, 0.5 * tp.width

    half_pi = 0.5 * math.pi

    def g(ts):
        sh = np.sinh(ts)
        ch = np.cosh(ts)
        u = np.tanh(half_pi * sh)
        xs = c + w * u
        jac = w * half_pi * ch / np.cosh(half_pi * sh) ** 2
        fs = np.maximum(_f_real(model, E, xs), 0.0)
        return np.sqrt(fs) * jac

    t_max = 3.6
    h = 0.5
    prev = _tanh_sinh_sum(g, h, t_max)
    for _ in range(max_iterations):
        h *= 0.5
        cur = _tanh_sinh_sum(g, h, t_max)
        if abs(cur - prev) <= quadrature_tol * max(1.0, abs(cur)):
            return 2.0 * cur
        prev = cur
    raise QuadratureFailureError(f"classical action quadrature not converged at E={E}")
