"""Semiclassical quantization: hbar expansion terms, the turning-point
residue identity, and the half-integer action condition."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .classical import classical_action, turning_points
from .errors import (
    LevelCapacityError,
    NonlinearTurningPointError,
    TurningPointSingularityError,
)
from .potentials import (
    PotentialModel,
    SolverConfig,
    energy_ceiling,
    eval_dF,
    eval_F,
    well_minimum,
)
from .qmf import ContourSpec


@dataclass(frozen=True)
class ExpansionTerms:
    """Leading momentum-expansion terms in powers of hbar."""

    q0: complex
    q1: complex
    p_first_order: complex


def expansion_terms(
    model: PotentialModel, E: float, z: complex, hbar: float = 1.0
) -> ExpansionTerms:
    """q0 = sqrt(F), q1 = (i/4) F'/F, and their first-order combination.

    The square root is the principal branch; callers tracking a path must
    handle branch continuity themselves (see
    :func:`first_order_qmf_on_path`).
    """
    F = complex(eval_F(model, E, z))
    scale = 2.0 * model.mass * max(1.0, abs(E))
    if abs(F) < 1e-12 * scale:
        raise TurningPointSingularityError(f"turning point singularity at z={z}")
    q0 = cmath.sqrt(F)
    q1 = 0.25j * complex(eval_dF(model, E, z)) / F
    return ExpansionTerms(q0=q0, q1=q1, p_first_order=q0 + hbar * q1)


def first_order_qmf_on_path(model: PotentialModel, E: float, zs, hbar: float = 1.0):
    """First-order momentum along an ordered path, branch-continuous.

    The sign of sqrt(F) is flipped whenever consecutive values jump by
    more than their magnitude; the first point uses the principal branch.
    """
    zs = np.asarray(zs, dtype=complex)
    F = np.asarray(eval_F(model, E, zs), dtype=complex)
    q0 = np.sqrt(F)
    for k in range(1, len(q0)):
        if abs(q0[k] - q0[k - 1]) > abs(q0[k] + q0[k - 1]):
            q0[k] = -q0[k]
    q1 = 0.25j * np.asarray(eval_dF(model, E, zs), dtype=complex) / F
    return q0 + hbar * q1


@dataclass(frozen=True)
class ResidueReport:
    """Numerical check of the turning-point residue identity."""

    value: complex
    target: float
    deviation: float
    passed: bool


def residue_identity_check(
    model: PotentialModel, E: float, contour: ContourSpec, cfg: SolverConfig
) -> ResidueReport:
    """Evaluate (i hbar / 4) * loop integral of F'/F dz against -h/2.

    F has exactly two simple zeros (the turning points) inside the
    contour, each contributing residue one, so the loop integral is
    4 pi i and the weighted value is -h/2.
    """
    tp = turning_points(model, E)
    for x in (tp.x1, tp.x2):
        if abs(x - contour.center) >= contour.semi_axis_real:
            raise NonlinearTurningPointError(
                f"turning point {x} not strictly inside the contour"
            )

    thetas = contour.thetas
    zs = contour.point(thetas)
    integrand = np.asarray(eval_dF(model, E, zs)) / np.asarray(eval_F(model, E, zs))
    loop = np.mean(integrand * contour.tangent(thetas)) * 2.0 * math.pi
    value = complex(0.25j * cfg.hbar * loop)
    target = -0.5 * cfg.h
    deviation = abs(value - target)
    return ResidueReport(
        value=value,
        target=target,
        deviation=deviation,
        passed=deviation <= 1e-8 * cfg.h,
    )


_WKB_CACHE: dict = {}


def _cache_key(model: PotentialModel, n: int, cfg: SolverConfig):
    def freeze(v):
        return tuple(v) if isinstance(v, (list, tuple)) else v

    return (
        model.kind,
        model.mass,
        tuple(sorted((k, freeze(v)) for k, v in model.params.items())),
        model.analytic_halfwidth,
        n,
        cfg,
    )


def wkb_energy(model: PotentialModel, n: int, cfg: SolverConfig) -> float:
    """The unique E with classical action S(E) = (n + 1/2) h.

    Bracketing uses the strict monotonicity of S; refinement is Brent.
    The result is memoized per (model, n, config): callers routinely
    re-request neighboring levels while sizing search brackets.
    """
    if n < 0:
        raise LevelCapacityError("level index must be nonnegative")
    key = _cache_key(model, n, cfg)
    if key in _WKB_CACHE:
        cached = _WKB_CACHE[key]
        if isinstance(cached, Exception):
            raise cached
        return cached
    try:
        E = _wkb_energy_uncached(model, n, cfg)
    except LevelCapacityError as exc:
        _WKB_CACHE[key] = exc
        raise
    _WKB_CACHE[key] = E
    return E


def _wkb_energy_uncached(model: PotentialModel, n: int, cfg: SolverConfig) -> float:
    target = (n + 0.5) * cfg.h
    _, v_min = well_minimum(model)
    ceiling = energy_ceiling(model)

    def gap(E):
        return classical_action(model, E, cfg.quadrature_tol, cfg.max_iterations) - target

    step = cfg.hbar
    # lo must sit above the minimum by enough that the classical region is
    # resolvable on the turning-point grid, yet below E_0.
    lo = v_min + 1e-6 * step
    hi = v_min + step
    for _ in range(200):
        if hi >= ceiling:
            # Not closer than 1e-6 of the well depth: at the ceiling itself
            # the outer turning point degenerates (F' -> 0).
            hi = v_min + (ceiling - v_min) * (1.0 - 1e-6)
            if gap(hi) < 0:
                raise LevelCapacityError(f"level {n} beyond well capacity")
            break
        if gap(hi) >= 0:
            break
        lo = hi
        hi = v_min + 2.0 * (hi - v_min)
    else:
        raise LevelCapacityError(f"level {n} beyond well capacity")

    # S -> 0 at the well minimum, so gap(lo) < 0 as long as lo is close
    # enough to the bottom; nudge if the first guess is already past E_n.
    for _ in range(60):
        if gap(lo) <= 0:
            break
        lo = v_min + 0.5 * (lo - v_min)

    E = brentq(gap, lo, hi, xtol=1e-14, rtol=8.9e-16)
    if abs(gap(E)) > cfg.action_tol:
        raise LevelCapacityError(f"action condition not met at level {n}")
    return float(E)
