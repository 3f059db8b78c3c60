"""Brute-force eigenvalue reference: Numerov shooting on the real axis.

Deliberately shares no integrator with the contour or shooting engines,
so agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.optimize import brentq

from .errors import NoBoundStateError, OracleConvergenceError
from .potentials import PotentialModel, energy_ceiling, eval_potential, well_minimum


@dataclass(frozen=True)
class OracleConfig:
    """Grid and refinement settings for the Numerov reference solver."""

    domain_halfwidth: float | None = None
    grid_points: int = 8192
    refinement_rounds: int = 3

    def __post_init__(self):
        if self.grid_points < 1024:
            raise ValueError("grid_points must be >= 1024")


@njit(cache=True)
def _numerov_sweep(k2, h, kappa_edge):
    """Forward Numerov sweep with a decaying exponential seed at index 0."""
    n = k2.shape[0]
    h2 = h * h
    psi = np.empty(n)
    f = 1.0 + h2 * k2 / 12.0
    psi[0] = 1e-12
    psi[1] = psi[0] * math.exp(kappa_edge * h)
    for i in range(1, n - 1):
        val = ((12.0 - 10.0 * f[i]) * psi[i] - f[i - 1] * psi[i - 1]) / f[i + 1]
        a = abs(val)
        if a > 1e100:
            s = 1.0 / a
            val *= s
            psi[i] *= s
        psi[i + 1] = val
    return psi


@njit(cache=True)
def _count_sign_changes(psi, lo, hi):
    count = 0
    prev = 0.0
    for i in range(lo, hi + 1):
        v = psi[i]
        if v == 0.0:
            continue
        if prev != 0.0 and v * prev < 0.0:
            count += 1
        prev = v
    return count


class _NumerovGrid:
    """Uniform grid with cached V samples and both-edge sweeps."""

    def __init__(self, model: PotentialModel, x_lo: float, x_hi: float, n: int, hbar: float):
        self.x = np.linspace(x_lo, x_hi, n)
        self.h = self.x[1] - self.x[0]
        self.v = np.real(eval_potential(model, self.x)).astype(np.float64)
        self.coeff = 2.0 * model.mass / hbar**2
        self.mi = int(np.argmin(self.v))
        if self.mi < 5 or self.mi > n - 6:
            self.mi = n // 2

    def k2(self, E):
        return self.coeff * (E - self.v)

    def _kappa(self, k2, i):
        return math.sqrt(max(-k2[i], 0.0))

    def sweep_left(self, E):
        k2 = self.k2(E)
        return _numerov_sweep(k2, self.h, self._kappa(k2, 0))

    def sweep_right(self, E):
        k2 = self.k2(E)[::-1].copy()
        return _numerov_sweep(k2, self.h, self._kappa(k2, 0))[::-1]

    def node_count(self, E):
        # The forbidden-region tails are monotone exponentials (the seed is
        # the decaying branch), so the full interior is free of spurious
        # sign changes and the count flips exactly at eigenvalues.
        psi = self.sweep_left(E)
        return int(_count_sign_changes(psi, 1, len(psi) - 2))

    def mismatch(self, E):
        """Wronskian-style defect between the two sweeps at the match index.

        Zero exactly at eigenvalues; the central-difference error cancels
        when the sweeps are proportional.
        """
        mi = self.mi
        pl = self.sweep_left(E)
        pr = self.sweep_right(E)
        dl = (pl[mi + 1] - pl[mi - 1]) / (2.0 * self.h)
        dr = (pr[mi + 1] - pr[mi - 1]) / (2.0 * self.h)
        sl = math.hypot(pl[mi], dl * self.h) or 1.0
        sr = math.hypot(pr[mi], dr * self.h) or 1.0
        return (dl * pr[mi] - dr * pl[mi]) / (sl * sr) * self.h

    def matched_eigenfunction(self, E):
        pl = self.sweep_left(E)
        pr = self.sweep_right(E)
        mi = self.mi
        w = slice(max(0, mi - 5), mi + 6)
        denom = float(np.dot(pr[w], pr[w]))
        c = float(np.dot(pl[w], pr[w])) / denom if denom > 0 else 1.0
        psi = np.concatenate([pl[: mi + 1], c * pr[mi + 1 :]])
        return psi


def _auto_edges(model: PotentialModel, E_ref: float, hbar: float) -> tuple[float, float]:
    """March outward until the tail is deep enough for a decaying seed.

    Each edge accumulates 18 decay e-folds of the reference-energy decay
    exponent; a fixed potential offset would stop too early on steep
    walls, where boundary-seed contamination still reaches the well.
    """
    x_min, _ = well_minimum(model)
    edges = []
    for direction in (-1.0, 1.0):
        x = x_min
        step = 0.02 * max(1.0, abs(x_min))
        acc = 0.0
        kap_prev = 0.0
        for _ in range(2_000_000):
            x += direction * step
            v = float(np.real(eval_potential(model, x)))
            kap = math.sqrt(max(2.0 * model.mass * (v - E_ref), 0.0)) / hbar
            acc += 0.5 * (kap + kap_prev) * step
            kap_prev = kap
            if acc >= 18.0:
                break
        edges.append(x)
    return edges[0], edges[1]


def _solve_on_grid(grid: _NumerovGrid, model, n, v_min, ceiling):
    """Bracket level n by node count, then refine on the mismatch."""
    lo = v_min + 1e-9 * max(1.0, abs(v_min))
    hi = v_min + 1.0
    for _ in range(200):
        if hi >= ceiling:
            hi = v_min + (ceiling - v_min) * (1.0 - 1e-9)
            if grid.node_count(hi) < n + 1:
                raise NoBoundStateError(f"no bound state at level {n}")
            break
        if grid.node_count(hi) >= n + 1:
            break
        hi = v_min + 2.0 * (hi - v_min)
    else:
        raise NoBoundStateError(f"no bound state at level {n}")

    for _ in range(200):
        nl, nh = grid.node_count(lo), grid.node_count(hi)
        if nl == n and nh == n + 1:
            break
        mid = 0.5 * (lo + hi)
        if grid.node_count(mid) <= n:
            lo = mid
        else:
            hi = mid
    else:
        raise OracleConvergenceError("oracle not converged: node bracketing failed")

    wl, wh = grid.mismatch(lo), grid.mismatch(hi)
    if wl == 0.0:
        return lo
    if wh == 0.0:
        return hi
    if wl * wh < 0:
        return float(brentq(grid.mismatch, lo, hi, xtol=1e-14, rtol=8.9e-16))
    # Fall back to bisection on the node count alone.
    while hi - lo > 1e-13 * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if grid.node_count(mid) <= n:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oracle_eigenvalue(
    model: PotentialModel, n: int, ocfg: OracleConfig = OracleConfig(), hbar: float = 1.0
) -> float:
    """Numerov-shooting eigenvalue, stable under grid doubling to 1e-8."""
    if n < 0:
        raise NoBoundStateError("level index must be nonnegative")
    x_min, v_min = well_minimum(model)
    ceiling = energy_ceiling(model)
    finite = math.isfinite(ceiling)

    # Reference energy for sizing the domain.  A bounded well caps every
    # level below the ceiling; an unbounded one grows on demand.
    if finite:
        E_ref = v_min + 0.99 * (ceiling - v_min)
    else:
        E_ref = v_min + max(2.0 * hbar, 4.0 * (n + 1) * hbar)

    prev = None
    points = ocfg.grid_points
    for _ in range(ocfg.refinement_rounds + 8):
        if ocfg.domain_halfwidth is not None:
            x_lo, x_hi = x_min - ocfg.domain_halfwidth, x_min + ocfg.domain_halfwidth
        else:
            x_lo, x_hi = _auto_edges(model, E_ref, hbar)
        grid = _NumerovGrid(model, x_lo, x_hi, points, hbar)
        E = _solve_on_grid(grid, model, n, v_min, ceiling)
        if (
            ocfg.domain_halfwidth is None
            and not finite
            and E > E_ref - 1e-9 * max(1.0, abs(E))
        ):
            # Domain sized too low for this level; grow and retry.
            E_ref = v_min + 2.4 * (E - v_min) + hbar
            continue
        if prev is not None and abs(E - prev) <= 1e-8 * max(1.0, abs(E)):
            return float(E)
        prev = E
        points *= 2
    raise OracleConvergenceError(f"oracle not converged at level {n}")


def oracle_nodes(
    model: PotentialModel, E_n: float, ocfg: OracleConfig = OracleConfig(), hbar: float = 1.0
) -> int:
    """Interior sign changes of the matched eigenfunction at energy E_n."""
    x_min, _ = well_minimum(model)
    if ocfg.domain_halfwidth is not None:
        x_lo, x_hi = x_min - ocfg.domain_halfwidth, x_min + ocfg.domain_halfwidth
    else:
        x_lo, x_hi = _auto_edges(model, E_n, hbar)
    grid = _NumerovGrid(model, x_lo, x_hi, ocfg.grid_points, hbar)
    psi = grid.matched_eigenfunction(E_n)
    return int(_count_sign_changes(psi, 1, len(psi) - 2))
