"""Catalog of analytic confining potentials with complex-plane evaluation.

Every catalog potential is an entire function of the position, so any
closed contour in the complex plane is automatically inside its analytic
domain.  The ``analytic_halfwidth`` field exists so that future singular
potentials can declare a finite strip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AnalyticDomainError, ConfigError, NoBoundStateError

KINDS = ("harmonic", "morse", "quartic", "polynomial")


@dataclass(frozen=True)
class PotentialModel:
    """An analytic 1D potential V with mass m, evaluable at complex positions."""

    kind: str
    mass: float
    params: dict = field(default_factory=dict)
    analytic_halfwidth: float = math.inf

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown potential kind {self.kind!r}")
        if self.mass <= 0:
            raise ConfigError("mass must be positive")
        p = self.params
        if self.kind == "harmonic":
            _require(p, {"omega"})
            if p["omega"] <= 0:
                raise ConfigError("harmonic omega must be positive")
        elif self.kind == "morse":
            _require(p, {"D", "a"}, optional={"x0"})
            if p["D"] <= 0 or p["a"] <= 0:
                raise ConfigError("morse requires D > 0 and a > 0")
        elif self.kind == "quartic":
            _require(p, {"lam"})
            if p["lam"] < 0:
                raise ConfigError("quartic lam must be nonnegative")
        elif self.kind == "polynomial":
            _require(p, {"coeffs"})
            coeffs = tuple(float(c) for c in p["coeffs"])
            deg = len(coeffs) - 1
            while deg > 0 and coeffs[deg] == 0.0:
                deg -= 1
            if deg < 2 or deg % 2 != 0:
                raise ConfigError("polynomial must have even degree >= 2")
            if coeffs[deg] <= 0:
                raise ConfigError("polynomial leading coefficient must be positive")
            object.__setattr__(self, "params", {"coeffs": coeffs})


def _require(params, required, optional=frozenset()):
    keys = set(params)
    missing = required - keys
    extra = keys - required - set(optional)
    if missing:
        raise ConfigError(f"missing potential parameters: {sorted(missing)}")
    if extra:
        raise ConfigError(f"unknown potential parameters: {sorted(extra)}")


def harmonic(mass: float = 1.0, omega: float = 1.0) -> PotentialModel:
    """V(x) = m omega^2 x^2 / 2."""
    return PotentialModel("harmonic", mass, {"omega": float(omega)})


def morse(D: float, a: float, x0: float = 0.0, mass: float = 1.0) -> PotentialModel:
    """V(x) = D (1 - exp(-a (x - x0)))^2."""
    return PotentialModel("morse", mass, {"D": float(D), "a": float(a), "x0": float(x0)})


def quartic(mass: float = 1.0, lam: float = 1.0) -> PotentialModel:
    """V(x) = x^2/2 + lam x^4."""
    return PotentialModel("quartic", mass, {"lam": float(lam)})


def polynomial(coeffs, mass: float = 1.0) -> PotentialModel:
    """V(x) = sum_k coeffs[k] x^k, confining (even degree, positive leading)."""
    return PotentialModel("polynomial", mass, {"coeffs": tuple(float(c) for c in coeffs)})


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs shared by the quantization engines.

    Planck's constant is always derived as h = 2*pi*hbar, never stored
    independently.
    """

    hbar: float = 1.0
    energy_tol: float = 1e-10
    action_tol: float = 1e-9
    quadrature_tol: float = 1e-11
    contour_margin: float = 1.3
    contour_nodes: int = 256
    max_iterations: int = 16

    def __post_init__(self):
        if self.hbar <= 0:
            raise ConfigError("hbar must be positive")
        for name in ("energy_tol", "action_tol", "quadrature_tol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.contour_margin <= 1:
            raise ConfigError("contour_margin must exceed 1")
        if self.contour_nodes < 64:
            raise ConfigError("contour_nodes must be >= 64")
        if self.max_iterations <= 0:
            raise ConfigError("max_iterations must be positive")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


def _check_domain(model: PotentialModel, z):
    if model.analytic_halfwidth == math.inf:
        return
    if np.any(np.abs(np.imag(np.asarray(z))) > model.analytic_halfwidth):
        raise AnalyticDomainError("outside analytic domain")


def eval_potential(model: PotentialModel, z):
    """Evaluate V(z).  Accepts real or complex scalars and numpy arrays."""
    _check_domain(model, z)
    p = model.params
    if model.kind == "harmonic":
        return 0.5 * model.mass * p["omega"] ** 2 * z * z
    if model.kind == "morse":
        u = np.exp(-p["a"] * (z - p.get("x0", 0.0)))
        return p["D"] * (1.0 - u) ** 2
    if model.kind == "quartic":
        z2 = z * z
        return 0.5 * z2 + p["lam"] * z2 * z2
    return np.polynomial.polynomial.polyval(z, p["coeffs"])


def eval_gradient(model: PotentialModel, z):
    """dV/dz, same evaluation domain as eval_potential."""
    _check_domain(model, z)
    p = model.params
    if model.kind == "harmonic":
        return model.mass * p["omega"] ** 2 * z
    if model.kind == "morse":
        u = np.exp(-p["a"] * (z - p.get("x0", 0.0)))
        return 2.0 * p["D"] * p["a"] * u * (1.0 - u)
    if model.kind == "quartic":
        return z + 4.0 * p["lam"] * z * z * z
    coeffs = p["coeffs"]
    dcoeffs = tuple(k * coeffs[k] for k in range(1, len(coeffs)))
    return np.polynomial.polynomial.polyval(z, dcoeffs)


def eval_F(model: PotentialModel, E: float, z):
    """F(z) = 2m(E - V(z)); vanishes exactly at the turning points."""
    return 2.0 * model.mass * (E - eval_potential(model, z))


def eval_dF(model: PotentialModel, E: float, z):
    """dF/dz = -2m V'(z)."""
    return -2.0 * model.mass * eval_gradient(model, z)


def well_minimum(model: PotentialModel) -> tuple[float, float]:
    """Location and value of the global minimum of V on the real line."""
    if model.kind == "harmonic":
        return 0.0, 0.0
    if model.kind == "morse":
        return model.params.get("x0", 0.0), 0.0
    if model.kind == "quartic":
        return 0.0, 0.0
    # Polynomial: coarse scan plus parabolic refinement.
    coeffs = model.params["coeffs"]
    L = 1.0
    while True:
        xs = np.linspace(-L, L, 4097)
        vs = np.polynomial.polynomial.polyval(xs, coeffs)
        i = int(np.argmin(vs))
        if 0 < i < len(xs) - 1:
            break
        L *= 2.0
        if L > 1e6:
            raise ConfigError("polynomial minimum not found")
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(
        lambda x: float(np.polynomial.polynomial.polyval(x, coeffs)),
        bracket=(xs[i - 1], xs[i], xs[i + 1]),
        method="brent",
        options={"xtol": 1e-14},
    )
    return float(res.x), float(res.fun)


def energy_ceiling(model: PotentialModel) -> float:
    """Dissociation energy above which no classical region is bounded."""
    if model.kind == "morse":
        return model.params["D"]
    return math.inf


def morse_level_capacity(model: PotentialModel, hbar: float = 1.0) -> int:
    """Largest level index n with n + 1/2 < sqrt(2mD)/(a*hbar)."""
    p = model.params
    bound = math.sqrt(2.0 * model.mass * p["D"]) / (p["a"] * hbar)
    n_max = int(math.ceil(bound - 0.5)) - 1
    return n_max


def closed_form_energy(model: PotentialModel, n: int, hbar: float = 1.0):
    """Closed-form level energy where one exists; None otherwise.

    Harmonic: (n + 1/2) hbar omega.  Morse: hbar w (n + 1/2)
    - [hbar w (n + 1/2)]^2 / (4D) with w = a sqrt(2D/m), valid only
    while increasing in n.
    """
    if n < 0:
        raise ConfigError("level index must be nonnegative")
    if model.kind == "harmonic":
        return (n + 0.5) * hbar * model.params["omega"]
    if model.kind == "morse":
        p = model.params
        if n > morse_level_capacity(model, hbar):
            raise NoBoundStateError(f"no bound state at level {n}")
        w = p["a"] * math.sqrt(2.0 * p["D"] / model.mass)
        s = hbar * w * (n + 0.5)
        return s - s * s / (4.0 * p["D"])
    return None
