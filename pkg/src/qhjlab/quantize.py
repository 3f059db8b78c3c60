"""1D eigenvalue production and the end-to-end exact-condition check.

Eigenvalues are located by two-sided shooting on the real axis (the loop
action is integer-stepped, so it cannot be root-found directly); the
integer loop condition is then enforced as a hard post-condition on the
refined energy, which keeps it falsifiable rather than circular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .classical import turning_points
from .errors import (
    AmbiguousCountError,
    ConfigError,
    DomainTooWideError,
    NoBoundStateError,
    QhjError,
    QuantizationMismatchError,
    StiffTransportError,
)
from .oracle import OracleConfig, oracle_eigenvalue, oracle_nodes
from .potentials import (
    PotentialModel,
    SolverConfig,
    closed_form_energy,
    energy_ceiling,
    eval_potential,
    well_minimum,
)
from .qmf import ActionResult, NodeOnContourError, build_contour, quantum_action, transport_wavefunction
from .wkb import wkb_energy

_SHOOT_RTOL = 1e-10


@dataclass(frozen=True)
class SpectrumRow:
    """Per-level record: energies by method plus loop-action evidence."""

    n: int
    E_qhj: float | None = None
    E_wkb: float | None = None
    E_oracle: float | None = None
    E_closed_form: float | None = None
    J_over_hbar: float | None = None
    node_count: int | None = None
    residual_quantization: float | None = None
    residual_im: float | None = None
    residual_closure: float | None = None
    error: str | None = None


def _anchor(model: PotentialModel, E: float, x_start: float, direction: float,
            hbar: float, efolds: float) -> float:
    """March outward from x_start until the decay exponent reaches efolds."""
    step = 0.01 * max(1.0, abs(x_start))
    x = x_start
    acc = 0.0
    kap_prev = 0.0
    for _ in range(1_000_000):
        x += direction * step
        v = float(np.real(eval_potential(model, x)))
        kap = math.sqrt(max(2.0 * model.mass * (v - E), 0.0)) / hbar
        acc += 0.5 * (kap + kap_prev) * step
        kap_prev = kap
        if acc >= efolds:
            return x
    raise DomainTooWideError("forbidden-region anchor search did not terminate")


def _shoot(model: PotentialModel, E: float, x_from: float, x_to: float,
           seed_slope: float, cfg: SolverConfig, t_eval=None):
    """Integrate psi'' = (2m/hbar^2)(V - E) psi along the real axis.

    The state is renormalized between segments, so overflow cannot occur;
    the scale factor is positive and continuous in E, which keeps
    discriminant sign changes meaningful.  Returns (psi, dpsi, samples)
    where samples is None or an array of psi at t_eval.
    """
    coeff = 2.0 * model.mass / cfg.hbar**2

    def rhs(x, y):
        return [y[1], coeff * (float(np.real(eval_potential(model, x))) - E) * y[0]]

    y = np.array([1.0, seed_slope])
    bounds = np.linspace(x_from, x_to, 9)
    collected = [] if t_eval is not None else None
    for k in range(8):
        t0, t1 = bounds[k], bounds[k + 1]
        te = None
        appended = True
        if t_eval is not None:
            # Signed coordinates along the integration direction; each sample
            # belongs to exactly one segment (boundary points to the later one).
            d = 1.0 if t1 >= t0 else -1.0
            mask = ((t_eval - t0) * d >= 0) & (
                (t_eval - t1) * d <= 0 if k == 7 else (t_eval - t1) * d < 0
            )
            te = t_eval[mask]
            appended = te.size == 0 or te[-1] != t1
            if appended:
                te = np.concatenate([te, [t1]])
        scale = max(abs(y[0]), abs(y[1]), 1e-30)
        sol = solve_ivp(rhs, (t0, t1), y, method="DOP853", rtol=_SHOOT_RTOL,
                        atol=_SHOOT_RTOL * scale, t_eval=te)
        if not sol.success:
            raise StiffTransportError(f"real-axis shooting failed: {sol.message}")
        if t_eval is not None:
            collected.append(sol.y[0, :-1] if appended else sol.y[0, :])
        y = sol.y[:, -1].copy()
        s = max(abs(y[0]), abs(y[1]))
        if s > 0:
            y /= s
            if collected is not None:
                collected = [c / s for c in collected]
    samples = np.concatenate(collected) if collected is not None else None
    return y[0], y[1], samples


def matching_discriminant(model: PotentialModel, E: float, cfg: SolverConfig) -> float:
    """Normalized Wronskian mismatch of the two decaying shots at the well center.

    Crosses zero exactly at eigenvalues; sign changes bracket them.
    """
    x_min, v_min = well_minimum(model)
    tp = turning_points(model, E)
    x_r = _anchor(model, E, tp.x2, +1.0, cfg.hbar, 15.0)
    x_l = _anchor(model, E, tp.x1, -1.0, cfg.hbar, 15.0)
    kappa_r = math.sqrt(max(2.0 * model.mass * (float(np.real(eval_potential(model, x_r))) - E), 0.0)) / cfg.hbar
    kappa_l = math.sqrt(max(2.0 * model.mass * (float(np.real(eval_potential(model, x_l))) - E), 0.0)) / cfg.hbar
    psi_r, dpsi_r, _ = _shoot(model, E, x_r, x_min, -kappa_r, cfg)
    psi_l, dpsi_l, _ = _shoot(model, E, x_l, x_min, +kappa_l, cfg)
    k_scale = math.sqrt(2.0 * model.mass * max(E - v_min, 1e-300)) / cfg.hbar
    # Phase-space amplitudes never vanish (unlike psi itself, which has a
    # node at the symmetric matching point for odd states), so the
    # normalized defect stays O(1) and crosses zero linearly.
    amp_r = math.hypot(psi_r, dpsi_r / k_scale)
    amp_l = math.hypot(psi_l, dpsi_l / k_scale)
    return float((dpsi_r * psi_l - dpsi_l * psi_r) / (k_scale * amp_r * amp_l))


def wavefunction_samples(model: PotentialModel, E: float, cfg: SolverConfig,
                         x_left: float | None = None, n_samples: int | None = None):
    """Sample the right-decaying solution on a descending grid.

    Returns (xs ascending, psi) with an arbitrary positive normalization.
    """
    tp = turning_points(model, E)
    x_r = _anchor(model, E, tp.x2, +1.0, cfg.hbar, 12.0)
    if x_left is None:
        x_left = _anchor(model, E, tp.x1, -1.0, cfg.hbar, 10.0)
    if n_samples is None:
        _, v_min = well_minimum(model)
        k_max = math.sqrt(2.0 * model.mass * max(E - v_min, 0.0)) / cfg.hbar
        n_samples = 4096 + 256 * int(k_max * tp.width)
    kappa_r = math.sqrt(max(2.0 * model.mass * (float(np.real(eval_potential(model, x_r))) - E), 0.0)) / cfg.hbar
    t_eval = np.linspace(x_r, x_left, n_samples)
    _, _, psi = _shoot(model, E, x_r, x_left, -kappa_r, cfg, t_eval=t_eval)
    return t_eval[::-1], psi[::-1]


def node_count(model: PotentialModel, E: float, cfg: SolverConfig) -> int:
    """Sign changes of the right-decaying solution across the well.

    Equals the number of eigenvalues strictly below E (Sturm oscillation),
    provided E is not too close to an eigenvalue.
    """
    w = matching_discriminant(model, E, cfg)
    if abs(w) < 1e-6:
        raise AmbiguousCountError(f"E={E} too close to an eigenvalue for node counting")
    xs, psi = wavefunction_samples(model, E, cfg)
    signs = np.sign(psi)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] * signs[:-1] < 0))


def _safe_count(model, E, cfg, nudge):
    for k in range(6):
        try:
            return node_count(model, E + k * nudge, cfg)
        except AmbiguousCountError:
            continue
    raise AmbiguousCountError(f"node count ambiguous near E={E}")


def qhj_energy(model: PotentialModel, n: int, cfg: SolverConfig = SolverConfig(),
               ) -> tuple[float, ActionResult]:
    """Level-n energy plus the loop-action evidence for it.

    Brackets around the semiclassical estimate, verifies the bracket with
    node counts, refines with Brent on the shooting discriminant, then
    transports the wavefunction around a contour and asserts that the loop
    action is n*hbar.
    """
    if n < 0:
        raise NoBoundStateError("level index must be nonnegative")
    _, v_min = well_minimum(model)
    ceiling = energy_ceiling(model)
    e_wkb = wkb_energy(model, n, cfg)

    spacings = []
    try:
        spacings.append(wkb_energy(model, n + 1, cfg) - e_wkb)
    except QhjError:
        pass
    if n >= 1:
        spacings.append(e_wkb - wkb_energy(model, n - 1, cfg))
    delta = 0.5 * min(spacings) if spacings else 0.5 * (e_wkb - v_min)
    nudge = 1e-5 * delta

    lo = max(e_wkb - delta, v_min + 0.05 * (e_wkb - v_min))
    hi = e_wkb + delta
    if math.isfinite(ceiling):
        hi = min(hi, e_wkb + 0.5 * (ceiling - e_wkb))

    for _ in range(60):
        if _safe_count(model, lo, cfg, nudge) <= n:
            break
        lo = v_min + 0.5 * (lo - v_min)
    for _ in range(60):
        if _safe_count(model, hi, cfg, nudge) >= n + 1:
            break
        if math.isfinite(ceiling):
            hi = hi + 0.5 * (ceiling * (1.0 - 1e-9) - hi)
        else:
            hi = hi + delta

    for _ in range(100):
        cl = _safe_count(model, lo, cfg, nudge)
        ch = _safe_count(model, hi, cfg, nudge)
        if cl == n and ch == n + 1:
            break
        mid = 0.5 * (lo + hi)
        if _safe_count(model, mid, cfg, nudge) <= n:
            lo = mid
        else:
            hi = mid
    else:
        raise NoBoundStateError(f"could not isolate level {n}")

    w_lo = matching_discriminant(model, lo, cfg)
    w_hi = matching_discriminant(model, hi, cfg)
    if w_lo * w_hi < 0:
        E = float(brentq(lambda e: matching_discriminant(model, e, cfg), lo, hi,
                         xtol=cfg.energy_tol, rtol=8.9e-16))
    else:
        # Discriminant sign did not flip (numerical edge); bisect on nodes.
        while hi - lo > cfg.energy_tol:
            mid = 0.5 * (lo + hi)
            if _safe_count(model, mid, cfg, nudge) <= n:
                lo = mid
            else:
                hi = mid
        E = 0.5 * (lo + hi)

    tp = turning_points(model, E)
    contour = build_contour(model, tp, cfg)
    last_err = None
    for _ in range(4):
        try:
            trace = transport_wavefunction(model, E, contour, cfg)
            break
        except NodeOnContourError as exc:
            last_err = exc
            contour = replace(contour, semi_axis_imag=1.1 * contour.semi_axis_imag)
    else:
        raise last_err
    act = quantum_action(trace, contour, cfg)
    # The periodic trapezoid rule converges geometrically, but higher levels
    # oscillate faster on the contour; double the node count until the
    # quadrature residuals fall well inside the certification tolerance.
    while (max(act.quantization_residual, act.im_residual) > 1e-9 * cfg.hbar
           and contour.nodes < 8192):
        contour = replace(contour, nodes=2 * contour.nodes)
        trace = transport_wavefunction(model, E, contour, cfg)
        act = quantum_action(trace, contour, cfg)
    if act.n_est != n or act.quantization_residual > 1e-6 * cfg.hbar:
        raise QuantizationMismatchError(
            f"loop action {act.J} does not certify level {n}", act
        )
    return E, act


def spectrum(model: PotentialModel, n_max: int,
             methods: tuple[str, ...] = ("qhj", "wkb", "oracle", "closed"),
             cfg: SolverConfig = SolverConfig(),
             ocfg: OracleConfig = OracleConfig()) -> list[SpectrumRow]:
    """One row per level 0..n_max; per-level errors annotate the row."""
    unknown = set(methods) - {"qhj", "wkb", "oracle", "closed"}
    if unknown:
        raise ConfigError(f"unknown methods: {sorted(unknown)}")
    rows = []
    for n in range(n_max + 1):
        fields: dict = {"n": n}
        errors = []
        if "qhj" in methods:
            try:
                E, act = qhj_energy(model, n, cfg)
                fields["E_qhj"] = E
                fields["J_over_hbar"] = act.J.real / cfg.hbar
                fields["node_count"] = act.n_est
                fields["residual_quantization"] = act.quantization_residual
                fields["residual_im"] = act.im_residual
                fields["residual_closure"] = act.closure_residual
            except QhjError as exc:
                errors.append(f"qhj: {exc}")
        if "wkb" in methods:
            try:
                fields["E_wkb"] = wkb_energy(model, n, cfg)
            except QhjError as exc:
                errors.append(f"wkb: {exc}")
        if "oracle" in methods:
            try:
                e_oracle = oracle_eigenvalue(model, n, ocfg, hbar=cfg.hbar)
                fields["E_oracle"] = e_oracle
                fields["node_count"] = oracle_nodes(model, e_oracle, ocfg, hbar=cfg.hbar)
            except QhjError as exc:
                errors.append(f"oracle: {exc}")
        if "closed" in methods:
            try:
                fields["E_closed_form"] = closed_form_energy(model, n, cfg.hbar)
            except QhjError as exc:
                errors.append(f"closed: {exc}")
        if errors:
            fields["error"] = f"level {n}: " + "; ".join(errors)
        rows.append(SpectrumRow(**fields))
    return rows
