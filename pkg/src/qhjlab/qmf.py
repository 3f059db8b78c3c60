"""Contour construction, wavefunction transport, and the quantum loop action.

The quantum momentum function p = -i hbar psi'/psi is meromorphic with
simple poles of residue -i hbar at the zeros of psi.  Transporting the
right-decaying solution once around a closed contour that encloses the
classical region and applying the periodic trapezoid rule to
(1/2 pi) * loop integral of p dz yields an integer multiple of hbar at
eigenvalues: the pole count equals the node count of the eigenfunction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .classical import TurningPair
from .errors import (
    AmbiguousPoleCountError,
    ContourDomainError,
    NodeOnContourError,
    RiccatiPoleError,
    StiffTransportError,
)
from .potentials import PotentialModel, SolverConfig, eval_F, eval_dF, eval_potential, well_minimum

#: Contour arcs per loop; the state is renormalized between arcs when needed.
_N_ARCS = 8

#: Decay e-folds between the contour entry point and the real anchor.
#: Growing-solution contamination in the seed is damped by exp(-2*efolds),
#: which must sit below the pointwise momentum tolerances.
_ANCHOR_EFOLDS = 16.0


def _anchor_point(model, E, x_entry: float, a: float, hbar: float,
                  direction: float = 1.0) -> float:
    """Real anchor deep enough in the forbidden region for a clean seed.

    At least one semi-axis beyond the contour entry, extended until the
    accumulated decay exponent reaches the target.
    """
    step = 0.01 * max(1.0, a)
    x = x_entry
    acc = 0.0
    kap_prev = 0.0
    while acc < _ANCHOR_EFOLDS and abs(x - x_entry) < 1000.0 * max(1.0, a):
        x += direction * step
        v = float(np.real(eval_potential(model, x)))
        kap = math.sqrt(max(2.0 * model.mass * (v - E), 0.0)) / hbar
        acc += 0.5 * (kap + kap_prev) * step
        kap_prev = kap
    return x


@dataclass(frozen=True)
class ContourSpec:
    """Counterclockwise axis-aligned ellipse in the complex position plane."""

    center: float
    semi_axis_real: float
    semi_axis_imag: float
    nodes: int

    def __post_init__(self):
        if self.semi_axis_real <= 0 or self.semi_axis_imag <= 0:
            raise ContourDomainError("contour semi-axes must be positive")
        if self.nodes < 64 or self.nodes % 2 != 0:
            raise ContourDomainError("contour nodes must be even and >= 64")

    def point(self, theta):
        return self.center + self.semi_axis_real * np.cos(theta) + 1j * self.semi_axis_imag * np.sin(theta)

    def tangent(self, theta):
        return -self.semi_axis_real * np.sin(theta) + 1j * self.semi_axis_imag * np.cos(theta)

    @property
    def thetas(self):
        return 2.0 * math.pi * np.arange(self.nodes) / self.nodes


@dataclass(frozen=True)
class QmfTrace:
    """Momentum-function samples along one closed contour.

    ``psi``/``dpsi`` are None for backends that never form the
    wavefunction.  ``closure_defect`` is p after the full loop minus p at
    the start; it must vanish (up to integration error) for an entire,
    single-valued wavefunction.
    """

    z: np.ndarray
    psi: np.ndarray | None
    dpsi: np.ndarray | None
    p: np.ndarray
    closure_defect: complex


@dataclass(frozen=True)
class ActionResult:
    """Quantum loop action with its diagnostic residuals."""

    J: complex
    n_est: int
    im_residual: float
    quantization_residual: float
    closure_residual: float


def build_contour(model: PotentialModel, tp: TurningPair, cfg: SolverConfig) -> ContourSpec:
    """Ellipse enclosing both turning points with the configured margin.

    The imaginary semi-axis is capped at twice the shortest local
    wavelength: off the real axis the transported solution picks up
    exponential growth ~exp(2 p b / hbar), which would amplify integration
    error on tall contours.  Flat contours sit closer to the momentum
    poles, which the trapezoid stage absorbs by using more nodes.
    """
    a = cfg.contour_margin * 0.5 * tp.width
    E = float(np.real(eval_potential(model, tp.x2)))
    _, v_min = well_minimum(model)
    p_max = math.sqrt(2.0 * model.mass * max(E - v_min, 1e-300))
    b = min(0.5 * a, 2.0 * cfg.hbar / p_max)
    if model.analytic_halfwidth <= 0:
        raise ContourDomainError("contour exceeds analytic domain")
    if b > model.analytic_halfwidth:
        b = 0.95 * model.analytic_halfwidth
    return ContourSpec(center=tp.center, semi_axis_real=a, semi_axis_imag=b, nodes=cfg.contour_nodes)


def _schrodinger_rhs(model, E, coeff, z_of_t, dz_of_t):
    def rhs(t, y):
        z = z_of_t(t)
        dz = dz_of_t(t)
        return [dz * y[1], dz * coeff * (eval_potential(model, z) - E) * y[0]]

    return rhs


def _integrate(rhs, t0, t1, y0, rtol, t_eval=None):
    scale = max(float(np.max(np.abs(y0))), 1e-30)
    sol = solve_ivp(
        rhs,
        (t0, t1),
        np.asarray(y0, dtype=complex),
        method="DOP853",
        rtol=rtol,
        atol=rtol * scale,
        t_eval=t_eval,
        dense_output=False,
    )
    if not sol.success:
        raise StiffTransportError(f"transport failed: {sol.message}")
    return sol


def transport_wavefunction(
    model: PotentialModel, E: float, contour: ContourSpec, cfg: SolverConfig
) -> QmfTrace:
    """Transport psi around the contour and record p = -i hbar psi'/psi.

    The right-decaying solution covers the right half of the contour and
    the left-decaying solution the left half, each seeded at a deep real
    anchor outside its own wall and swept toward the vertical midline.
    Near a steep outer wall only the solution that decays into that wall
    is numerically clean: any representable energy error feeds the
    growing branch there and would manufacture spurious interior zeros.
    At an eigenvalue the two solutions are the same function up to scale,
    so the midline momentum mismatch is the closure diagnostic.
    """
    hbar = cfg.hbar
    m = model.mass
    coeff = 2.0 * m / hbar**2
    c, a = contour.center, contour.semi_axis_real
    rtol = max(cfg.quadrature_tol, 1e-13)
    rhs_ell = _schrodinger_rhs(model, E, coeff, contour.point, contour.tangent)

    def entry_state(direction):
        """Decaying-branch state transported from a deep anchor to the
        contour crossing at center +/- a."""
        x_entry = c + direction * a
        x_anchor = _anchor_point(model, E, x_entry, a, hbar, direction)
        kappa = cmath.sqrt(coeff * (complex(eval_potential(model, x_anchor)) - E))
        F = complex(eval_F(model, E, x_anchor))
        # First-order decaying seed: psi'/psi = -/+ kappa - F'/(4F).
        slope = -direction * kappa - complex(eval_dF(model, E, x_anchor)) / (4.0 * F)
        y = np.array([1.0 + 0j, slope], dtype=complex)
        rhs_line = _schrodinger_rhs(
            model, E, coeff,
            lambda t: x_anchor + t * (x_entry - x_anchor),
            lambda t: x_entry - x_anchor,
        )
        return _integrate(rhs_line, 0.0, 1.0, y, rtol).y[:, -1]

    def sweep(y0, t0, t1, te, narcs):
        """Arc-by-arc quarter-loop transport with renormalization between
        arcs.  ``te`` is ordered along the integration direction; samples
        share any running scale pairwise, so p = psi'/psi is unaffected.
        Returns the final state and the psi/dpsi samples.
        """
        psis = np.empty(len(te), dtype=complex)
        dpsis = np.empty(len(te), dtype=complex)
        bounds = np.linspace(t0, t1, narcs + 1)
        d = 1.0 if t1 >= t0 else -1.0
        pos = 0
        y = np.asarray(y0, dtype=complex).copy()
        for k in range(narcs):
            a0, a1 = bounds[k], bounds[k + 1]
            end = (te - a1) * d
            mask = ((te - a0) * d >= 0) & (end <= 0 if k == narcs - 1 else end < 0)
            sel = te[mask]
            nsel = len(sel)
            appended = nsel == 0 or sel[-1] != a1
            run = np.concatenate([sel, [a1]]) if appended else sel
            sol = _integrate(rhs_ell, a0, a1, y, rtol, t_eval=run)
            psis[pos : pos + nsel] = sol.y[0, :nsel]
            dpsis[pos : pos + nsel] = sol.y[1, :nsel]
            pos += nsel
            y = sol.y[:, -1].copy()
            peak = float(np.max(np.abs(y)))
            if peak > 1e150:
                y = y / peak
        if pos:
            amax = float(np.max(np.abs(psis)))
            if amax == 0.0 or float(np.min(np.abs(psis))) < 1e-300 * amax:
                raise NodeOnContourError("wavefunction zero on the contour")
        return y, psis, dpsis

    y_right = entry_state(+1.0)
    y_left = entry_state(-1.0)

    thetas = contour.thetas
    two_pi = 2.0 * math.pi
    half_pi = 0.5 * math.pi
    tol = 1e-15
    # Quarter arcs: the decaying solution of each wall sweeps from its
    # crossing toward the midline, always with the dominant branch.
    idx_rt = np.nonzero(thetas <= half_pi + tol)[0]
    idx_lt = np.nonzero((thetas > half_pi + tol) & (thetas <= math.pi + tol))[0]
    idx_lb = np.nonzero((thetas > math.pi + tol) & (thetas <= 3.0 * half_pi + tol))[0]
    idx_rb = np.nonzero(thetas > 3.0 * half_pi + tol)[0]
    quarter = max(1, _N_ARCS // 4)

    y_rt, psi_rt, dpsi_rt = sweep(y_right, 0.0, half_pi, thetas[idx_rt], quarter)
    y_lt, psi_lt, dpsi_lt = sweep(y_left, math.pi, half_pi, thetas[idx_lt][::-1], quarter)
    y_lb, psi_lb, dpsi_lb = sweep(y_left, math.pi, 3.0 * half_pi, thetas[idx_lb], quarter)
    y_rb, psi_rb, dpsi_rb = sweep(y_right, two_pi, 3.0 * half_pi, thetas[idx_rb][::-1], quarter)

    psis = np.empty(contour.nodes, dtype=complex)
    dpsis = np.empty(contour.nodes, dtype=complex)
    psis[idx_rt], dpsis[idx_rt] = psi_rt, dpsi_rt
    psis[idx_lt], dpsis[idx_lt] = psi_lt[::-1], dpsi_lt[::-1]
    psis[idx_lb], dpsis[idx_lb] = psi_lb, dpsi_lb
    psis[idx_rb], dpsis[idx_rb] = psi_rb[::-1], dpsi_rb[::-1]

    def p_of(y):
        if y[0] == 0:
            raise NodeOnContourError("wavefunction zero on the contour")
        return -1j * hbar * y[1] / y[0]

    defect_top = p_of(y_lt) - p_of(y_rt)
    defect_bot = p_of(y_rb) - p_of(y_lb)
    defect = defect_top if abs(defect_top) >= abs(defect_bot) else defect_bot

    ps = -1j * hbar * dpsis / psis
    return QmfTrace(
        z=contour.point(thetas),
        psi=psis,
        dpsi=dpsis,
        p=ps,
        closure_defect=complex(defect),
    )


def quantum_action(trace: QmfTrace, contour: ContourSpec, cfg: SolverConfig) -> ActionResult:
    """(1/2 pi) * loop integral of p dz by the periodic trapezoid rule."""
    hbar = cfg.hbar
    zprime = contour.tangent(contour.thetas)
    J = complex(np.mean(trace.p * zprime))
    n_est = int(round(J.real / hbar))
    q_res = abs(J.real - n_est * hbar)
    result = ActionResult(
        J=J,
        n_est=n_est,
        im_residual=abs(J.imag),
        quantization_residual=q_res,
        closure_residual=abs(trace.closure_defect),
    )
    if q_res > 0.4 * hbar:
        raise AmbiguousPoleCountError(
            f"loop action {J} too far from an integer multiple of hbar"
        )
    return result


def riccati_seed(model: PotentialModel, E: float, z: complex, hbar: float) -> complex:
    """First-order momentum seed q0 + (i hbar / 4) F'/F at a regular point."""
    F = complex(eval_F(model, E, z))
    dF = complex(eval_dF(model, E, z))
    return cmath.sqrt(F) + 0.25j * hbar * dF / F


def riccati_transport(
    model: PotentialModel, E: float, contour: ContourSpec, cfg: SolverConfig
) -> QmfTrace:
    """Integrate the momentum-function Riccati equation around the contour.

    Experimental second backend: p' = i (F - p^2)/hbar (the sign that is
    consistent with p = -i hbar (ln psi)' and the expansion term
    q1 = (i/2) q0'/q0), seeded with the first-order semiclassical momentum
    at a far real anchor.  Intended for cross-validation against
    :func:`transport_wavefunction`.
    """
    hbar = cfg.hbar
    c, a = contour.center, contour.semi_axis_real
    rtol = max(cfg.quadrature_tol, 1e-13)
    x_anchor = _anchor_point(model, E, c + a, a, hbar)

    def rhs_factory(z_of_t, dz_of_t):
        def rhs(t, y):
            p = y[0]
            if abs(p) > 1e12:
                raise RiccatiPoleError("Riccati pole encounter")
            z = z_of_t(t)
            return [dz_of_t(t) * 1j * (eval_F(model, E, z) - p * p) / hbar]

        return rhs

    y = np.array([riccati_seed(model, E, x_anchor, hbar)], dtype=complex)
    rhs_line = rhs_factory(lambda t: x_anchor + t * (c + a - x_anchor), lambda t: c + a - x_anchor)
    y = _integrate(rhs_line, 0.0, 1.0, y, rtol).y[:, -1]

    thetas = contour.thetas
    rhs_ell = rhs_factory(contour.point, contour.tangent)
    sol = _integrate(rhs_ell, 0.0, 2.0 * math.pi, y, rtol, t_eval=np.concatenate([thetas, [2.0 * math.pi]]))
    ps = sol.y[0, :-1]
    p_close = sol.y[0, -1]
    return QmfTrace(
        z=contour.point(thetas),
        psi=None,
        dpsi=None,
        p=ps,
        closure_defect=complex(p_close - ps[0]),
    )
