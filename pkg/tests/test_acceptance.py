"""Acceptance gate: one test per release criterion, tolerances pinned.

Each test prints a single PASS line with the measured figure of merit so
`pytest -v -s` doubles as an acceptance report.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from qhjlab import (
    QuantumNumbers,
    SeparableSystem,
    build_contour,
    closed_form_energy,
    ebk_spectrum,
    harmonic,
    morse,
    oracle_eigenvalue,
    polynomial,
    qhj_energy,
    quantum_action,
    quartic,
    residue_identity_check,
    riccati_transport,
    transport_wavefunction,
    turning_points,
    wkb_energy,
)
from qhjlab.cli import main
from qhjlab.potentials import SolverConfig
from qhjlab.quantize import node_count

CFG = SolverConfig()

CATALOG = {
    "harmonic": harmonic(1.0, 1.0),
    "morse": morse(8.0, 1.0),
    "quartic": quartic(1.0, 1.0),
    "polynomial": polynomial((0.0, 0.0, 0.5, 0.1, 0.1)),
}


def _report(name, metric):
    print(f"PASS {name}: {metric}")


def test_criterion_01_exact_condition_harmonic():
    m = CATALOG["harmonic"]
    start = time.perf_counter()
    worst_E = worst_J = worst_im = 0.0
    for n in range(11):
        E, act = qhj_energy(m, n, CFG)
        worst_E = max(worst_E, abs(E - (n + 0.5)))
        worst_J = max(worst_J, abs(act.J.real - n * CFG.hbar))
        worst_im = max(worst_im, abs(act.J.imag))
    elapsed = time.perf_counter() - start
    assert worst_E <= 1e-8
    assert worst_J <= 1e-6 * CFG.hbar
    assert worst_im <= 1e-8 * CFG.hbar
    assert elapsed <= 10.0
    _report("criterion 1 (exact condition, n=0..10)",
            f"max|dE|={worst_E:.2e} max|J-n|={worst_J:.2e} "
            f"max|Im J|={worst_im:.2e} runtime={elapsed:.2f}s")


def test_criterion_02_residue_identity():
    cases = [(CATALOG["harmonic"], (0.7, 2.1, 5.5)),
             (CATALOG["quartic"], (1.0, 3.3, 6.0))]
    worst = 0.0
    for model, energies in cases:
        for E in energies:
            contour = build_contour(model, turning_points(model, E), CFG)
            rep = residue_identity_check(model, E, contour, CFG)
            assert rep.passed
            worst = max(worst, rep.deviation)
    assert worst <= 1e-8 * CFG.h
    _report("criterion 2 (residue identity, 6 cases)", f"max deviation={worst:.2e}*h")


def test_criterion_03_wkb_exactness():
    worst = 0.0
    for n in range(11):
        err = abs(wkb_energy(CATALOG["harmonic"], n, CFG) - (n + 0.5))
        worst = max(worst, err)
    for n in range(4):
        exact = closed_form_energy(CATALOG["morse"], n, CFG.hbar)
        worst = max(worst, abs(wkb_energy(CATALOG["morse"], n, CFG) - exact))
    assert worst <= 1e-6
    _report("criterion 3 (WKB exactness)", f"max|E_wkb-E_exact|={worst:.2e}")


def test_criterion_04_oracle_equivalence_quartic():
    m = CATALOG["quartic"]
    worst = 0.0
    for n in range(6):
        E, act = qhj_energy(m, n, CFG)
        worst = max(worst, abs(E - oracle_eigenvalue(m, n)))
        assert act.n_est == n
        assert node_count(m, E - 1e-4, CFG) == n
    assert worst <= 1e-6
    _report("criterion 4 (quartic vs oracle, n=0..5)", f"max|dE|={worst:.2e}")


def test_criterion_05_contour_invariance():
    worst = 0.0
    for name, model in CATALOG.items():
        n_max = 3
        for n in range(n_max + 1):
            E, _ = qhj_energy(model, n, CFG)
            tp = turning_points(model, E)
            values = []
            for margin in (1.2, 1.4, 1.6):
                for nodes in (256, 512):
                    c = SolverConfig(contour_margin=margin, contour_nodes=nodes)
                    contour = build_contour(model, tp, c)
                    tr = transport_wavefunction(model, E, contour, c)
                    values.append(quantum_action(tr, contour, c).J.real)
            worst = max(worst, max(values) - min(values))
    assert worst <= 1e-6 * CFG.hbar
    _report("criterion 5 (contour invariance, catalog x n<=3)",
            f"max J spread={worst:.2e}*hbar")


def test_criterion_06_schwarz_antisymmetry():
    worst = 0.0
    for model in CATALOG.values():
        for n in range(3):
            E, _ = qhj_energy(model, n, CFG)
            contour = build_contour(model, turning_points(model, E), CFG)
            p = transport_wavefunction(model, E, contour, CFG).p
            N = contour.nodes
            k = np.arange(1, N)
            worst = max(worst, float(np.max(np.abs(p[(N - k) % N] + np.conj(p[k])))))
    assert worst <= 1e-6
    _report("criterion 6 (Schwarz antisymmetry)", f"max deviation={worst:.2e}")


def test_criterion_07_semiclassical_limit():
    m = CATALOG["quartic"]
    errors = []
    for hbar in (1.0, 0.5, 0.25, 0.125):
        c = SolverConfig(hbar=hbar)
        errors.append(abs(wkb_energy(m, 0, c) - oracle_eigenvalue(m, 0, hbar=hbar)))
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert all(r >= 2.0 for r in ratios)
    _report("criterion 7 (hbar halving)",
            "errors=" + ",".join(f"{e:.2e}" for e in errors)
            + " ratios=" + ",".join(f"{r:.2f}" for r in ratios))


def test_criterion_08_separable_ebk():
    system = SeparableSystem((("x", harmonic(1.0, 1.0)), ("y", harmonic(1.0, 2.0))))
    worst_E = worst_J = worst_S = 0.0
    for n1 in range(4):
        for n2 in range(4):
            r = ebk_spectrum(system, QuantumNumbers((n1, n2)), CFG)
            exact = (n1 + 0.5) * 1.0 + (n2 + 0.5) * 2.0
            worst_E = max(worst_E, abs(r.total_energy - exact))
            for act, n in zip(r.loop_actions, (n1, n2)):
                worst_J = max(worst_J, abs(act.J.real - n * CFG.hbar))
            for s, n in zip(r.semiclassical_actions, (n1, n2)):
                worst_S = max(worst_S, abs(s - (n + 0.5) * CFG.h))
    assert worst_E <= 1e-8
    assert worst_J <= 1e-6 * CFG.hbar
    assert worst_S <= 1e-6 * CFG.h
    _report("criterion 8 (2D EBK, 16 tori)",
            f"max|dE|={worst_E:.2e} max|J-n|={worst_J:.2e} max|S-(n+1/2)h|={worst_S:.2e}")


def test_criterion_09_backend_cross_validation():
    m = CATALOG["harmonic"]
    worst = 0.0
    for n in (0, 1):
        E, _ = qhj_energy(m, n, CFG)
        contour = build_contour(m, turning_points(m, E), CFG)
        p_wave = transport_wavefunction(m, E, contour, CFG).p
        p_ricc = riccati_transport(m, E, contour, CFG).p
        worst = max(worst, float(np.max(np.abs(p_wave - p_ricc))))
    assert worst <= 1e-5
    _report("criterion 9 (Riccati vs wavefunction transport)", f"max|dp|={worst:.2e}")


def test_criterion_10_cli_determinism_and_golden(tmp_path, request):
    runner = CliRunner()
    args = ["spectrum", "--potential", "quartic", "--levels", "2",
            "--methods", "qhj,wkb,oracle"]
    first = runner.invoke(main, args + ["--out", str(tmp_path / "a.csv")])
    second = runner.invoke(main, args + ["--out", str(tmp_path / "b.csv")])
    assert first.exit_code == 0 and second.exit_code == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    golden = request.path.parent / "data" / "quartic_spectrum.csv"
    assert a == golden.read_bytes()
    _report("criterion 10 (CLI determinism + golden file)",
            f"{len(a)} bytes byte-identical across runs and vs pinned golden")
