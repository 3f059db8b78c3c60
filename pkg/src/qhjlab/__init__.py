"""Bound-state quantization via complex-contour loop actions.

The package cross-validates three quantization routes against a
brute-force reference: the exact integer loop condition on the quantum
momentum function, the half-integer semiclassical condition derived from
it, and torus-loop quantization for separable systems.
"""

from .classical import TurningPair, classical_action, classical_momentum, turning_points
from .ebk import (
    EbkResult,
    LoopSpec,
    QuantumNumbers,
    SeparableSystem,
    build_loops,
    ebk_spectrum,
    loop_action,
)
from .oracle import OracleConfig, oracle_eigenvalue, oracle_nodes
from .potentials import (
    PotentialModel,
    SolverConfig,
    closed_form_energy,
    eval_F,
    eval_potential,
    harmonic,
    morse,
    polynomial,
    quartic,
)
from .qmf import (
    ActionResult,
    ContourSpec,
    QmfTrace,
    build_contour,
    quantum_action,
    riccati_seed,
    riccati_transport,
    transport_wavefunction,
)
from .quantize import (
    SpectrumRow,
    matching_discriminant,
    node_count,
    qhj_energy,
    spectrum,
)
from .wkb import (
    ExpansionTerms,
    expansion_terms,
    first_order_qmf_on_path,
    residue_identity_check,
    wkb_energy,
)

__version__ = "0.1.0"
